#pragma once

#include <Eigen/Dense>

#include "qsp/qlct.hpp"
#include "qsp/signal.hpp"

namespace qsp {

struct GaussRule {
  Eigen::VectorXd nodes, weights;
};

// n-point Gauss-Legendre rule on [a, b].
GaussRule gauss_legendre(int n, double a, double b);

// Eigenpairs of the sinc kernel sin s(x-y) / (pi (x-y)) restricted to [-tau, tau].
struct ProlateBasis {
  double tau = 0, sigma = 0, c_ratio = 0;
  Eigen::VectorXd nodes, weights;
  // Descending; mu(n) is the fraction of the energy of phi_n inside [-tau, tau].
  Eigen::VectorXd mu;
  // phi(k, n) = phi_n(nodes(k)); unit energy on the whole line.
  Eigen::MatrixXd phi;
  // max |mu(n) - mu'(n)| against a solve with twice the nodes.
  double drift = 0;
  bool converged = true;

  Eigen::Index modes() const { return mu.size(); }
  Eigen::Index n_quad() const { return nodes.size(); }
};

inline constexpr double kMuDriftTolerance = 1e-8;

// n_max is the number of modes kept (at least one); n_quad >= 4 n_max. The solve is
// repeated with 2 n_quad nodes to fill drift and converged.
ProlateBasis solve_pswf_1d(double tau, double sigma, int n_quad, int n_max);

double sinc_kernel(double sigma, double d);

// phi_n(x) = (1/mu_n) sum_k w_k phi_n(s_k) K(x, s_k).
double extend_pswf(const ProlateBasis& basis, Eigen::Index n, double x);
Eigen::VectorXd extend_pswf(const ProlateBasis& basis, Eigen::Index n, const Eigen::VectorXd& x);

// Gram matrix of the extended modes over [-tau, tau], by a fresh Gauss rule with twice
// the basis nodes; ideal value diag(mu).
Eigen::MatrixXd restricted_gram(const ProlateBasis& basis);

// Integrals of phi_n phi_m over x > hi and x < lo (hi, -lo > tau) in closed form through
// the sine and cosine integrals.
Eigen::MatrixXd exterior_gram(const ProlateBasis& basis, double lo, double hi);

// Whole-line Gram matrix: trapezoid on [-half_width, half_width] at the given step plus
// the closed-form exterior; ideal value the identity.
Eigen::MatrixXd whole_line_gram(const ProlateBasis& basis, double half_width, double step);

// phi_n(x) phi_n(y) on the grid, unit energy on the plane; the energy beyond the window
// is carried in exterior_energy. The grid must cover [-3 tau, 3 tau]^2.
QSignald build_qpswf(const ProlateBasis& basis, Eigen::Index n, const Grid2D& grid);

// e^(i c a1 x^2/2b1) psi e^(j c a2 y^2/2b2).
QSignald tilde_map(const QSignald& psi, const ParamMatrix& A1, const ParamMatrix& A2, double c_ratio);
QSignald inverse_tilde_map(const QSignald& psi_tilde, const ParamMatrix& A1, const ParamMatrix& A2, double c_ratio);

// Finite-transform eigenfunction for (A1, A2): the inverse tilde map of build_qpswf.
QSignald qpswf_for(const ProlateBasis& basis, Eigen::Index n, const Grid2D& grid, const ParamMatrix& A1,
                   const ParamMatrix& A2);

// max |int_box psi~ K K - mu_n^2 psi~| / max |mu_n^2 psi~| over the grid nodes.
double lowpass_residual(const QSignald& psi_tilde, const ProlateBasis& basis, Eigen::Index n);

struct FiniteQlctCheck {
  double modulus_residual = 0;  // max ||T psi| - |lambda| |psi|| / max |lambda| |psi|
  double lambda_expected = 0;   // sqrt(mu / (c^4 b1 b2)), mu the 2D eigenvalue
  double lambda_measured = 0;   // |T psi| / |psi| at the peak of |psi|
  double mu_from_lambda = 0;    // c^4 b1 b2 lambda_measured^2
};

// Box-restricted transform with kernels of (c a, b; c c, c d) applied to the
// finite-transform eigenfunction, sampled on the basis nodes. The modulus identity
// holds when c b1 = c b2 = 1.
FiniteQlctCheck finite_qlct_check(const ProlateBasis& basis, Eigen::Index n, const ParamMatrix& A1,
                                  const ParamMatrix& A2);

}  // namespace qsp
