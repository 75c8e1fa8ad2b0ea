#pragma once

#include <string>
#include <vector>

#include "qsp/prolate.hpp"
#include "qsp/qlct.hpp"
#include "qsp/signal.hpp"

namespace qsp {

struct RatioPair {
  double alpha = 0, beta = 0;
};

// ||p_tau f||^2 / ||f||^2.
double alpha_ratio(const QSignald& f, const Box& tau);

// ||p_sigma L(f)||^2 / ||f||^2 with L(f) evaluated on an n_gauss^2 Gauss-Legendre grid
// over the box; n_gauss = 0 picks a count resolving the window extent. Pass the spatial
// box as breakpoints when f jumps at its edges.
double beta_ratio(const QSignald& f, const ParamMatrix& A1, const ParamMatrix& A2, const Box& sigma, int n_gauss = 0,
                  const std::optional<Box>& breakpoints = std::nullopt);

// Same ratio through F(f~) over [-s1/b1, s1/b1] x [-s2/b2, s2/b2].
double beta_ratio_tilde(const QSignald& f, const ParamMatrix& A1, const ParamMatrix& A2, const Box& sigma,
                        int n_gauss = 0, const std::optional<Box>& breakpoints = std::nullopt);

// g = L^-1(G) for G = p_sigma e^-(u^2+v^2) / ||p_sigma e^-(u^2+v^2)||, by Gauss-Legendre
// quadrature of the inverse over the box.
QSignald truncated_gaussian(const Box& sigma, const ParamMatrix& A1, const ParamMatrix& A2, const Grid2D& space,
                            int n_gauss = 0);

// ||p_sigma e^-(u^2+v^2)||^2 in closed form.
double truncated_gaussian_norm2(const Box& sigma);

// p_tau e^-(x^2+y^2), unit energy.
QSignald time_limited_gaussian(const Box& tau, const Grid2D& space);

struct OptimalSignal {
  QSignald f;
  double A = 0, B = 0;
  double alpha = 0;   // measured
  double energy = 0;  // measured
};

// f~ = A psi0~ + B p_tau psi0~ with A = sqrt((1-a)/(1-mu0)), B = sqrt(a/mu0) - A.
OptimalSignal optimal_signal(double alpha_target, const QSignald& psi0_tilde, double mu0, const Box& tau);

// beta_max(a) = cos^2(acos sqrt(mu0) - acos sqrt(a)).
std::vector<RatioPair> extremal_curve(double mu0, const std::vector<double>& alphas);

// acos sqrt(alpha) + acos sqrt(beta) - acos sqrt(mu0).
double bound_margin(double alpha, double beta, double mu0);
double bound_margin(const QSignald& f, const Box& tau, const Box& sigma, const ParamMatrix& A1, const ParamMatrix& A2,
                    double mu0);

enum class Scenario { bandlimited, time_limited };

struct ComparisonCase {
  std::string label;
  ParamMatrix A1, A2;
  Scenario scenario = Scenario::bandlimited;
};

struct ComparisonRow {
  ComparisonCase params;
  double alpha_gauss = 0, alpha_psi0 = 0, beta_gauss = 0, beta_psi0 = 0;
  double margin = 0;  // min over the two signals
  bool ordering_ok = false;
};

struct ComparisonGeometry {
  double tau = 2, sigma = 2;
  // Cell-aligned box edges: nodes at half-integer multiples of the spacing.
  Grid2D grid = Grid2D::centered(1.0 / 16, 768);
  int n_quad = 64;
};

struct ConcentrationReport {
  double mu0 = 0;  // 2D eigenvalue
  std::vector<ComparisonRow> rows;
  std::vector<RatioPair> curve;
  double min_margin = 0;
  bool ok() const;
};

ConcentrationReport comparison_report(const std::vector<ComparisonCase>& cases, const ComparisonGeometry& geo = {});

// fig1..fig4 of the comparison: rotation and (0.3, 1, -1, 0), bandlimited and
// time-limited.
std::vector<ComparisonCase> preset_cases(const std::string& name);

inline constexpr double kMarginTolerance = 1e-6;

}  // namespace qsp
