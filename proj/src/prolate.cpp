#include "qsp/prolate.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lattice.hpp"
#include "special.hpp"

namespace qsp {

namespace {

constexpr double kPi = std::numbers::pi;

struct Eigenpairs {
  Eigen::VectorXd mu;
  Eigen::MatrixXd phi;
};

Eigen::MatrixXd kernel_matrix(double sigma, const Eigen::VectorXd& x, const Eigen::VectorXd& s) {
  Eigen::MatrixXd k(x.size(), s.size());
  for (Eigen::Index r = 0; r < x.size(); ++r)
    for (Eigen::Index c = 0; c < s.size(); ++c) k(r, c) = sinc_kernel(sigma, x(r) - s(c));
  return k;
}

// Symmetrized Nystrom eigensolve W^1/2 K W^1/2.
Eigenpairs nystrom(double sigma, const GaussRule& rule, int modes) {
  const Eigen::VectorXd sw = rule.weights.cwiseSqrt();
  const Eigen::MatrixXd k = sw.asDiagonal() * kernel_matrix(sigma, rule.nodes, rule.nodes) * sw.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
  if (es.info() != Eigen::Success) throw std::runtime_error("sinc-kernel eigensolve failed");
  const Eigen::Index n = rule.nodes.size();
  Eigenpairs out{Eigen::VectorXd(modes), Eigen::MatrixXd(n, modes)};
  for (int m = 0; m < modes; ++m) {
    const Eigen::Index col = n - 1 - m;
    out.mu(m) = es.eigenvalues()(col);
    // Sum w phi^2 = mu on the box, unit energy on the line.
    out.phi.col(m) = es.eigenvectors().col(col).cwiseQuotient(sw) * std::sqrt(std::max(out.mu(m), 0.0));
  }
  return out;
}

double sinc_kernel_dx(double sigma, double d) {
  // d/dx sin(sigma (x - s)) / (pi (x - s)) at x - s = d.
  const double t = sigma * d;
  if (std::abs(t) < 1e-4) return -sigma * sigma * t / (3 * kPi) * (1 - t * t / 10);
  return (t * std::cos(t) - std::sin(t)) / (kPi * d * d);
}

double extend_dx(const ProlateBasis& b, Eigen::Index n, double x) {
  double acc = 0;
  for (Eigen::Index k = 0; k < b.n_quad(); ++k) acc += b.weights(k) * b.phi(k, n) * sinc_kernel_dx(b.sigma, x - b.nodes(k));
  return acc / b.mu(n);
}

void fix_signs(ProlateBasis& b) {
  for (Eigen::Index n = 0; n < b.modes(); ++n) {
    const double probe = n % 2 == 0 ? extend_pswf(b, n, 0.0) : extend_dx(b, n, 0.0);
    if (probe < 0) b.phi.col(n) *= -1.0;
  }
}

// int_L^inf sin(sigma (x - s)) sin(sigma (x - t)) / ((x - s)(x - t)) dx for s, t < L.
double tail_pair(double sigma, double L, double s, double t) {
  const double ys = L - s, yt = L - t;
  const auto [si_s, ci_s] = detail::sine_cosine_integrals(2 * sigma * ys);
  if (std::abs(s - t) <= 1e-12 * std::max(1.0, std::abs(L))) {
    const double sn = std::sin(sigma * ys);
    return sn * sn / ys + sigma * (kPi / 2 - si_s);
  }
  const auto [si_t, ci_t] = detail::sine_cosine_integrals(2 * sigma * yt);
  // int_a^inf cos(2 sigma y + p) / y dy.
  auto cos_tail = [](double p, double si, double ci) { return -std::cos(p) * ci - std::sin(p) * (kPi / 2 - si); };
  const double j1 = cos_tail(sigma * (s - t), si_s, ci_s) - cos_tail(sigma * (t - s), si_t, ci_t);
  return (std::cos(sigma * (t - s)) * std::log(yt / ys) - j1) / (2 * (s - t));
}

}  // namespace

double sinc_kernel(double sigma, double d) {
  const double t = sigma * d;
  if (std::abs(t) < 1e-4) return sigma / kPi * (1 - t * t / 6 * (1 - t * t / 20));
  return std::sin(t) / (kPi * d);
}

GaussRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs n >= 1");
  GaussRule r{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5)), dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = p1;
      dp = n * (x * pn - p0) / (x * x - 1);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2 / ((1 - x * x) * dp * dp);
    r.nodes(i) = mid - half * x;
    r.nodes(n - 1 - i) = mid + half * x;
    r.weights(i) = r.weights(n - 1 - i) = half * w;
  }
  return r;
}

ProlateBasis solve_pswf_1d(double tau, double sigma, int n_quad, int n_max) {
  if (!(tau > 0) || !(sigma > 0)) throw std::invalid_argument("tau and sigma must be positive");
  if (n_max < 0) throw std::invalid_argument("n_max must be non-negative");
  if (n_quad < 4 * n_max || n_quad < 4) throw std::invalid_argument("n_quad must be at least 4 n_max");
  const int modes = std::max(n_max, 1);

  ProlateBasis b;
  b.tau = tau;
  b.sigma = sigma;
  b.c_ratio = sigma / tau;
  const GaussRule rule = gauss_legendre(n_quad, -tau, tau);
  b.nodes = rule.nodes;
  b.weights = rule.weights;
  Eigenpairs ep = nystrom(sigma, rule, modes);
  b.mu = ep.mu;
  b.phi = ep.phi;
  fix_signs(b);

  const Eigenpairs fine = nystrom(sigma, gauss_legendre(2 * n_quad, -tau, tau), modes);
  b.drift = (fine.mu - b.mu).cwiseAbs().maxCoeff();
  b.converged = b.drift <= kMuDriftTolerance;
  return b;
}

double extend_pswf(const ProlateBasis& b, Eigen::Index n, double x) {
  if (n < 0 || n >= b.modes()) throw std::out_of_range("prolate mode index out of range");
  double acc = 0;
  for (Eigen::Index k = 0; k < b.n_quad(); ++k) acc += b.weights(k) * b.phi(k, n) * sinc_kernel(b.sigma, x - b.nodes(k));
  return acc / b.mu(n);
}

Eigen::VectorXd extend_pswf(const ProlateBasis& b, Eigen::Index n, const Eigen::VectorXd& x) {
  if (n < 0 || n >= b.modes()) throw std::out_of_range("prolate mode index out of range");
  const Eigen::VectorXd wphi = b.weights.cwiseProduct(b.phi.col(n)) / b.mu(n);
  return kernel_matrix(b.sigma, x, b.nodes) * wphi;
}

Eigen::MatrixXd restricted_gram(const ProlateBasis& b) {
  const GaussRule r = gauss_legendre(int(2 * b.n_quad()), -b.tau, b.tau);
  Eigen::MatrixXd e(r.nodes.size(), b.modes());
  for (Eigen::Index n = 0; n < b.modes(); ++n) e.col(n) = extend_pswf(b, n, r.nodes);
  return e.transpose() * r.weights.asDiagonal() * e;
}

Eigen::MatrixXd exterior_gram(const ProlateBasis& b, double lo, double hi) {
  if (!(hi > b.tau) || !(-lo > b.tau)) throw std::invalid_argument("exterior must lie outside [-tau, tau]");
  const Eigen::Index nq = b.n_quad();
  Eigen::MatrixXd pair(nq, nq);
  for (Eigen::Index k = 0; k < nq; ++k)
    for (Eigen::Index l = 0; l <= k; ++l) {
      const double s = b.nodes(k), t = b.nodes(l);
      // x < lo mirrors to x' > -lo with nodes negated.
      pair(k, l) = pair(l, k) = tail_pair(b.sigma, hi, s, t) + tail_pair(b.sigma, -lo, -s, -t);
    }
  Eigen::MatrixXd alpha(nq, b.modes());
  for (Eigen::Index n = 0; n < b.modes(); ++n) alpha.col(n) = b.weights.cwiseProduct(b.phi.col(n)) / (kPi * b.mu(n));
  return alpha.transpose() * pair * alpha;
}

Eigen::MatrixXd whole_line_gram(const ProlateBasis& b, double half_width, double step) {
  if (!(half_width > b.tau) || !(step > 0)) throw std::invalid_argument("whole_line_gram needs half_width > tau, step > 0");
  const Eigen::Index n = Eigen::Index(std::ceil(2 * half_width / step)) + 1;
  const double h = 2 * half_width / double(n - 1);
  Eigen::VectorXd xs(n);
  for (Eigen::Index k = 0; k < n; ++k) xs(k) = -half_width + h * double(k);
  const Eigen::VectorXd w = trapezoid_weights<double>(n, h).matrix();
  Eigen::MatrixXd e(n, b.modes());
  for (Eigen::Index m = 0; m < b.modes(); ++m) e.col(m) = extend_pswf(b, m, xs);
  return e.transpose() * w.asDiagonal() * e + exterior_gram(b, -half_width, half_width);
}

QSignald build_qpswf(const ProlateBasis& b, Eigen::Index n, const Grid2D& grid) {
  const double need = 3 * b.tau * (1 - 1e-12);
  if (grid.x_min > -need || grid.x_max < need || grid.y_min > -need || grid.y_max < need)
    throw std::invalid_argument("grid too small: a prolate signal needs a window covering [-3 tau, 3 tau]^2");
  const Eigen::VectorXd px = extend_pswf(b, n, detail::nodes(detail::x_lattice(grid)));
  const Eigen::VectorXd py = extend_pswf(b, n, detail::nodes(detail::y_lattice(grid)));
  QSignald s(grid);
  s.c[0] = (px * py.transpose()).array();
  const double in_x = 1 - exterior_gram(b, grid.x_min, grid.x_max)(n, n);
  const double in_y = 1 - exterior_gram(b, grid.y_min, grid.y_max)(n, n);
  s.exterior_energy = 1 - in_x * in_y;
  return s;
}

QSignald tilde_map(const QSignald& psi, const ParamMatrix& A1, const ParamMatrix& A2, double c) {
  if (!(A1.b > 0) || !(A2.b > 0)) throw std::invalid_argument("tilde map requires b1 > 0 and b2 > 0");
  return chirp_sandwich(psi, c * A1.a / (2 * A1.b), c * A2.a / (2 * A2.b));
}

QSignald inverse_tilde_map(const QSignald& psi_tilde, const ParamMatrix& A1, const ParamMatrix& A2, double c) {
  if (!(A1.b > 0) || !(A2.b > 0)) throw std::invalid_argument("tilde map requires b1 > 0 and b2 > 0");
  return chirp_sandwich(psi_tilde, -c * A1.a / (2 * A1.b), -c * A2.a / (2 * A2.b));
}

QSignald qpswf_for(const ProlateBasis& b, Eigen::Index n, const Grid2D& grid, const ParamMatrix& A1,
                   const ParamMatrix& A2) {
  return inverse_tilde_map(build_qpswf(b, n, grid), A1, A2, b.c_ratio);
}

double lowpass_residual(const QSignald& f, const ProlateBasis& b, Eigen::Index n) {
  if (n < 0 || n >= b.modes()) throw std::out_of_range("prolate mode index out of range");
  if (!(window_energy(f) > 0)) throw std::domain_error("lowpass_residual of a zero-energy signal");
  const Grid2D& g = f.grid;
  if (g.x_min > -b.tau || g.x_max < b.tau || g.y_min > -b.tau || g.y_max < b.tau)
    throw std::invalid_argument("signal window does not contain the basis box");
  const Eigen::VectorXd xs = detail::nodes(detail::x_lattice(g)), ys = detail::nodes(detail::y_lattice(g));
  const Eigen::VectorXd wx = interval_weights(g.x_min, g.dx(), g.nx, -b.tau, b.tau).matrix();
  const Eigen::VectorXd wy = interval_weights(g.y_min, g.dy(), g.ny, -b.tau, b.tau).matrix();
  const Eigen::MatrixXd kx = kernel_matrix(b.sigma, xs, xs) * wx.asDiagonal();
  const Eigen::MatrixXd ky = kernel_matrix(b.sigma, ys, ys) * wy.asDiagonal();
  const double mu2 = b.mu(n) * b.mu(n);
  Array2<double> dev2 = Array2<double>::Zero(g.nx, g.ny);
  for (int k = 0; k < 4; ++k) {
    const Array2<double> lhs = (kx * f.c[k].matrix() * ky.transpose()).array();
    dev2 += (lhs - mu2 * f.c[k]).square();
  }
  return std::sqrt(dev2.maxCoeff()) / (mu2 * f.max_abs());
}

FiniteQlctCheck finite_qlct_check(const ProlateBasis& b, Eigen::Index n, const ParamMatrix& A1, const ParamMatrix& A2) {
  if (n < 0 || n >= b.modes()) throw std::out_of_range("prolate mode index out of range");
  if (!(A1.b > 0) || !(A2.b > 0)) throw std::invalid_argument("finite_qlct_check requires b1 > 0 and b2 > 0");
  const double c = b.c_ratio;
  if (std::abs(c * A1.b - 1) > 1e-9 || std::abs(c * A2.b - 1) > 1e-9)
    throw std::domain_error("finite-transform modulus identity is checked only for c b1 = c b2 = 1");
  const ParamMatrix S1 = ParamMatrix::unchecked(c * A1.a, A1.b, c * A1.c, c * A1.d);
  const ParamMatrix S2 = ParamMatrix::unchecked(c * A2.a, A2.b, c * A2.c, c * A2.d);

  const Eigen::VectorXd& s = b.nodes;
  const Eigen::VectorXd& w = b.weights;
  const Eigen::VectorXd p = b.phi.col(n);
  // psi_n = e^(-i c a1 x^2/2b1) phi(x) phi(y) e^(-j c a2 y^2/2b2) on the node grid.
  QPlanes<double> psi;
  {
    const Eigen::Index m = s.size();
    Eigen::VectorXcd cx(m), cy(m);
    for (Eigen::Index k = 0; k < m; ++k) {
      cx(k) = std::polar(1.0, -c * A1.a * s(k) * s(k) / (2 * A1.b));
      cy(k) = std::polar(1.0, -c * A2.a * s(k) * s(k) / (2 * A2.b));
    }
    QPlanes<double> real{Array2<double>((p * p.transpose()).array()), Array2<double>::Zero(m, m),
                         Array2<double>::Zero(m, m), Array2<double>::Zero(m, m)};
    psi = detail::separable_apply(real, detail::CMatrix(cx.asDiagonal()), detail::CMatrix(cy.asDiagonal()));
  }
  const detail::CMatrix L = detail::kernel_matrix(s, s, w, [&](double x, double u) { return kernel_value(S1, x, u); });
  const detail::CMatrix R =
      detail::kernel_matrix(s, s, w, [&](double y, double v) { return kernel_value(S2, y, v); }).transpose();
  const QPlanes<double> out = detail::separable_apply(psi, L, R);

  auto modulus = [](const QPlanes<double>& q) {
    return Array2<double>((q[0].square() + q[1].square() + q[2].square() + q[3].square()).sqrt());
  };
  const Array2<double> mo = modulus(out), mp = modulus(psi);
  FiniteQlctCheck r;
  const double mu2d = b.mu(n) * b.mu(n);
  r.lambda_expected = std::sqrt(mu2d / (std::pow(c, 4) * A1.b * A2.b));
  Eigen::Index pi = 0, pj = 0;
  mp.maxCoeff(&pi, &pj);
  r.lambda_measured = mo(pi, pj) / mp(pi, pj);
  r.mu_from_lambda = std::pow(c, 4) * A1.b * A2.b * r.lambda_measured * r.lambda_measured;
  r.modulus_residual = (mo - r.lambda_expected * mp).abs().maxCoeff() / (r.lambda_expected * mp.maxCoeff());
  return r;
}

}  // namespace qsp
