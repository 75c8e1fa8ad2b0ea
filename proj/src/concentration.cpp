#include "qsp/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lattice.hpp"

namespace qsp {

namespace {

constexpr double kPi = std::numbers::pi;

double window_extent_x(const Grid2D& g) { return std::max(std::abs(g.x_min), std::abs(g.x_max)); }
double window_extent_y(const Grid2D& g) { return std::max(std::abs(g.y_min), std::abs(g.y_max)); }

// Enough Gauss-Legendre nodes to integrate e^(i x u / b) products over |u| <= half_band
// for |x| <= extent.
int auto_nodes(double extent, double half_band, double chirp = 0) {
  const double k = extent * half_band + chirp;
  return std::clamp(int(std::ceil(1.5 * k)) + 24, 32, 2048);
}

double planes_quadrature(const QPlanes<double>& q, const Eigen::VectorXd& wu, const Eigen::VectorXd& wv) {
  const Array2<double> a2 = q[0].square() + q[1].square() + q[2].square() + q[3].square();
  return (wu.transpose() * a2.matrix() * wv)(0, 0);
}

void require_energy(double e) {
  if (!(e > 0)) throw std::domain_error("ratio of a zero-energy signal");
}

}  // namespace

double alpha_ratio(const QSignald& f, const Box& tau) {
  const double e = split_energy(f, tau);
  require_energy(e);
  return box_energy(f, tau) / e;
}

double beta_ratio(const QSignald& f, const ParamMatrix& A1, const ParamMatrix& A2, const Box& sigma, int n_gauss,
                  const std::optional<Box>& breakpoints) {
  const double e = breakpoints ? split_energy(f, *breakpoints) : energy(f);
  require_energy(e);
  const int nu = n_gauss > 0 ? n_gauss : auto_nodes(window_extent_x(f.grid), sigma.hx / A1.b);
  const int nv = n_gauss > 0 ? n_gauss : auto_nodes(window_extent_y(f.grid), sigma.hy / A2.b);
  const GaussRule ru = gauss_legendre(nu, -sigma.hx, sigma.hx), rv = gauss_legendre(nv, -sigma.hy, sigma.hy);
  return planes_quadrature(qlct_evaluate(f, A1, A2, ru.nodes, rv.nodes, breakpoints), ru.weights, rv.weights) / e;
}

double beta_ratio_tilde(const QSignald& f, const ParamMatrix& A1, const ParamMatrix& A2, const Box& sigma,
                        int n_gauss, const std::optional<Box>& breakpoints) {
  const QSignald ft = chirp_tilde(f, A1, A2);
  const double e = breakpoints ? split_energy(ft, *breakpoints) : energy(ft);
  require_energy(e);
  const double s1 = sigma.hx / A1.b, s2 = sigma.hy / A2.b;
  const int nu = n_gauss > 0 ? n_gauss : auto_nodes(window_extent_x(f.grid), s1);
  const int nv = n_gauss > 0 ? n_gauss : auto_nodes(window_extent_y(f.grid), s2);
  const GaussRule ru = gauss_legendre(nu, -s1, s1), rv = gauss_legendre(nv, -s2, s2);
  return planes_quadrature(qft_evaluate(ft, ru.nodes, rv.nodes, breakpoints), ru.weights, rv.weights) /
         (4 * kPi * kPi * e);
}

double truncated_gaussian_norm2(const Box& sigma) {
  const double c = std::sqrt(kPi / 2);
  return c * std::erf(std::sqrt(2.0) * sigma.hx) * c * std::erf(std::sqrt(2.0) * sigma.hy);
}

QSignald truncated_gaussian(const Box& sigma, const ParamMatrix& A1, const ParamMatrix& A2, const Grid2D& space,
                            int n_gauss) {
  if (!(A1.b > 0) || !(A2.b > 0)) throw std::invalid_argument("truncated_gaussian requires b1 > 0 and b2 > 0");
  const int nu = n_gauss > 0 ? n_gauss
                             : auto_nodes(window_extent_x(space), sigma.hx / A1.b,
                                          std::abs(A1.d) * sigma.hx * sigma.hx / (2 * A1.b));
  const int nv = n_gauss > 0 ? n_gauss
                             : auto_nodes(window_extent_y(space), sigma.hy / A2.b,
                                          std::abs(A2.d) * sigma.hy * sigma.hy / (2 * A2.b));
  const GaussRule ru = gauss_legendre(nu, -sigma.hx, sigma.hx), rv = gauss_legendre(nv, -sigma.hy, sigma.hy);
  const double norm = std::sqrt(truncated_gaussian_norm2(sigma));
  QPlanes<double> G;
  G[0] = (ru.nodes.array().square().exp().inverse().matrix() * rv.nodes.array().square().exp().inverse().matrix().transpose())
             .array() /
         norm;
  for (int k = 1; k < 4; ++k) G[k] = Array2<double>::Zero(nu, nv);
  const ParamMatrix B1 = A1.inverse(), B2 = A2.inverse();
  const Eigen::VectorXd xs = detail::nodes(detail::x_lattice(space)), ys = detail::nodes(detail::y_lattice(space));
  const detail::CMatrix L =
      detail::kernel_matrix(xs, ru.nodes, ru.weights, [&](double u, double x) { return kernel_value(B1, u, x); });
  const detail::CMatrix R =
      detail::kernel_matrix(ys, rv.nodes, rv.weights, [&](double v, double y) { return kernel_value(B2, v, y); })
          .transpose();
  QSignald g(space);
  g.c = detail::separable_apply(G, L, R);
  return g;
}

QSignald time_limited_gaussian(const Box& tau, const Grid2D& space) {
  QSignald g = project_box(QSignald::sample(space, [](double x, double y) { return Quaterniond(std::exp(-(x * x + y * y))); }),
                           tau);
  return (1.0 / std::sqrt(box_energy(g, tau))) * g;
}

OptimalSignal optimal_signal(double alpha_target, const QSignald& psi0_tilde, double mu0, const Box& tau) {
  if (!(mu0 > 0 && mu0 < 1)) throw std::domain_error("mu0 must lie in (0, 1)");
  if (!(alpha_target > mu0) || !(alpha_target < 1))
    throw std::domain_error("alpha_target must lie in (mu0, 1); at or below mu0 the extremal beta is 1");
  OptimalSignal r;
  r.A = std::sqrt((1 - alpha_target) / (1 - mu0));
  r.B = std::sqrt(alpha_target / mu0) - r.A;
  r.f = r.A * psi0_tilde + r.B * project_box(psi0_tilde, tau);
  r.energy = split_energy(r.f, tau);
  r.alpha = alpha_ratio(r.f, tau);
  return r;
}

std::vector<RatioPair> extremal_curve(double mu0, const std::vector<double>& alphas) {
  if (!(mu0 > 0 && mu0 < 1)) throw std::domain_error("mu0 must lie in (0, 1)");
  std::vector<RatioPair> out;
  out.reserve(alphas.size());
  const double t0 = std::acos(std::sqrt(mu0));
  for (double a : alphas) {
    if (!(a > 0 && a <= 1)) throw std::domain_error("alpha must lie in (0, 1]");
    const double c = std::cos(t0 - std::acos(std::sqrt(a)));
    out.push_back({a, c * c});
  }
  return out;
}

double bound_margin(double alpha, double beta, double mu0) {
  auto ang = [](double r) { return std::acos(std::sqrt(std::clamp(r, 0.0, 1.0))); };
  return ang(alpha) + ang(beta) - ang(mu0);
}

double bound_margin(const QSignald& f, const Box& tau, const Box& sigma, const ParamMatrix& A1, const ParamMatrix& A2,
                    double mu0) {
  return bound_margin(alpha_ratio(f, tau), beta_ratio(f, A1, A2, sigma, 0, tau), mu0);
}

bool ConcentrationReport::ok() const {
  if (min_margin < -kMarginTolerance) return false;
  return std::all_of(rows.begin(), rows.end(), [](const ComparisonRow& r) { return r.ordering_ok; });
}

ConcentrationReport comparison_report(const std::vector<ComparisonCase>& cases, const ComparisonGeometry& geo) {
  if (cases.empty()) throw std::invalid_argument("comparison_report needs at least one parameter set");
  const ProlateBasis basis = solve_pswf_1d(geo.tau, geo.sigma, geo.n_quad, 1);
  const Box tau(geo.tau), sigma(geo.sigma);
  ConcentrationReport rep;
  rep.mu0 = basis.mu(0) * basis.mu(0);
  rep.min_margin = 1e300;
  for (const ComparisonCase& cs : cases) {
    ComparisonRow row;
    row.params = cs;
    QSignald g, psi;
    if (cs.scenario == Scenario::bandlimited) {
      g = truncated_gaussian(sigma, cs.A1, cs.A2, geo.grid);
      psi = qpswf_for(basis, 0, geo.grid, cs.A1, cs.A2);
      row.beta_gauss = beta_ratio(g, cs.A1, cs.A2, sigma);
      row.beta_psi0 = beta_ratio(psi, cs.A1, cs.A2, sigma);
    } else {
      g = time_limited_gaussian(tau, geo.grid);
      const QSignald p = project_box(qpswf_for(basis, 0, geo.grid, cs.A1, cs.A2), tau);
      psi = (1.0 / std::sqrt(box_energy(p, tau))) * p;
      row.beta_gauss = beta_ratio_tilde(g, cs.A1, cs.A2, sigma, 0, tau);
      row.beta_psi0 = beta_ratio_tilde(psi, cs.A1, cs.A2, sigma, 0, tau);
    }
    row.alpha_gauss = alpha_ratio(g, tau);
    row.alpha_psi0 = alpha_ratio(psi, tau);
    row.margin = std::min(bound_margin(row.alpha_gauss, row.beta_gauss, rep.mu0),
                          bound_margin(row.alpha_psi0, row.beta_psi0, rep.mu0));
    row.ordering_ok = cs.scenario == Scenario::bandlimited ? row.alpha_psi0 > row.alpha_gauss
                                                           : row.beta_psi0 >= row.beta_gauss;
    rep.min_margin = std::min(rep.min_margin, row.margin);
    rep.rows.push_back(row);
  }
  std::vector<double> alphas;
  for (int k = 0; k <= 20; ++k) alphas.push_back(rep.mu0 + (1 - rep.mu0) * k / 20.0);
  rep.curve = extremal_curve(rep.mu0, alphas);
  return rep;
}

std::vector<ComparisonCase> preset_cases(const std::string& name) {
  const ParamMatrix rot = ParamMatrix::rotation(), chirped(0.3, 1, -1, 0), caption(0, 1, -1, 0.1);
  if (name == "fig1") return {{"fig1", rot, rot, Scenario::bandlimited}};
  if (name == "fig2") return {{"fig2", chirped, chirped, Scenario::bandlimited}};
  if (name == "fig3") return {{"fig3", rot, rot, Scenario::time_limited}};
  if (name == "fig4") return {{"fig4", chirped, chirped, Scenario::time_limited}};
  if (name == "fig2-caption") return {{"fig2-caption", caption, caption, Scenario::bandlimited}};
  if (name == "fig-all") {
    std::vector<ComparisonCase> all;
    for (const char* n : {"fig1", "fig2", "fig3", "fig4"}) all.push_back(preset_cases(n).front());
    return all;
  }
  throw std::invalid_argument("unknown preset '" + name + "'");
}

}  // namespace qsp
