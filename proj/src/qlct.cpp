#include "qsp/qlct.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "lattice.hpp"

namespace qsp {

using detail::cd;
using detail::CMatrix;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * kPi;

void require_positive_b(const ParamMatrix& A1, const ParamMatrix& A2) {
  if (!(A1.b > 0) || !(A2.b > 0)) throw std::invalid_argument("transform requires b1 > 0 and b2 > 0");
}

Quaterniond embed(Axis axis, cd z) { return axis_complex(axis, z.real(), z.imag()); }

Eigen::VectorXd axis_weights(std::ptrdiff_t n, double h) { return trapezoid_weights<double>(n, h).matrix(); }

// (2 pi b)^(-1/2) e^(-axis pi/4) e^(axis d u^2/2b) for each output node.
Eigen::VectorXcd output_factor(const ParamMatrix& A, const Eigen::VectorXd& u) {
  Eigen::VectorXcd r(u.size());
  const double s = 1.0 / std::sqrt(kTwoPi * A.b);
  for (Eigen::Index k = 0; k < u.size(); ++k) r(k) = std::polar(s, A.d * u(k) * u(k) / (2 * A.b) - kPi / 4);
  return r;
}

}  // namespace

ParamMatrix::ParamMatrix(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {
  if (!std::isfinite(a + b + c + d)) throw InvalidMatrix("matrix entries must be finite");
  const double det = a * d - b * c;
  if (std::abs(det - 1.0) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "matrix (" << a << ", " << b << ", " << c << ", " << d << ") has determinant " << det << ", expected 1";
    throw InvalidMatrix(os.str());
  }
}

std::string ParamMatrix::str() const {
  std::ostringstream os;
  os.precision(17);
  os << a << ',' << b << ',' << c << ',' << d;
  return os.str();
}

cd kernel_value(const ParamMatrix& A, double x, double u) {
  if (A.b == 0.0) {
    if (A.d < 0) throw std::domain_error("b = 0 kernel needs d >= 0 for sqrt(d)");
    return std::polar(std::sqrt(A.d), A.c * A.d * u * u / 2);
  }
  const double phase = (A.a * x * x - 2 * x * u + A.d * u * u) / (2 * A.b);
  const double branch = A.b > 0 ? -kPi / 4 : kPi / 4;
  return std::polar(1.0 / std::sqrt(kTwoPi * std::abs(A.b)), phase + branch);
}

Quaterniond kernel_i(const ParamMatrix& A1, double x, double u) { return embed(Axis::i, kernel_value(A1, x, u)); }
Quaterniond kernel_j(const ParamMatrix& A2, double y, double v) { return embed(Axis::j, kernel_value(A2, y, v)); }

QSignald qlct_forward_direct(const QSignald& f, const ParamMatrix& A1, const ParamMatrix& A2, const FreqGrid& freq) {
  require_positive_b(A1, A2);
  const Grid2D& g = f.grid;
  const Array1<double> wx = trapezoid_weights<double>(g.nx, g.dx()), wy = trapezoid_weights<double>(g.ny, g.dy());
  std::vector<Quaterniond> ki(std::size_t(freq.nx * g.nx)), kj(std::size_t(g.ny * freq.ny));
  for (std::ptrdiff_t m = 0; m < freq.nx; ++m)
    for (std::ptrdiff_t k = 0; k < g.nx; ++k)
      ki[std::size_t(m * g.nx + k)] = kernel_i(A1, g.x(k), freq.x(m)) * wx(k);
  for (std::ptrdiff_t k = 0; k < g.ny; ++k)
    for (std::ptrdiff_t n = 0; n < freq.ny; ++n)
      kj[std::size_t(k * freq.ny + n)] = kernel_j(A2, g.y(k), freq.y(n)) * wy(k);
  QSignald r(freq);
  for (std::ptrdiff_t m = 0; m < freq.nx; ++m)
    for (std::ptrdiff_t n = 0; n < freq.ny; ++n) {
      Quaterniond acc;
      for (std::ptrdiff_t kx = 0; kx < g.nx; ++kx)
        for (std::ptrdiff_t ky = 0; ky < g.ny; ++ky)
          acc += ki[std::size_t(m * g.nx + kx)] * f.at(kx, ky) * kj[std::size_t(ky * freq.ny + n)];
      r.set(m, n, acc);
    }
  return r;
}

FreqGrid induced_freq_grid(const Grid2D& space, const ParamMatrix& A1, const ParamMatrix& A2) {
  require_positive_b(A1, A2);
  const FreqGrid w = fft_freq_grid(space);
  return {A1.b * w.x_min, A1.b * w.x_max, w.nx, A2.b * w.y_min, A2.b * w.y_max, w.ny};
}

QSignald chirp_sandwich(const QSignald& f, double alpha1, double alpha2) {
  const Grid2D& g = f.grid;
  Eigen::VectorXcd cx(g.nx), cy(g.ny);
  for (std::ptrdiff_t k = 0; k < g.nx; ++k) cx(k) = std::polar(1.0, alpha1 * g.x(k) * g.x(k));
  for (std::ptrdiff_t k = 0; k < g.ny; ++k) cy(k) = std::polar(1.0, alpha2 * g.y(k) * g.y(k));
  QSignald r(g);
  r.c = detail::separable_apply(f.c, CMatrix(cx.asDiagonal()), CMatrix(cy.asDiagonal()));
  r.exterior_energy = f.exterior_energy;
  return r;
}

QSignald chirp_tilde(const QSignald& f, const ParamMatrix& A1, const ParamMatrix& A2) {
  require_positive_b(A1, A2);
  return chirp_sandwich(f, A1.a / (2 * A1.b), A2.a / (2 * A2.b));
}

QSignald qlct_forward_fast(const QSignald& f, const ParamMatrix& A1, const ParamMatrix& A2) {
  require_positive_b(A1, A2);
  const FreqGrid omega = fft_freq_grid(f.grid);
  const QSignald F = qft_forward(chirp_tilde(f, A1, A2), omega, Method::fast);
  const FreqGrid out = induced_freq_grid(f.grid, A1, A2);
  const Eigen::VectorXd u = detail::nodes(detail::x_lattice(out)), v = detail::nodes(detail::y_lattice(out));
  const Eigen::VectorXcd ci = output_factor(A1, u), cj = output_factor(A2, v);
  QSignald r(out);
  r.c = detail::separable_apply(F.c, CMatrix(ci.asDiagonal()), CMatrix(cj.asDiagonal()));
  return r;
}

QPlanes<double> qlct_evaluate(const QSignald& f, const ParamMatrix& A1, const ParamMatrix& A2, const Eigen::VectorXd& u,
                              const Eigen::VectorXd& v, const std::optional<Box>& breakpoints) {
  require_positive_b(A1, A2);
  const Grid2D& g = f.grid;
  const Eigen::VectorXd xs = detail::nodes(detail::x_lattice(g)), ys = detail::nodes(detail::y_lattice(g));
  const Eigen::VectorXd wx =
      breakpoints ? Eigen::VectorXd(split_weights(g.x_min, g.dx(), g.nx, breakpoints->hx)) : axis_weights(g.nx, g.dx());
  const Eigen::VectorXd wy =
      breakpoints ? Eigen::VectorXd(split_weights(g.y_min, g.dy(), g.ny, breakpoints->hy)) : axis_weights(g.ny, g.dy());
  const CMatrix L = detail::kernel_matrix(u, xs, wx, [&](double x, double w) { return kernel_value(A1, x, w); });
  const CMatrix R = detail::kernel_matrix(v, ys, wy,
                                          [&](double y, double w) { return kernel_value(A2, y, w); })
                        .transpose();
  return detail::separable_apply(f.c, L, R);
}

QSignald qlct_inverse(const QSignald& F, const ParamMatrix& A1, const ParamMatrix& A2, const Grid2D& space,
                      Method method) {
  require_positive_b(A1, A2);
  const ParamMatrix B1 = A1.inverse(), B2 = A2.inverse();
  const Grid2D& fg = F.grid;
  const FreqGrid induced = induced_freq_grid(space, A1, A2);
  const bool commensurate = fg.same_as(induced, 1e-10);
  if (method == Method::fast && !commensurate)
    throw std::invalid_argument("fast inverse needs F on the induced frequency grid of the target space");
  QSignald r(space);
  if (method == Method::direct || !commensurate) {
    const Eigen::VectorXd us = detail::nodes(detail::x_lattice(fg)), vs = detail::nodes(detail::y_lattice(fg));
    const Eigen::VectorXd xs = detail::nodes(detail::x_lattice(space)), ys = detail::nodes(detail::y_lattice(space));
    const CMatrix L = detail::kernel_matrix(xs, us, axis_weights(fg.nx, fg.dx()),
                                            [&](double u, double x) { return kernel_value(B1, u, x); });
    const CMatrix R = detail::kernel_matrix(ys, vs, axis_weights(fg.ny, fg.dy()),
                                            [&](double v, double y) { return kernel_value(B2, v, y); })
                          .transpose();
    r.c = detail::separable_apply(F.c, L, R);
    return r;
  }
  // Undo the output factors, invert the QFT on the omega = u/b lattice, undo the chirps.
  const Eigen::VectorXd us = detail::nodes(detail::x_lattice(fg)), vs = detail::nodes(detail::y_lattice(fg));
  const Eigen::VectorXcd ci = output_factor(A1, us).conjugate(), cj = output_factor(A2, vs).conjugate();
  QSignald H(fft_freq_grid(space));
  H.c = detail::separable_apply(F.c, CMatrix(ci.asDiagonal()), CMatrix(cj.asDiagonal()));
  QSignald f = qft_inverse(H, space, Method::fast);
  const double scale = kTwoPi * kTwoPi * A1.b * A2.b;
  for (auto& p : f.c) p *= scale;
  return chirp_sandwich(f, -A1.a / (2 * A1.b), -A2.a / (2 * A2.b));
}

RealComponents real_signal_components(const QSignald& f, const ParamMatrix& A1, const ParamMatrix& A2,
                                      const FreqGrid& freq) {
  require_positive_b(A1, A2);
  if (!f.is_real()) throw std::invalid_argument("real_signal_components needs a real signal");
  const Grid2D& g = f.grid;
  const Eigen::VectorXd wx = axis_weights(g.nx, g.dx()), wy = axis_weights(g.ny, g.dy());
  auto phase = [](const ParamMatrix& A, double x, double u) {
    return (A.a * x * x - 2 * x * u + A.d * u * u) / (2 * A.b);
  };
  Eigen::MatrixXd c1(freq.nx, g.nx), s1(freq.nx, g.nx), c2(g.ny, freq.ny), s2(g.ny, freq.ny);
  for (std::ptrdiff_t m = 0; m < freq.nx; ++m)
    for (std::ptrdiff_t k = 0; k < g.nx; ++k) {
      const double t = phase(A1, g.x(k), freq.x(m));
      c1(m, k) = std::cos(t) * wx(k);
      s1(m, k) = std::sin(t) * wx(k);
    }
  for (std::ptrdiff_t k = 0; k < g.ny; ++k)
    for (std::ptrdiff_t n = 0; n < freq.ny; ++n) {
      const double t = phase(A2, g.y(k), freq.y(n));
      c2(k, n) = std::cos(t) * wy(k);
      s2(k, n) = std::sin(t) * wy(k);
    }
  const Eigen::MatrixXd fm = f.c[0].matrix();
  auto make = [&](const Eigen::MatrixXd& m) {
    QSignald s(freq);
    s.c[0] = m.array();
    return s;
  };
  return {make(c1 * fm * c2), make(s1 * fm * c2), make(c1 * fm * s2), make(s1 * fm * s2)};
}

QSignald recombine_real_components(const RealComponents& p, const ParamMatrix& A1, const ParamMatrix& A2) {
  require_positive_b(A1, A2);
  // P1 + i P2 + P3 j + i P4 j = P1 + i P2 + j P3 + k P4.
  QSignald core(p.P1.grid);
  core.c[0] = p.P1.c[0];
  core.c[1] = p.P2.c[0];
  core.c[2] = p.P3.c[0];
  core.c[3] = p.P4.c[0];
  const Quaterniond left = axis_exp(Axis::i, -kPi / 4) * (1.0 / (kTwoPi * std::sqrt(A1.b * A2.b)));
  const Quaterniond right = axis_exp(Axis::j, -kPi / 4);
  return (left * core) * right;
}

}  // namespace qsp
