#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include "qsp/quaternion.hpp"

namespace qsp {

template <typename T>
using Array2 = Eigen::Array<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using Array1 = Eigen::Array<T, Eigen::Dynamic, 1>;

// Four component planes q0..q3, each indexed (ix, iy).
template <typename T>
using QPlanes = std::array<Array2<T>, 4>;

// Uniform closed lattice; nodes include both endpoints on each axis.
struct Grid2D {
  double x_min = -1, x_max = 1, y_min = -1, y_max = 1;
  std::ptrdiff_t nx = 2, ny = 2;

  Grid2D() = default;
  Grid2D(double x0, double x1, std::ptrdiff_t nx_, double y0, double y1, std::ptrdiff_t ny_)
      : x_min(x0), x_max(x1), y_min(y0), y_max(y1), nx(nx_), ny(ny_) {
    validate();
  }

  // n nodes per axis at spacing h, centred on the origin.
  static Grid2D centered(double hx, std::ptrdiff_t nx, double hy, std::ptrdiff_t ny) {
    const double ax = 0.5 * hx * double(nx - 1), ay = 0.5 * hy * double(ny - 1);
    return {-ax, ax, nx, -ay, ay, ny};
  }
  static Grid2D centered(double h, std::ptrdiff_t n) { return centered(h, n, h, n); }

  double dx() const { return (x_max - x_min) / double(nx - 1); }
  double dy() const { return (y_max - y_min) / double(ny - 1); }
  double x(std::ptrdiff_t i) const { return x_min + double(i) * dx(); }
  double y(std::ptrdiff_t j) const { return y_min + double(j) * dy(); }
  std::ptrdiff_t size() const { return nx * ny; }

  void validate() const {
    if (nx < 2 || ny < 2) throw std::invalid_argument("grid needs at least two nodes per axis");
    if (!(x_max > x_min) || !(y_max > y_min)) throw std::invalid_argument("grid extents must be increasing");
    if (!std::isfinite(x_min + x_max + y_min + y_max)) throw std::invalid_argument("grid extents must be finite");
  }

  bool same_as(const Grid2D& o, double rel = 1e-12) const {
    const double s = std::max({std::abs(x_min), std::abs(x_max), std::abs(y_min), std::abs(y_max), 1.0});
    return nx == o.nx && ny == o.ny && std::abs(x_min - o.x_min) <= rel * s && std::abs(x_max - o.x_max) <= rel * s &&
           std::abs(y_min - o.y_min) <= rel * s && std::abs(y_max - o.y_max) <= rel * s;
  }
};

// Frequency grids share the lattice type; coordinates are angular frequencies.
using FreqGrid = Grid2D;

// Axis-aligned box [-hx, hx] x [-hy, hy].
struct Box {
  double hx = 1, hy = 1;

  Box() = default;
  Box(double h) : Box(h, h) {}
  Box(double hx_, double hy_) : hx(hx_), hy(hy_) {
    if (!(hx > 0) || !(hy > 0)) throw std::invalid_argument("box half-widths must be positive");
  }
};

// Trapezoid weights for n nodes at spacing h.
template <typename T = double>
Array1<T> trapezoid_weights(std::ptrdiff_t n, T h) {
  Array1<T> w = Array1<T>::Constant(n, h);
  w(0) = w(n - 1) = h / T{2};
  return w;
}

// Interior corrections, in units of h, for a midpoint-sampled integral whose endpoint
// lies half a cell outside the first node; exact for polynomials of degree < m.
inline Array1<double> midpoint_end_correction(int m) {
  // B_{p+1}(1/2) / (p+1) for odd p.
  constexpr double moments[] = {0.0, -1.0 / 24.0, 0.0, 7.0 / 960.0, 0.0, -31.0 / 8064.0, 0.0, 127.0 / 30720.0};
  if (m < 1 || m > 8) throw std::invalid_argument("end correction order out of range");
  Eigen::MatrixXd v(m, m);
  Eigen::VectorXd rhs(m);
  for (int p = 0; p < m; ++p) {
    for (int k = 0; k < m; ++k) v(p, k) = std::pow(k + 0.5, p);
    rhs(p) = moments[p];
  }
  return v.partialPivLu().solve(rhs).array();
}

// Quadrature weights for the integral over [lo, hi] of a function sampled at x0 + k h.
// Each node carries the overlap of its cell with [lo, hi] clipped to the sampled window;
// an edge falling on a cell boundary strictly inside the window gets a high-order
// midpoint end correction.
inline Array1<double> interval_weights(double x0, double h, std::ptrdiff_t n, double lo, double hi) {
  const double w_lo = x0, w_hi = x0 + h * double(n - 1);
  const double a = std::max(lo, w_lo), b = std::min(hi, w_hi);
  Array1<double> w = Array1<double>::Zero(n);
  if (!(b > a)) return w;
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const double xk = x0 + h * double(k);
    const double c0 = std::max({xk - 0.5 * h, a, w_lo}), c1 = std::min({xk + 0.5 * h, b, w_hi});
    if (c1 > c0) w(k) = c1 - c0;
  }
  const double tol = 1e-9;
  auto aligned = [&](double edge, std::ptrdiff_t& first, int dir) {
    if (edge <= w_lo + 0.5 * h || edge >= w_hi - 0.5 * h) return false;
    const double t = (edge - x0) / h - 0.5;  // boundary index between nodes t and t+1
    const double r = std::round(t);
    if (std::abs(t - r) > tol) return false;
    first = dir > 0 ? std::ptrdiff_t(r) + 1 : std::ptrdiff_t(r);
    return true;
  };
  std::ptrdiff_t first_lo = 0, first_hi = 0;
  const bool al = aligned(lo, first_lo, +1), ah = aligned(hi, first_hi, -1);
  std::ptrdiff_t inside = 0;
  for (std::ptrdiff_t k = 0; k < n; ++k) inside += w(k) > 0.0;
  const int m = int(std::min<std::ptrdiff_t>(6, inside / 2));
  if (m >= 2) {
    const Array1<double> c = midpoint_end_correction(m);
    for (int k = 0; k < m; ++k) {
      if (al) w(first_lo + k) += h * c(k);
      if (ah) w(first_hi - k) += h * c(k);
    }
  }
  return w;
}

template <typename T = double>
class QSignal {
 public:
  Grid2D grid;
  QPlanes<T> c;
  // Energy beyond the sampled window, known in closed form; zero when the samples
  // carry the whole signal.
  T exterior_energy{0};

  QSignal() = default;
  explicit QSignal(const Grid2D& g) : grid(g) {
    grid.validate();
    for (auto& p : c) p = Array2<T>::Zero(g.nx, g.ny);
  }

  // Samples fn(x, y) -> Quaternion<T> at every node.
  template <typename Fn>
  static QSignal sample(const Grid2D& g, Fn&& fn) {
    QSignal s(g);
    for (std::ptrdiff_t ix = 0; ix < g.nx; ++ix)
      for (std::ptrdiff_t iy = 0; iy < g.ny; ++iy) s.set(ix, iy, fn(g.x(ix), g.y(iy)));
    return s;
  }

  std::ptrdiff_t nx() const { return grid.nx; }
  std::ptrdiff_t ny() const { return grid.ny; }

  Quaternion<T> at(std::ptrdiff_t ix, std::ptrdiff_t iy) const {
    return {c[0](ix, iy), c[1](ix, iy), c[2](ix, iy), c[3](ix, iy)};
  }
  void set(std::ptrdiff_t ix, std::ptrdiff_t iy, const Quaternion<T>& q) {
    c[0](ix, iy) = q.q0;
    c[1](ix, iy) = q.q1;
    c[2](ix, iy) = q.q2;
    c[3](ix, iy) = q.q3;
  }

  bool is_real(T tol = T{0}) const {
    return c[1].abs().maxCoeff() <= tol && c[2].abs().maxCoeff() <= tol && c[3].abs().maxCoeff() <= tol;
  }

  Array2<T> abs2() const { return c[0].square() + c[1].square() + c[2].square() + c[3].square(); }
  T max_abs() const { return std::sqrt(abs2().maxCoeff()); }
};

using QSignald = QSignal<double>;

namespace detail {
inline void require_same_grid(const Grid2D& a, const Grid2D& b) {
  if (!a.same_as(b)) throw std::invalid_argument("grid mismatch");
}

template <typename T>
Array2<T> window_weights(const Grid2D& g) {
  const Array1<T> wx = trapezoid_weights<T>(g.nx, T(g.dx())), wy = trapezoid_weights<T>(g.ny, T(g.dy()));
  return wx.matrix() * wy.matrix().transpose();
}

// Exterior energy of a sum: cross terms vanish only when at most one term extends
// beyond the window.
template <typename T>
T sum_exterior(T a, T b) {
  if (a > T{0} && b > T{0}) throw std::domain_error("sum of two signals with exterior energy is not representable");
  return a + b;
}
}  // namespace detail

template <typename T>
QSignal<T> operator+(const QSignal<T>& f, const QSignal<T>& g) {
  detail::require_same_grid(f.grid, g.grid);
  QSignal<T> r(f.grid);
  for (int k = 0; k < 4; ++k) r.c[k] = f.c[k] + g.c[k];
  r.exterior_energy = detail::sum_exterior(f.exterior_energy, g.exterior_energy);
  return r;
}

template <typename T>
QSignal<T> operator-(const QSignal<T>& f, const QSignal<T>& g) {
  detail::require_same_grid(f.grid, g.grid);
  QSignal<T> r(f.grid);
  for (int k = 0; k < 4; ++k) r.c[k] = f.c[k] - g.c[k];
  r.exterior_energy = detail::sum_exterior(f.exterior_energy, g.exterior_energy);
  return r;
}

template <typename T>
QSignal<T> operator*(T s, const QSignal<T>& f) {
  QSignal<T> r = f;
  for (auto& p : r.c) p *= s;
  r.exterior_energy *= s * s;
  return r;
}

// Left multiplication q f.
template <typename T>
QSignal<T> operator*(const Quaternion<T>& q, const QSignal<T>& f) {
  QSignal<T> r(f.grid);
  const auto& [a, b, c, d] = f.c;
  r.c[0] = q.q0 * a - q.q1 * b - q.q2 * c - q.q3 * d;
  r.c[1] = q.q0 * b + q.q1 * a + q.q2 * d - q.q3 * c;
  r.c[2] = q.q0 * c - q.q1 * d + q.q2 * a + q.q3 * b;
  r.c[3] = q.q0 * d + q.q1 * c - q.q2 * b + q.q3 * a;
  r.exterior_energy = f.exterior_energy * norm2(q);
  return r;
}

// Right multiplication f q.
template <typename T>
QSignal<T> operator*(const QSignal<T>& f, const Quaternion<T>& q) {
  QSignal<T> r(f.grid);
  const auto& [a, b, c, d] = f.c;
  r.c[0] = a * q.q0 - b * q.q1 - c * q.q2 - d * q.q3;
  r.c[1] = a * q.q1 + b * q.q0 + c * q.q3 - d * q.q2;
  r.c[2] = a * q.q2 - b * q.q3 + c * q.q0 + d * q.q1;
  r.c[3] = a * q.q3 + b * q.q2 - c * q.q1 + d * q.q0;
  r.exterior_energy = f.exterior_energy * norm2(q);
  return r;
}

// Trapezoid quadrature of f conj(g) over the sampled window.
template <typename T>
Quaternion<T> inner_product(const QSignal<T>& f, const QSignal<T>& g) {
  detail::require_same_grid(f.grid, g.grid);
  const Array2<T> w = detail::window_weights<T>(f.grid);
  const auto& [f0, f1, f2, f3] = f.c;
  const auto& [g0, g1, g2, g3] = g.c;
  return {(w * (f0 * g0 + f1 * g1 + f2 * g2 + f3 * g3)).sum(), (w * (-f0 * g1 + f1 * g0 - f2 * g3 + f3 * g2)).sum(),
          (w * (-f0 * g2 + f1 * g3 + f2 * g0 - f3 * g1)).sum(), (w * (-f0 * g3 - f1 * g2 + f2 * g1 + f3 * g0)).sum()};
}

// Window quadrature of |f|^2 only.
template <typename T>
T window_energy(const QSignal<T>& f) {
  return (detail::window_weights<T>(f.grid) * f.abs2()).sum();
}

template <typename T>
T energy(const QSignal<T>& f) {
  return window_energy(f) + f.exterior_energy;
}

template <typename T>
T angle(const QSignal<T>& f, const QSignal<T>& g) {
  const T ff = sc(inner_product(f, f)), gg = sc(inner_product(g, g));
  if (!(ff > T{0}) || !(gg > T{0})) throw std::domain_error("angle of a zero-energy signal");
  const T cosine = sc(inner_product(f, g)) / (std::sqrt(ff) * std::sqrt(gg));
  return std::acos(std::clamp(cosine, T{-1}, T{1}));
}

inline bool box_covers_window(const Grid2D& g, const Box& b) {
  return b.hx >= std::max(std::abs(g.x_min), std::abs(g.x_max)) &&
         b.hy >= std::max(std::abs(g.y_min), std::abs(g.y_max));
}

// Multiplies by the indicator of the closed box.
template <typename T>
QSignal<T> project_box(const QSignal<T>& f, const Box& box) {
  const Grid2D& g = f.grid;
  if (box_covers_window(g, box)) return f;
  if (f.exterior_energy > T{0} && (box.hx > std::min(-g.x_min, g.x_max) || box.hy > std::min(-g.y_min, g.y_max)))
    throw std::domain_error("box extends beyond the window of a signal with exterior energy");
  const double ex = 1e-12 * std::max(box.hx, 1.0), ey = 1e-12 * std::max(box.hy, 1.0);
  QSignal<T> r = f;
  r.exterior_energy = T{0};
  for (std::ptrdiff_t ix = 0; ix < g.nx; ++ix) {
    const bool in_x = std::abs(g.x(ix)) <= box.hx + ex;
    for (std::ptrdiff_t iy = 0; iy < g.ny; ++iy) {
      if (in_x && std::abs(g.y(iy)) <= box.hy + ey) continue;
      for (auto& p : r.c) p(ix, iy) = T{0};
    }
  }
  return r;
}

// Quadrature of |f|^2 over the box; edges on cell boundaries get end corrections.
template <typename T>
T box_energy(const QSignal<T>& f, const Box& box) {
  const Grid2D& g = f.grid;
  if (box_covers_window(g, box)) return energy(f);
  const Array1<double> wx = interval_weights(g.x_min, g.dx(), g.nx, -box.hx, box.hx);
  const Array1<double> wy = interval_weights(g.y_min, g.dy(), g.ny, -box.hy, box.hy);
  const Array2<T> w = (wx.matrix() * wy.matrix().transpose()).array().template cast<T>();
  return (w * f.abs2()).sum();
}

// Window weights for one axis with +-half as extra quadrature breakpoints; a plain
// trapezoid when the edges are not on cell boundaries.
inline Array1<double> split_weights(double x0, double h, std::ptrdiff_t n, double half) {
  const double x1 = x0 + h * double(n - 1);
  if (half >= std::max(-x0, x1)) return trapezoid_weights<double>(n, h);
  return interval_weights(x0, h, n, x0, -half) + interval_weights(x0, h, n, -half, half) +
         interval_weights(x0, h, n, half, x1);
}

// Window energy with the box edges as breakpoints, plus the exterior energy; consistent
// with box_energy for signals that jump at the box edges.
template <typename T>
T split_energy(const QSignal<T>& f, const Box& box) {
  const Grid2D& g = f.grid;
  const Array1<double> wx = split_weights(g.x_min, g.dx(), g.nx, box.hx);
  const Array1<double> wy = split_weights(g.y_min, g.dy(), g.ny, box.hy);
  const Array2<T> w = (wx.matrix() * wy.matrix().transpose()).array().template cast<T>();
  return (w * f.abs2()).sum() + f.exterior_energy;
}

// f = f0 + i f1 + f2 j + i f3 j; each part returned as a real signal.
template <typename T>
std::array<QSignal<T>, 4> symmetric_components(const QSignal<T>& f) {
  std::array<QSignal<T>, 4> out;
  for (int k = 0; k < 4; ++k) {
    out[k] = QSignal<T>(f.grid);
    out[k].c[0] = f.c[k];
  }
  return out;
}

template <typename T>
QSignal<T> compose_components(const std::array<QSignal<T>, 4>& parts) {
  QSignal<T> f(parts[0].grid);
  for (int k = 0; k < 4; ++k) {
    detail::require_same_grid(f.grid, parts[k].grid);
    if (!parts[k].is_real()) throw std::invalid_argument("component signals must be real");
    f.c[k] = parts[k].c[0];
  }
  return f;
}

}  // namespace qsp
