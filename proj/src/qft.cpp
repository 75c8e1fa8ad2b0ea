#include "qsp/qft.hpp"

#include <unsupported/Eigen/FFT>

#include <numbers>
#include <stdexcept>
#include <vector>

#include "lattice.hpp"

namespace qsp {

using detail::cd;
using detail::CMatrix;
using detail::Lattice;

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

Lattice fft_lattice(const Lattice& space) {
  const double du = kTwoPi / (double(space.n) * space.h);
  return {-0.5 * double(space.n - 1) * du, du, space.n};
}

Array1<double> weights_x(const Grid2D& g) { return trapezoid_weights<double>(g.nx, g.dx()); }
Array1<double> weights_y(const Grid2D& g) { return trapezoid_weights<double>(g.ny, g.dy()); }

QPlanes<double> weighted(const QSignald& f) {
  const Array2<double> w = detail::window_weights<double>(f.grid);
  QPlanes<double> out;
  for (int k = 0; k < 4; ++k) out[k] = f.c[k] * w;
  return out;
}

// sum w e^(s i x u) f e^(s j y v) via two complex FFT passes per pair; with
// f = A + B j, e^(s j y v) splits into e^(+i y v) and e^(-i y v) sums of A and B.
QPlanes<double> fast_kernel_sum(const QPlanes<double>& fw, int s, const Lattice& lx, const Lattice& ly,
                                const Lattice& lu, const Lattice& lv) {
  const CMatrix a = detail::pair_a(fw), b = detail::pair_b(fw);
  const CMatrix ax = detail::lattice_dft(a, 0, s, lx, lu);
  const CMatrix bx = detail::lattice_dft(b, 0, s, lx, lu);
  CMatrix a_p, a_m, b_p, b_m;
  a_m = detail::lattice_dft(ax, 1, -1, ly, lv);
  b_m = detail::lattice_dft(bx, 1, -1, ly, lv);
  if (lv.symmetric()) {
    // Mirrored frequency: the e^(+i y v) sum at v is the e^(-i y v) sum at -v.
    a_p = a_m.rowwise().reverse();
    b_p = b_m.rowwise().reverse();
  } else {
    a_p = detail::lattice_dft(ax, 1, +1, ly, lv);
    b_p = detail::lattice_dft(bx, 1, +1, ly, lv);
  }
  const cd half_over_i(0.0, -0.5);  // 1/(2i)
  const double sd = double(s);
  const CMatrix p = 0.5 * (a_p + a_m) - sd * half_over_i * (b_p - b_m);
  const CMatrix q = 0.5 * (b_p + b_m) + sd * half_over_i * (a_p - a_m);
  return detail::from_pairs(p, q);
}

// Literal sum over all nodes, fixed order per output node.
QSignald direct_kernel_sum(const QSignald& f, int s, const Grid2D& out) {
  const Grid2D& g = f.grid;
  const Array1<double> wx = weights_x(g), wy = weights_y(g);
  std::vector<Quaterniond> ex(std::size_t(out.nx * g.nx)), ey(std::size_t(g.ny * out.ny));
  for (std::ptrdiff_t m = 0; m < out.nx; ++m)
    for (std::ptrdiff_t k = 0; k < g.nx; ++k)
      ex[std::size_t(m * g.nx + k)] = axis_exp(Axis::i, s * g.x(k) * out.x(m)) * wx(k);
  for (std::ptrdiff_t k = 0; k < g.ny; ++k)
    for (std::ptrdiff_t n = 0; n < out.ny; ++n)
      ey[std::size_t(k * out.ny + n)] = axis_exp(Axis::j, s * g.y(k) * out.y(n)) * wy(k);
  QSignald r(out);
  for (std::ptrdiff_t m = 0; m < out.nx; ++m)
    for (std::ptrdiff_t n = 0; n < out.ny; ++n) {
      Quaterniond acc;
      for (std::ptrdiff_t kx = 0; kx < g.nx; ++kx)
        for (std::ptrdiff_t ky = 0; ky < g.ny; ++ky)
          acc += ex[std::size_t(m * g.nx + kx)] * f.at(kx, ky) * ey[std::size_t(ky * out.ny + n)];
      r.set(m, n, acc);
    }
  return r;
}

bool use_fast(Method method, const Grid2D& space, const Grid2D& freq) {
  const bool ok = fft_commensurate(space, freq);
  if (method == Method::fast && !ok) throw std::invalid_argument("fast path requested on incommensurate grids");
  return method == Method::fast || (method == Method::automatic && ok);
}

}  // namespace

FreqGrid fft_freq_grid(const Grid2D& space) {
  space.validate();
  const Lattice u = fft_lattice(detail::x_lattice(space)), v = fft_lattice(detail::y_lattice(space));
  return {u.x0, u.at(u.n - 1), u.n, v.x0, v.at(v.n - 1), v.n};
}

bool fft_commensurate(const Grid2D& space, const FreqGrid& freq) {
  return detail::commensurate(detail::x_lattice(space), detail::x_lattice(freq)) &&
         detail::commensurate(detail::y_lattice(space), detail::y_lattice(freq));
}

QSignald qft_forward(const QSignald& f, const FreqGrid& freq, Method method) {
  QSignald r;
  if (use_fast(method, f.grid, freq)) {
    r = QSignald(freq);
    r.c = fast_kernel_sum(weighted(f), -1, detail::x_lattice(f.grid), detail::y_lattice(f.grid),
                          detail::x_lattice(freq), detail::y_lattice(freq));
  } else {
    r = direct_kernel_sum(f, -1, freq);
  }
  return r;
}

QSignald qft_inverse(const QSignald& F, const Grid2D& space, Method method) {
  QSignald r;
  if (use_fast(method, space, F.grid)) {
    r = QSignald(space);
    r.c = fast_kernel_sum(weighted(F), +1, detail::x_lattice(F.grid), detail::y_lattice(F.grid),
                          detail::x_lattice(space), detail::y_lattice(space));
  } else {
    r = direct_kernel_sum(F, +1, space);
  }
  for (auto& p : r.c) p /= kTwoPi * kTwoPi;
  return r;
}

QPlanes<double> qft_evaluate(const QSignald& f, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                             const std::optional<Box>& breakpoints) {
  const Grid2D& g = f.grid;
  const Eigen::VectorXd xs = detail::nodes(detail::x_lattice(g)), ys = detail::nodes(detail::y_lattice(g));
  const Eigen::VectorXd wx = (breakpoints ? split_weights(g.x_min, g.dx(), g.nx, breakpoints->hx) : weights_x(g)).matrix();
  const Eigen::VectorXd wy = (breakpoints ? split_weights(g.y_min, g.dy(), g.ny, breakpoints->hy) : weights_y(g)).matrix();
  auto kern = [](double x, double w) { return std::polar(1.0, -x * w); };
  const CMatrix L = detail::kernel_matrix(u, xs, wx, kern);
  const CMatrix R = detail::kernel_matrix(v, ys, wy, kern).transpose();
  return detail::separable_apply(f.c, L, R);
}

namespace {

Eigen::ArrayXXd linear_convolve(const Eigen::ArrayXXd& a, const Eigen::ArrayXXd& b) {
  const Eigen::Index rows = a.rows() + b.rows() - 1, cols = a.cols() + b.cols() - 1;
  Eigen::FFT<double> fft;
  auto fft2 = [&](const Eigen::ArrayXXd& src) {
    CMatrix m = CMatrix::Zero(rows, cols);
    m.topLeftCorner(src.rows(), src.cols()) = src.matrix().cast<cd>();
    Eigen::VectorXcd in, out;
    for (Eigen::Index c = 0; c < cols; ++c) {
      in = m.col(c);
      fft.fwd(out, in);
      m.col(c) = out;
    }
    for (Eigen::Index r = 0; r < rows; ++r) {
      in = m.row(r).transpose();
      fft.fwd(out, in);
      m.row(r) = out.transpose();
    }
    return m;
  };
  CMatrix prod = fft2(a).cwiseProduct(fft2(b));
  Eigen::VectorXcd in, out;
  for (Eigen::Index r = 0; r < rows; ++r) {
    in = prod.row(r).transpose();
    fft.inv(out, in);
    prod.row(r) = out.transpose();
  }
  for (Eigen::Index c = 0; c < cols; ++c) {
    in = prod.col(c);
    fft.inv(out, in);
    prod.col(c) = out;
  }
  return prod.real().array();
}

Grid2D full_conv_grid(const Grid2D& f, const Grid2D& g) {
  return {f.x_min + g.x_min, f.x_max + g.x_max, f.nx + g.nx - 1, f.y_min + g.y_min, f.y_max + g.y_max, f.ny + g.ny - 1};
}

void require_conv_inputs(const QSignald& f, const QSignald& g) {
  detail::require_same_grid(f.grid, g.grid);
  if (!g.is_real()) throw std::invalid_argument("convolution kernel g must be real");
}

}  // namespace

QSignald qconv(const QSignald& f, const QSignald& g, ConvShape shape) {
  require_conv_inputs(f, g);
  const Grid2D out = full_conv_grid(f.grid, g.grid);
  const Array2<double> w = detail::window_weights<double>(f.grid);
  QSignald r(out);
  for (int k = 0; k < 4; ++k) {
    if ((f.c[k] == 0.0).all()) continue;
    r.c[k] = linear_convolve(f.c[k] * w, g.c[0]);
  }
  if (shape == ConvShape::full) return r;
  const std::ptrdiff_t ox = (f.grid.nx - 1) / 2, oy = (f.grid.ny - 1) / 2;
  const double sx = out.x(ox), sy = out.y(oy);
  QSignald same(Grid2D(sx, sx + f.grid.x_max - f.grid.x_min, f.grid.nx, sy, sy + f.grid.y_max - f.grid.y_min, f.grid.ny));
  for (int k = 0; k < 4; ++k) same.c[k] = r.c[k].block(ox, oy, f.grid.nx, f.grid.ny);
  return same;
}

QSignald qconv_direct(const QSignald& f, const QSignald& g) {
  require_conv_inputs(f, g);
  const Grid2D out = full_conv_grid(f.grid, g.grid);
  const Array2<double> w = detail::window_weights<double>(f.grid);
  QSignald r(out);
  for (std::ptrdiff_t s = 0; s < out.nx; ++s)
    for (std::ptrdiff_t t = 0; t < out.ny; ++t) {
      Quaterniond acc;
      for (std::ptrdiff_t kx = 0; kx < f.grid.nx; ++kx) {
        const std::ptrdiff_t jx = s - kx;
        if (jx < 0 || jx >= g.grid.nx) continue;
        for (std::ptrdiff_t ky = 0; ky < f.grid.ny; ++ky) {
          const std::ptrdiff_t jy = t - ky;
          if (jy < 0 || jy >= g.grid.ny) continue;
          acc += f.at(kx, ky) * (w(kx, ky) * g.c[0](jx, jy));
        }
      }
      r.set(s, t, acc);
    }
  return r;
}

namespace {

double max_abs(const QPlanes<double>& p) {
  return std::sqrt((p[0].square() + p[1].square() + p[2].square() + p[3].square()).maxCoeff());
}

QPlanes<double> diff(const QPlanes<double>& a, const QPlanes<double>& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}

// Pointwise quaternion product of two plane sets.
QPlanes<double> pointwise(const QPlanes<double>& p, const QPlanes<double>& q) {
  const auto& [a, b, c, d] = p;
  const auto& [e, f, g, h] = q;
  return {a * e - b * f - c * g - d * h, a * f + b * e + c * h - d * g, a * g - b * h + c * e + d * f,
          a * h + b * g - c * f + d * e};
}

QPlanes<double> add(const QPlanes<double>& a, const QPlanes<double>& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

bool even_in(const Array2<double>& g, int axis, double tol) {
  const Array2<double> m = axis == 0 ? Array2<double>(g.colwise().reverse()) : Array2<double>(g.rowwise().reverse());
  return (g - m).abs().maxCoeff() <= tol * std::max(1.0, g.abs().maxCoeff());
}

}  // namespace

ConvolutionReport verify_convolution_theorem(const QSignald& f, const QSignald& g) {
  require_conv_inputs(f, g);
  const QSignald h = qconv(f, g, ConvShape::full);
  // Frequencies where both sides are sampled identically: a symmetric lattice over the
  // band of the input grid, evaluated by separable quadrature.
  const FreqGrid band = fft_freq_grid(f.grid);
  Eigen::VectorXd u = detail::nodes(detail::x_lattice(band)), v = detail::nodes(detail::y_lattice(band));
  const Eigen::VectorXd um = -u, vm = -v;

  QSignald fa(f.grid), fb(f.grid);
  fa.c[0] = f.c[0];
  fa.c[1] = f.c[1];
  fb.c[2] = f.c[2];
  fb.c[3] = f.c[3];

  const QPlanes<double> lhs = qft_evaluate(h, u, v);
  const QPlanes<double> Fa = qft_evaluate(fa, u, v), Fb = qft_evaluate(fb, u, v), Ff = qft_evaluate(f, u, v);
  const QPlanes<double> Gp = qft_evaluate(g, u, v), Gm = qft_evaluate(g, um, v);
  const QPlanes<double> Fv = qft_evaluate(fa - fb, u, vm);
  const Array2<double> zero = Array2<double>::Zero(Gp[0].rows(), Gp[0].cols());
  const QPlanes<double> Gc{Gp[0], zero, Gp[2], zero}, Gd{zero, Gp[1], zero, Gp[3]};

  const double scale = std::max(max_abs(lhs), 1e-300);
  ConvolutionReport rep;
  rep.residual = max_abs(diff(lhs, add(pointwise(Fa, Gp), pointwise(Fb, Gm)))) / scale;
  rep.residual_product = max_abs(diff(lhs, pointwise(Ff, Gp))) / scale;
  rep.residual_left = max_abs(diff(lhs, pointwise(Gp, Ff))) / scale;
  rep.residual_general = max_abs(diff(lhs, add(pointwise(Ff, Gc), pointwise(Fv, Gd)))) / scale;
  rep.mirror_gap = max_abs(diff(Gp, Gm)) / std::max(max_abs(Gp), 1e-300);
  const bool sym_x = detail::x_lattice(g.grid).symmetric(), sym_y = detail::y_lattice(g.grid).symmetric();
  rep.g_even_x = sym_x && even_in(g.c[0], 0, 1e-12);
  rep.g_even_y = sym_y && even_in(g.c[0], 1, 1e-12);
  return rep;
}

}  // namespace qsp
