#pragma once

#include <Eigen/Dense>

#include <complex>

#include "qsp/signal.hpp"

namespace qsp::detail {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

struct Lattice {
  double x0 = 0, h = 1;
  std::ptrdiff_t n = 1;
  double at(std::ptrdiff_t k) const { return x0 + h * double(k); }
  bool symmetric() const { return std::abs(x0 + at(n - 1)) <= 1e-12 * std::max(1.0, std::abs(x0)); }
};

inline Lattice x_lattice(const Grid2D& g) { return {g.x_min, g.dx(), g.nx}; }
inline Lattice y_lattice(const Grid2D& g) { return {g.y_min, g.dy(), g.ny}; }

bool commensurate(const Lattice& src, const Lattice& dst);

// out_m = sum_k in_k e^(sign i x_k u_m) along the given axis (0: rows, 1: columns),
// for commensurate lattices.
CMatrix lattice_dft(const CMatrix& in, int axis, int sign, const Lattice& src, const Lattice& dst);

// f0 + i f1 and f2 + i f3.
inline CMatrix pair_a(const QPlanes<double>& c) {
  CMatrix m(c[0].rows(), c[0].cols());
  m.real() = c[0].matrix();
  m.imag() = c[1].matrix();
  return m;
}
inline CMatrix pair_b(const QPlanes<double>& c) {
  CMatrix m(c[2].rows(), c[2].cols());
  m.real() = c[2].matrix();
  m.imag() = c[3].matrix();
  return m;
}
inline QPlanes<double> from_pairs(const CMatrix& a, const CMatrix& b) {
  return {a.real().array(), a.imag().array(), b.real().array(), b.imag().array()};
}

// out(u,v) = sum_x sum_y L(u,x) f(x,y) R(y,v) with L read in the i-plane and R in the
// j-plane; quadrature weights belong in L and R.
QPlanes<double> separable_apply(const QPlanes<double>& f, const CMatrix& L, const CMatrix& R);

// Column of trapezoid weights times kernel, as an n_out x n_in matrix.
template <typename Fn>
CMatrix kernel_matrix(const Eigen::VectorXd& out, const Eigen::VectorXd& in, const Eigen::VectorXd& w_in, Fn&& k) {
  CMatrix m(out.size(), in.size());
  for (Eigen::Index r = 0; r < out.size(); ++r)
    for (Eigen::Index s = 0; s < in.size(); ++s) m(r, s) = k(in(s), out(r)) * w_in(s);
  return m;
}

inline Eigen::VectorXd nodes(const Lattice& l) {
  Eigen::VectorXd v(l.n);
  for (std::ptrdiff_t k = 0; k < l.n; ++k) v(k) = l.at(k);
  return v;
}

}  // namespace qsp::detail
