#include "lattice.hpp"

#include <unsupported/Eigen/FFT>

#include <numbers>
#include <stdexcept>

namespace qsp::detail {

bool commensurate(const Lattice& src, const Lattice& dst) {
  constexpr double two_pi = 2 * std::numbers::pi;
  return src.n == dst.n && std::abs(src.h * dst.h * double(src.n) - two_pi) <= 1e-10 * two_pi;
}

CMatrix lattice_dft(const CMatrix& in, int axis, int sign, const Lattice& src, const Lattice& dst) {
  if (!commensurate(src, dst)) throw std::invalid_argument("incommensurate grids for the FFT path");
  const std::ptrdiff_t n = src.n;
  Eigen::VectorXcd pre(n), post(n);
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    pre(k) = std::polar(1.0, sign * double(k) * src.h * dst.x0);
    post(k) = std::polar(1.0, sign * src.x0 * dst.at(k));
  }
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  CMatrix out(in.rows(), in.cols());
  Eigen::VectorXcd buf(n), res(n);
  const Eigen::Index lines = axis == 0 ? in.cols() : in.rows();
  for (Eigen::Index l = 0; l < lines; ++l) {
    if (axis == 0)
      buf = in.col(l).cwiseProduct(pre);
    else
      buf = in.row(l).transpose().cwiseProduct(pre);
    if (sign < 0)
      fft.fwd(res, buf);
    else
      fft.inv(res, buf);
    res = res.cwiseProduct(post);
    if (axis == 0)
      out.col(l) = res;
    else
      out.row(l) = res.transpose();
  }
  return out;
}

QPlanes<double> separable_apply(const QPlanes<double>& f, const CMatrix& L, const CMatrix& R) {
  const CMatrix a = pair_a(f), b = pair_b(f);
  const RMatrix rr = R.real(), rs = R.imag();
  // (A + B j)(r + s j) = (A r - B s) + (A s + B r) j for real r, s.
  const CMatrix a1 = a * rr - b * rs;
  const CMatrix b1 = a * rs + b * rr;
  return from_pairs(L * a1, L * b1);
}

}  // namespace qsp::detail
