#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

#include "qsp/qft.hpp"

namespace qsp {

struct InvalidMatrix : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Real 2x2 matrix (a b; c d) with unit determinant.
struct ParamMatrix {
  double a = 0, b = 1, c = -1, d = 0;

  ParamMatrix() = default;
  ParamMatrix(double a_, double b_, double c_, double d_);

  static ParamMatrix rotation() { return {0, 1, -1, 0}; }
  // Skips the determinant check; for scaled kernel families only.
  static ParamMatrix unchecked(double a, double b, double c, double d) {
    ParamMatrix m;
    m.a = a;
    m.b = b;
    m.c = c;
    m.d = d;
    return m;
  }

  double det() const { return a * d - b * c; }
  ParamMatrix inverse() const { return {d, -b, -c, a}; }
  std::array<double, 4> coefficients() const { return {a, b, c, d}; }
  std::string str() const;
};

// Kernel as a complex number in the plane of its axis: b != 0 gives
// (axis 2 pi b)^(-1/2) e^(axis (a x^2/2b - x u/b + d u^2/2b)) on the principal branch
// (negative b allowed); b = 0 gives sqrt(d) e^(axis c d u^2/2).
std::complex<double> kernel_value(const ParamMatrix& A, double x, double u);

Quaternion<double> kernel_i(const ParamMatrix& A1, double x, double u);
Quaternion<double> kernel_j(const ParamMatrix& A2, double y, double v);

// L(f)(u,v) = sum w K_i(x,u) f(x,y) K_j(y,v), literal per-node sums.
QSignald qlct_forward_direct(const QSignald& f, const ParamMatrix& A1, const ParamMatrix& A2, const FreqGrid& freq);

// (b1 w, b2 h) for the symmetric FFT lattice (w, h) of space.
FreqGrid induced_freq_grid(const Grid2D& space, const ParamMatrix& A1, const ParamMatrix& A2);

// Chirp, QFT at (u/b1, v/b2), chirp; output on induced_freq_grid.
QSignald qlct_forward_fast(const QSignald& f, const ParamMatrix& A1, const ParamMatrix& A2);

// Separable O(n^3) evaluation of L(f) at arbitrary nodes; breakpoints as in qft_evaluate.
QPlanes<double> qlct_evaluate(const QSignald& f, const ParamMatrix& A1, const ParamMatrix& A2, const Eigen::VectorXd& u,
                              const Eigen::VectorXd& v, const std::optional<Box>& breakpoints = std::nullopt);

// f(x,y) = sum w K_{A1^-1}(u,x) F(u,v) K_{A2^-1}(v,y); the kernels of the inverse
// matrices with swapped arguments are the conjugate forward kernels.
QSignald qlct_inverse(const QSignald& F, const ParamMatrix& A1, const ParamMatrix& A2, const Grid2D& space,
                      Method method = Method::automatic);

// e^(i alpha1 x^2) f e^(j alpha2 y^2), samplewise.
QSignald chirp_sandwich(const QSignald& f, double alpha1, double alpha2);

// e^(i a1 x^2/2b1) f e^(j a2 y^2/2b2).
QSignald chirp_tilde(const QSignald& f, const ParamMatrix& A1, const ParamMatrix& A2);

struct RealComponents {
  QSignald P1, P2, P3, P4;
};

// Cosine/sine quadratures of a real f: P1 = sum f cos t1 cos t2, P2 = sum f sin t1 cos t2,
// P3 = sum f cos t1 sin t2, P4 = sum f sin t1 sin t2, t_k the kernel phases.
RealComponents real_signal_components(const QSignald& f, const ParamMatrix& A1, const ParamMatrix& A2,
                                      const FreqGrid& freq);

// -i sqrt(i) / (2 pi sqrt(b1 b2)) (P1 + i P2 + P3 j + i P4 j) (-j sqrt(j)).
QSignald recombine_real_components(const RealComponents& p, const ParamMatrix& A1, const ParamMatrix& A2);

}  // namespace qsp
