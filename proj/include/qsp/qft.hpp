#pragma once

#include "qsp/signal.hpp"

namespace qsp {

enum class Method { automatic, direct, fast };

// Symmetric grid u_m = (m - (n-1)/2) du with du = 2 pi / (n dx), one per axis; the fast
// path requires the frequency grid to be this lattice (up to a shift of the origin).
FreqGrid fft_freq_grid(const Grid2D& space);

// True when the fast path can map space onto freq: equal sizes and dx du n = 2 pi per axis.
bool fft_commensurate(const Grid2D& space, const FreqGrid& freq);

// F(u,v) = sum w e^(-i x u) f(x,y) e^(-j y v); no prefactor.
QSignald qft_forward(const QSignald& f, const FreqGrid& freq, Method method = Method::automatic);

// f(x,y) = (2 pi)^-2 sum w e^(+i x u) F(u,v) e^(+j y v).
QSignald qft_inverse(const QSignald& F, const Grid2D& space, Method method = Method::automatic);

// Forward kernel at arbitrary node sets; separable O(n^3) quadrature. Breakpoints mark
// box edges where f may jump (see split_weights).
QPlanes<double> qft_evaluate(const QSignald& f, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                             const std::optional<Box>& breakpoints = std::nullopt);

enum class ConvShape { full, same };

// (f * g)(s,t) = sum w f(x,y) g(s-x, t-y), zero padded; full output spans the Minkowski
// sum of the two windows with 2n-1 nodes per axis.
QSignald qconv(const QSignald& f, const QSignald& g, ConvShape shape = ConvShape::full);

// Literal double-sum convolution used to check qconv.
QSignald qconv_direct(const QSignald& f, const QSignald& g);

struct ConvolutionReport {
  // F(f*g) against F(f0 + i f1) F(g)(u,v) + F(f2 j + i f3 j) F(g)(-u,v); exact when F(g)
  // commutes with j, i.e. g even in x.
  double residual = 0;
  // F(f*g) against F(f) F(g); exact when g is even in x.
  double residual_product = 0;
  // F(f*g) against F(g) F(f); exact when g is even in y.
  double residual_left = 0;
  // F(f*g) against F(f)(u,v) Gc(u,v) + F(f0 + i f1 - f2 j - i f3 j)(u,-v) Gd(u,v), with
  // Gc the {1, j} part and Gd the {i, ij} part of F(g); exact for every real g.
  double residual_general = 0;
  // max |F(g)(u,v) - F(g)(-u,v)| / max |F(g)|; zero when the mirrored term is inert.
  double mirror_gap = 0;
  bool g_even_x = false;
  bool g_even_y = false;
};

// All residuals are max pointwise deviations relative to max |F(f*g)|.
ConvolutionReport verify_convolution_theorem(const QSignald& f, const QSignald& g);

}  // namespace qsp
