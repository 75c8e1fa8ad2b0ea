#include "special.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qsp::detail {

SiCi sine_cosine_integrals(double x) {
  if (!(x > 0)) throw std::domain_error("sine_cosine_integrals needs x > 0");
  constexpr double eps = 1e-17;
  if (x <= 4.0) {
    // Power series; terms alternate between the sine and cosine sums.
    double si = 0, ci = 0, fact = 1;
    for (int k = 1; k < 200; ++k) {
      fact *= x / k;  // x^k / k!
      const double term = fact / k;
      const int r = k % 4;
      if (k % 2 == 1)
        si += r == 1 ? term : -term;
      else
        ci += r == 2 ? -term : term;
      if (term < eps * std::max(std::abs(si), std::abs(ci))) break;
    }
    return {si, std::numbers::egamma + std::log(x) + ci};
  }
  // E1(ix) = -Ci(x) + i (Si(x) - pi/2), from the continued fraction
  // E1(z) = e^-z / (z + 1 - 1/(z + 3 - 4/(z + 5 - ...))) by modified Lentz.
  using cd = std::complex<double>;
  const cd z(0.0, x);
  constexpr double tiny = 1e-300;
  cd b = z + 1.0, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int n = 1; n < 1000; ++n) {
    const double a = -double(n) * double(n);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const cd del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  const cd e1 = std::exp(-z) * h;
  return {std::numbers::pi / 2 + e1.imag(), -e1.real()};
}

}  // namespace qsp::detail
