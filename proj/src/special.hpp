#pragma once

namespace qsp::detail {

struct SiCi {
  double si, ci;
};

// Sine and cosine integrals for x > 0.
SiCi sine_cosine_integrals(double x);

}  // namespace qsp::detail
