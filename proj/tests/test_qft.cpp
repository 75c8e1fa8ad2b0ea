#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qsp/qft.hpp"

using namespace qsp;

namespace {

constexpr double kPi = std::numbers::pi;

QSignald random_signal(const Grid2D& g, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return QSignald::sample(g, [&](double, double) { return Quaterniond(n(rng), n(rng), n(rng), n(rng)); });
}

double rel_dev(const QSignald& a, const QSignald& b) { return (a - b).max_abs() / b.max_abs(); }

// Quaternion Gaussian bumps, negligible at the window edges.
QSignald bumps(const Grid2D& g) {
  return QSignald::sample(g, [](double x, double y) {
    const double e1 = std::exp(-((x - 0.7) * (x - 0.7) + (y + 0.4) * (y + 0.4)));
    const double e2 = std::exp(-((x + 0.5) * (x + 0.5) + (y - 0.9) * (y - 0.9)) / 0.8);
    return Quaterniond(e1, 0.5 * e2, -0.3 * e1 + e2, 0.8 * e2);
  });
}

// (1 - (x/X)^2)^2 vanishes at the edges of a window of half-width X.
double window(double x, double half) {
  const double t = 1 - (x / half) * (x / half);
  return t * t;
}

}  // namespace

TEST_CASE("frequency lattice") {
  const Grid2D g = Grid2D::centered(0.25, 32);
  const FreqGrid w = fft_freq_grid(g);
  CHECK(w.nx == 32);
  CHECK(w.dx() == doctest::Approx(2 * kPi / (32 * 0.25)));
  CHECK(w.x_min == doctest::Approx(-w.x_max));
  CHECK(fft_commensurate(g, w));
  CHECK_FALSE(fft_commensurate(g, Grid2D::centered(0.5, 32)));
  CHECK_THROWS_AS(qft_forward(QSignald(g), Grid2D::centered(0.5, 32), Method::fast), std::invalid_argument);
}

TEST_CASE("narrow Gaussian has a real even spectrum") {
  const Grid2D g = Grid2D::centered(0.1, 64);
  const QSignald f = QSignald::sample(g, [](double x, double y) { return Quaterniond(std::exp(-8 * (x * x + y * y))); });
  const QSignald F = qft_forward(f, fft_freq_grid(g));
  CHECK(F.c[1].abs().maxCoeff() <= 1e-12 * F.max_abs());
  CHECK(F.c[2].abs().maxCoeff() <= 1e-12 * F.max_abs());
  CHECK(F.c[3].abs().maxCoeff() <= 1e-12 * F.max_abs());
  const Array2<double> re = F.c[0];
  CHECK((re - re.colwise().reverse()).abs().maxCoeff() <= 1e-12 * re.abs().maxCoeff());
  CHECK((re - re.rowwise().reverse()).abs().maxCoeff() <= 1e-12 * re.abs().maxCoeff());
  // Closed form (pi/8) e^(-(u^2+v^2)/32).
  const double u = F.grid.x(15), v = F.grid.y(20);
  CHECK(F.c[0](15, 20) == doctest::Approx(kPi / 8 * std::exp(-(u * u + v * v) / 32)).epsilon(1e-9));
}

TEST_CASE("fast path matches the direct sums") {
  std::mt19937_64 rng(21);
  for (const Grid2D& g : {Grid2D::centered(0.3, 32), Grid2D(-3, 5, 32, -2, 1, 32), Grid2D::centered(0.2, 17, 0.35, 24)}) {
    const QSignald f = random_signal(g, rng);
    const FreqGrid w = fft_freq_grid(g);
    CHECK(rel_dev(qft_forward(f, w, Method::fast), qft_forward(f, w, Method::direct)) < 1e-10);
    const QSignald F = random_signal(w, rng);
    CHECK(rel_dev(qft_inverse(F, g, Method::fast), qft_inverse(F, g, Method::direct)) < 1e-10);
  }
}

TEST_CASE("direct path agrees with the quaternion kernel written out") {
  std::mt19937_64 rng(22);
  const Grid2D g(-1, 1, 6, -0.5, 1.5, 5);
  const QSignald f = random_signal(g, rng);
  const FreqGrid w(-2, 3, 4, -1, 1, 3);
  const QSignald F = qft_forward(f, w, Method::direct);
  for (std::ptrdiff_t m = 0; m < w.nx; ++m)
    for (std::ptrdiff_t n = 0; n < w.ny; ++n) {
      Quaterniond s;
      for (std::ptrdiff_t ix = 0; ix < g.nx; ++ix)
        for (std::ptrdiff_t iy = 0; iy < g.ny; ++iy) {
          const double wt = g.dx() * g.dy() * (ix == 0 || ix == g.nx - 1 ? 0.5 : 1) * (iy == 0 || iy == g.ny - 1 ? 0.5 : 1);
          s = s + axis_exp(Axis::i, -g.x(ix) * w.x(m)) * f.at(ix, iy) * axis_exp(Axis::j, -g.y(iy) * w.y(n)) * wt;
        }
      CHECK(norm(s - F.at(m, n)) <= 1e-12 * (1 + norm(s)));
    }
}

TEST_CASE("discrete Parseval carries (2 pi)^2") {
  const Grid2D g = Grid2D::centered(0.125, 128);
  const QSignald f = bumps(g);
  const QSignald F = qft_forward(f, fft_freq_grid(g));
  CHECK(std::abs(energy(F) / (4 * kPi * kPi) - energy(f)) / energy(f) < 1e-8);
}

TEST_CASE("round trip and zero") {
  const Grid2D g = Grid2D::centered(0.2, 64);
  const QSignald f = bumps(g);
  const QSignald F = qft_forward(f, fft_freq_grid(g));
  CHECK((qft_inverse(F, g) - f).max_abs() < 1e-6);
  CHECK(qft_inverse(QSignald(fft_freq_grid(g)), g).max_abs() == 0);
}

TEST_CASE("inverse of a single-node spectrum source returns a peak at that node") {
  const Grid2D g = Grid2D::centered(0.25, 33);
  QSignald delta(g);
  const double amp = 1 / (g.dx() * g.dy());
  delta.set(20, 11, Quaterniond(0, amp, 0, 0));
  const QSignald back = qft_inverse(qft_forward(delta, fft_freq_grid(g)), g);
  const Array2<double> a2 = back.abs2();
  Eigen::Index r = 0, c = 0;
  a2.maxCoeff(&r, &c);
  CHECK(r == 20);
  CHECK(c == 11);
  CHECK(back.at(20, 11).q1 == doctest::Approx(amp).epsilon(0.1));
}

TEST_CASE("convolution against the double sum") {
  std::mt19937_64 rng(23);
  const Grid2D g = Grid2D::centered(0.25, 16);
  const QSignald f = random_signal(g, rng);
  std::normal_distribution<double> n;
  const QSignald h = QSignald::sample(g, [&](double, double) { return Quaterniond(n(rng)); });
  const QSignald a = qconv(f, h), b = qconv_direct(f, h);
  CHECK(a.grid.same_as(b.grid));
  CHECK(rel_dev(a, b) < 1e-12);
  CHECK(a.nx() == 31);
  CHECK_THROWS_AS(qconv(f, f), std::invalid_argument);
}

TEST_CASE("convolution with a unit sample and linearity") {
  std::mt19937_64 rng(24);
  const Grid2D g = Grid2D::centered(0.5, 9);
  const QSignald f = random_signal(g, rng);
  QSignald delta(g);
  delta.set(4, 4, Quaterniond(1));
  const QSignald s = qconv(f, delta, ConvShape::same);
  CHECK(s.grid.same_as(g));
  for (std::ptrdiff_t ix = 1; ix < 8; ++ix)
    for (std::ptrdiff_t iy = 1; iy < 8; ++iy) CHECK(norm(s.at(ix, iy) - f.at(ix, iy) * (0.25)) < 1e-14);
  const Quaterniond c(0.5, -1, 2, 0.25);
  const QSignald h = QSignald::sample(g, [](double x, double y) { return Quaterniond(std::exp(-x * x - 2 * y * y)); });
  CHECK(rel_dev(qconv(c * f, h), c * qconv(f, h)) < 1e-13);
  CHECK(rel_dev(qconv(3.0 * f, h), 3.0 * qconv(f, h)) < 1e-13);
}

TEST_CASE("convolution theorem") {
  std::mt19937_64 rng(25);
  const Grid2D g = Grid2D::centered(0.25, 32);
  const double X = -g.x_min;
  const QSignald f = random_signal(g, rng);

  SUBCASE("separable sinc vanishing at the edges") {
    auto sinc = [&](double x) { return x == 0 ? 1.0 : std::sin(kPi * x / X) / (kPi * x / X); };
    const QSignald h = QSignald::sample(g, [&](double x, double y) { return Quaterniond(sinc(x) * sinc(y)); });
    const ConvolutionReport r = verify_convolution_theorem(f, h);
    CHECK(r.g_even_x);
    CHECK(r.g_even_y);
    CHECK(r.residual < 1e-8);
    CHECK(r.residual_product < 1e-8);
  }
  SUBCASE("Gaussian: product form equals the full form") {
    const QSignald h = QSignald::sample(g, [](double x, double y) { return Quaterniond(std::exp(-2 * (x * x + y * y))); });
    const ConvolutionReport r = verify_convolution_theorem(f, h);
    CHECK(r.residual < 1e-8);
    CHECK(std::abs(r.residual - r.residual_product) < 1e-9);
  }
  SUBCASE("real f collapses the mirrored term") {
    const QSignald fr = QSignald::sample(g, [&](double x, double y) { return Quaterniond(std::cos(x) * std::exp(-y * y)); });
    const QSignald h = QSignald::sample(g, [&](double x, double y) { return Quaterniond(window(x, X) * window(y, X) * (1 + 0.4 * x)); });
    const ConvolutionReport r = verify_convolution_theorem(fr, h);
    CHECK(r.residual == doctest::Approx(r.residual_product).epsilon(1e-12));
  }
  SUBCASE("g even in x only: mirrored term exercised, right form exact") {
    const QSignald h = QSignald::sample(g, [&](double x, double y) { return Quaterniond(window(x, X) * window(y, X) * (1 + 0.5 * y)); });
    const ConvolutionReport r = verify_convolution_theorem(f, h);
    CHECK(r.g_even_x);
    CHECK_FALSE(r.g_even_y);
    CHECK(r.residual < 1e-8);
    CHECK(r.residual_product < 1e-8);
  }
  SUBCASE("g even in y only: the left product is exact, the two-term form is not") {
    const QSignald h = QSignald::sample(g, [&](double x, double y) { return Quaterniond(window(x, X) * window(y, X) * (1 + 0.5 * x)); });
    const ConvolutionReport r = verify_convolution_theorem(f, h);
    CHECK_FALSE(r.g_even_x);
    CHECK(r.g_even_y);
    CHECK(r.mirror_gap > 0.1);
    CHECK(r.residual_left < 1e-8);
    CHECK(r.residual > 1e-3);
    CHECK(r.residual_general < 1e-8);
  }
  SUBCASE("g without symmetry: the four-part identity holds") {
    const QSignald h = QSignald::sample(g, [&](double x, double y) {
      return Quaterniond(window(x, X) * window(y, X) * (1 + 0.5 * x + 0.3 * y + 0.2 * x * y));
    });
    const ConvolutionReport r = verify_convolution_theorem(f, h);
    CHECK(r.residual_general < 1e-8);
    CHECK(r.residual > 1e-3);
    CHECK(r.residual_left > 1e-3);
  }
}
