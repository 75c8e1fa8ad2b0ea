#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace qsp {

// q0 + i q1 + j q2 + k q3 with i^2 = j^2 = k^2 = ijk = -1.
template <typename T>
struct Quaternion {
  T q0{}, q1{}, q2{}, q3{};

  constexpr Quaternion() = default;
  constexpr Quaternion(T a, T b = T{}, T c = T{}, T d = T{}) : q0(a), q1(b), q2(c), q3(d) {}

  static constexpr Quaternion unit_i() { return {T{0}, T{1}, T{0}, T{0}}; }
  static constexpr Quaternion unit_j() { return {T{0}, T{0}, T{1}, T{0}}; }
  static constexpr Quaternion unit_k() { return {T{0}, T{0}, T{0}, T{1}}; }

  // Embeddings of C along the i and j axes.
  static constexpr Quaternion from_i(std::complex<T> z) { return {z.real(), z.imag(), T{0}, T{0}}; }
  static constexpr Quaternion from_j(std::complex<T> z) { return {z.real(), T{0}, z.imag(), T{0}}; }

  constexpr Quaternion& operator+=(const Quaternion& o) {
    q0 += o.q0; q1 += o.q1; q2 += o.q2; q3 += o.q3;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    q0 -= o.q0; q1 -= o.q1; q2 -= o.q2; q3 -= o.q3;
    return *this;
  }
  constexpr Quaternion& operator*=(T s) {
    q0 *= s; q1 *= s; q2 *= s; q3 *= s;
    return *this;
  }
  constexpr Quaternion& operator*=(const Quaternion& o) { return *this = *this * o; }

  friend constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
  friend constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
  friend constexpr Quaternion operator-(const Quaternion& a) { return {-a.q0, -a.q1, -a.q2, -a.q3}; }
  friend constexpr Quaternion operator*(Quaternion a, T s) { return a *= s; }
  friend constexpr Quaternion operator*(T s, Quaternion a) { return a *= s; }
  friend constexpr Quaternion operator/(Quaternion a, T s) { return a *= (T{1} / s); }

  // Hamilton product.
  friend constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) {
    return {p.q0 * q.q0 - p.q1 * q.q1 - p.q2 * q.q2 - p.q3 * q.q3,
            p.q0 * q.q1 + p.q1 * q.q0 + p.q2 * q.q3 - p.q3 * q.q2,
            p.q0 * q.q2 - p.q1 * q.q3 + p.q2 * q.q0 + p.q3 * q.q1,
            p.q0 * q.q3 + p.q1 * q.q2 - p.q2 * q.q1 + p.q3 * q.q0};
  }

  friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
    return os << '(' << q.q0 << ", " << q.q1 << ", " << q.q2 << ", " << q.q3 << ')';
  }
};

using Quaterniond = Quaternion<double>;

template <typename T>
constexpr Quaternion<T> mul(const Quaternion<T>& p, const Quaternion<T>& q) { return p * q; }

template <typename T>
constexpr Quaternion<T> conj(const Quaternion<T>& q) { return {q.q0, -q.q1, -q.q2, -q.q3}; }

template <typename T>
constexpr T norm2(const Quaternion<T>& q) { return q.q0 * q.q0 + q.q1 * q.q1 + q.q2 * q.q2 + q.q3 * q.q3; }

template <typename T>
T norm(const Quaternion<T>& q) {
  using std::hypot;
  return hypot(hypot(q.q0, q.q1), hypot(q.q2, q.q3));
}

template <typename T>
constexpr T sc(const Quaternion<T>& q) { return q.q0; }

template <typename T>
constexpr Quaternion<T> vec(const Quaternion<T>& q) { return {T{0}, q.q1, q.q2, q.q3}; }

template <typename T>
Quaternion<T> inverse(const Quaternion<T>& q) {
  const T n2 = norm2(q);
  if (n2 == T{0}) throw std::domain_error("inverse of zero quaternion");
  return conj(q) / n2;
}

enum class Axis { i, j };

template <typename T>
constexpr Quaternion<T> axis_unit(Axis axis) {
  return axis == Axis::i ? Quaternion<T>::unit_i() : Quaternion<T>::unit_j();
}

// Embeds re + axis*im.
template <typename T>
constexpr Quaternion<T> axis_complex(Axis axis, T re, T im) {
  return axis == Axis::i ? Quaternion<T>{re, im, T{0}, T{0}} : Quaternion<T>{re, T{0}, im, T{0}};
}

// cos(theta) + axis sin(theta).
template <typename T>
Quaternion<T> axis_exp(Axis axis, T theta) {
  using std::cos;
  using std::sin;
  return axis_complex(axis, cos(theta), sin(theta));
}

// Principal (axis 2 pi b)^(-1/2) = (2 pi b)^(-1/2) e^(-axis pi/4), b > 0.
template <typename T>
Quaternion<T> axis_inv_sqrt_scale(Axis axis, T b) {
  if (!(b > T{0})) throw std::domain_error("axis_inv_sqrt_scale requires b > 0");
  using std::sqrt;
  const T scale = T{1} / sqrt(T{2} * std::numbers::pi_v<T> * b);
  return axis_exp(axis, -std::numbers::pi_v<T> / T{4}) * scale;
}

}  // namespace qsp
