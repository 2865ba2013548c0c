#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>

#include <Eigen/Core>

#include "prwave/errors.hpp"

namespace prwave {

// Chart axis order used everywhere: (u, v, x, y).
inline constexpr int kAxisU = 0;
inline constexpr int kAxisV = 1;
inline constexpr int kAxisX = 2;
inline constexpr int kAxisY = 3;

inline constexpr std::array<char, 4> kAxisNames{'u', 'v', 'x', 'y'};

/// Exponent tuple of a monomial u^a v^b x^c y^d.
struct MultiIndex {
  std::array<std::uint8_t, 4> e{0, 0, 0, 0};

  constexpr int degree() const { return e[0] + e[1] + e[2] + e[3]; }
  double factorial() const;
  bool operator==(const MultiIndex&) const = default;
};

/// Truncated Taylor expansion of order <= 3 in the four chart variables.
/// Coefficient for a multi-index alpha stores d^alpha f / alpha!
/// (Taylor convention), laid out in graded-lexicographic order.
class Jet3 {
 public:
  static constexpr int kVars = 4;
  static constexpr int kOrder = 3;
  static constexpr int kSize = 35;
  using Coeffs = Eigen::Matrix<double, kSize, 1>;

  Jet3() : c_(Coeffs::Zero()) {}

  static Jet3 constant(double value) {
    Jet3 j;
    j.c_[0] = value;
    return j;
  }

  /// Coordinate jet: value plus a unit first-order coefficient on `axis`.
  static Jet3 variable(int axis, double value);

  double value() const { return c_[0]; }
  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }
  const Coeffs& coeffs() const { return c_; }

  double coeff(const MultiIndex& alpha) const;
  /// Raw partial derivative d^alpha f = coeff(alpha) * alpha!.
  double derivative(const MultiIndex& alpha) const;

  Jet3& operator+=(const Jet3& o) {
    c_ += o.c_;
    return *this;
  }
  Jet3& operator-=(const Jet3& o) {
    c_ -= o.c_;
    return *this;
  }
  Jet3& operator*=(double s) {
    c_ *= s;
    return *this;
  }

  friend Jet3 operator+(const Jet3& a, const Jet3& b) {
    Jet3 r;
    r.c_ = a.c_ + b.c_;
    return r;
  }
  friend Jet3 operator-(const Jet3& a, const Jet3& b) {
    Jet3 r;
    r.c_ = a.c_ - b.c_;
    return r;
  }
  friend Jet3 operator-(const Jet3& a) {
    Jet3 r;
    r.c_ = -a.c_;
    return r;
  }
  friend Jet3 operator*(const Jet3& a, double s) {
    Jet3 r;
    r.c_ = a.c_ * s;
    return r;
  }
  friend Jet3 operator*(double s, const Jet3& a) { return a * s; }
  friend Jet3 operator/(const Jet3& a, double s) { return a * (1.0 / s); }
  friend Jet3 operator+(const Jet3& a, double s) {
    Jet3 r = a;
    r.c_[0] += s;
    return r;
  }
  friend Jet3 operator+(double s, const Jet3& a) { return a + s; }
  friend Jet3 operator-(const Jet3& a, double s) { return a + (-s); }
  friend Jet3 operator-(double s, const Jet3& a) { return -a + s; }

  friend Jet3 operator*(const Jet3& a, const Jet3& b);

 private:
  Coeffs c_;
};

/// Canonical index table: degree-ascending, lexicographic within a degree
/// ((1,0,0,0) before (0,1,0,0)); position 0 is the constant term,
/// positions 1..4 the first-order slots for u,v,x,y.
const std::array<MultiIndex, Jet3::kSize>& jet_index_table();

/// Position of `alpha` in the canonical table; -1 when |alpha| > 3.
int jet_index_of(const MultiIndex& alpha);

Jet3 operator/(const Jet3& a, const Jet3& b);
Jet3 operator/(double s, const Jet3& b);

Jet3 exp(const Jet3& a);
Jet3 log(const Jet3& a);
Jet3 sin(const Jet3& a);
Jet3 cos(const Jet3& a);
Jet3 sinh(const Jet3& a);
Jet3 cosh(const Jet3& a);
Jet3 sqrt(const Jet3& a);
Jet3 pow(const Jet3& a, double exponent);

/// Jet of the partial derivative along `axis`. The result is exact through
/// order 2; its top-order coefficients are zeroed (they would need order-4
/// data from the input).
Jet3 derive(const Jet3& a, int axis);

namespace detail {

enum class UnaryFn { Exp, Log, Sin, Cos, Sinh, Cosh, Sqrt, PowConst, Recip };

const char* unary_name(UnaryFn fn);

/// Taylor coefficients f^(k)(a)/k! of the elementary function at `a`,
/// for k = 0..out.size()-1. Throws EvalDomainError outside the domain.
void unary_series(UnaryFn fn, double a, double exponent, std::span<double> out);

}  // namespace detail

/// Univariate truncated Taylor series (used for v-profiles, where curvature
/// formulas consume more than three derivatives of the profile).
template <int Order>
class Jet1 {
 public:
  static constexpr int kOrder = Order;
  static constexpr int kSize = Order + 1;
  using Coeffs = Eigen::Matrix<double, kSize, 1>;

  Jet1() : c_(Coeffs::Zero()) {}

  static Jet1 constant(double value) {
    Jet1 j;
    j.c_[0] = value;
    return j;
  }
  static Jet1 variable(double value) {
    Jet1 j;
    j.c_[0] = value;
    if constexpr (Order >= 1) j.c_[1] = 1.0;
    return j;
  }

  double value() const { return c_[0]; }
  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }
  /// Raw k-th derivative (coefficient times k!).
  double derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return c_[k] * f;
  }

  friend Jet1 operator+(const Jet1& a, const Jet1& b) {
    Jet1 r;
    r.c_ = a.c_ + b.c_;
    return r;
  }
  friend Jet1 operator-(const Jet1& a, const Jet1& b) {
    Jet1 r;
    r.c_ = a.c_ - b.c_;
    return r;
  }
  friend Jet1 operator-(const Jet1& a) {
    Jet1 r;
    r.c_ = -a.c_;
    return r;
  }
  friend Jet1 operator*(const Jet1& a, double s) {
    Jet1 r;
    r.c_ = a.c_ * s;
    return r;
  }
  friend Jet1 operator*(double s, const Jet1& a) { return a * s; }
  friend Jet1 operator/(const Jet1& a, double s) { return a * (1.0 / s); }
  friend Jet1 operator+(const Jet1& a, double s) {
    Jet1 r = a;
    r.c_[0] += s;
    return r;
  }
  friend Jet1 operator+(double s, const Jet1& a) { return a + s; }
  friend Jet1 operator-(const Jet1& a, double s) { return a + (-s); }
  friend Jet1 operator-(double s, const Jet1& a) { return -a + s; }

  friend Jet1 operator*(const Jet1& a, const Jet1& b) {
    Jet1 r;
    for (int i = 0; i <= Order; ++i)
      for (int j = 0; i + j <= Order; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    return r;
  }

  Jet1& operator+=(const Jet1& o) {
    c_ += o.c_;
    return *this;
  }

 private:
  Coeffs c_;
};

namespace detail {

template <int Order>
Jet1<Order> compose_series(const Jet1<Order>& g, std::span<const double> c) {
  Jet1<Order> delta = g;
  delta[0] = 0.0;
  Jet1<Order> r = Jet1<Order>::constant(c[Order]);
  for (int k = Order - 1; k >= 0; --k) r = r * delta + c[k];
  return r;
}

template <int Order>
Jet1<Order> apply_unary(UnaryFn fn, const Jet1<Order>& a, double exponent = 0.0) {
  std::array<double, Order + 1> c{};
  unary_series(fn, a.value(), exponent, c);
  return compose_series(a, std::span<const double>(c));
}

}  // namespace detail

template <int Order>
Jet1<Order> exp(const Jet1<Order>& a) {
  return detail::apply_unary(detail::UnaryFn::Exp, a);
}
template <int Order>
Jet1<Order> log(const Jet1<Order>& a) {
  return detail::apply_unary(detail::UnaryFn::Log, a);
}
template <int Order>
Jet1<Order> sin(const Jet1<Order>& a) {
  return detail::apply_unary(detail::UnaryFn::Sin, a);
}
template <int Order>
Jet1<Order> cos(const Jet1<Order>& a) {
  return detail::apply_unary(detail::UnaryFn::Cos, a);
}
template <int Order>
Jet1<Order> sinh(const Jet1<Order>& a) {
  return detail::apply_unary(detail::UnaryFn::Sinh, a);
}
template <int Order>
Jet1<Order> cosh(const Jet1<Order>& a) {
  return detail::apply_unary(detail::UnaryFn::Cosh, a);
}
template <int Order>
Jet1<Order> sqrt(const Jet1<Order>& a) {
  return detail::apply_unary(detail::UnaryFn::Sqrt, a);
}

template <int Order>
Jet1<Order> operator/(const Jet1<Order>& a, const Jet1<Order>& b) {
  return a * detail::apply_unary(detail::UnaryFn::Recip, b);
}
template <int Order>
Jet1<Order> operator/(double s, const Jet1<Order>& b) {
  return detail::apply_unary(detail::UnaryFn::Recip, b) * s;
}

template <int Order>
Jet1<Order> pow(const Jet1<Order>& a, double exponent) {
  const double rounded = std::round(exponent);
  if (std::abs(exponent - rounded) < 1e-12 && std::abs(rounded) <= 32.0) {
    int n = static_cast<int>(rounded);
    Jet1<Order> r = Jet1<Order>::constant(1.0);
    Jet1<Order> base = a;
    int m = n < 0 ? -n : n;
    while (m > 0) {
      if (m & 1) r = r * base;
      base = base * base;
      m >>= 1;
    }
    if (n < 0) return 1.0 / r;
    return r;
  }
  return detail::apply_unary(detail::UnaryFn::PowConst, a, exponent);
}

/// Series of the derivative: shifts coefficients down one order.
template <int Order>
Jet1<Order> derive(const Jet1<Order>& a) {
  Jet1<Order> r;
  for (int k = 0; k < Order; ++k) r[k] = a[k + 1] * (k + 1);
  return r;
}

}  // namespace prwave
