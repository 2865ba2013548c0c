#include "prwave/jet.hpp"

#include <vector>

namespace prwave {

namespace {

std::array<MultiIndex, Jet3::kSize> build_index_table() {
  std::array<MultiIndex, Jet3::kSize> table{};
  int pos = 0;
  for (int deg = 0; deg <= Jet3::kOrder; ++deg) {
    for (int a = deg; a >= 0; --a)
      for (int b = deg - a; b >= 0; --b)
        for (int c = deg - a - b; c >= 0; --c) {
          const int d = deg - a - b - c;
          table[pos++] = MultiIndex{{static_cast<std::uint8_t>(a),
                                     static_cast<std::uint8_t>(b),
                                     static_cast<std::uint8_t>(c),
                                     static_cast<std::uint8_t>(d)}};
        }
  }
  return table;
}

// Dense exponent -> position lookup (exponents are each <= 3).
std::array<int, 256> build_position_table() {
  std::array<int, 256> pos{};
  pos.fill(-1);
  const auto& table = jet_index_table();
  for (int i = 0; i < Jet3::kSize; ++i) {
    const auto& m = table[i].e;
    pos[m[0] * 64 + m[1] * 16 + m[2] * 4 + m[3]] = i;
  }
  return pos;
}

struct ProductTerm {
  std::uint16_t a, b, dst;
};

std::vector<ProductTerm> build_product_table() {
  std::vector<ProductTerm> terms;
  const auto& table = jet_index_table();
  for (int i = 0; i < Jet3::kSize; ++i)
    for (int j = 0; j < Jet3::kSize; ++j) {
      if (table[i].degree() + table[j].degree() > Jet3::kOrder) continue;
      MultiIndex sum;
      for (int k = 0; k < 4; ++k)
        sum.e[k] = static_cast<std::uint8_t>(table[i].e[k] + table[j].e[k]);
      terms.push_back({static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j),
                       static_cast<std::uint16_t>(jet_index_of(sum))});
    }
  return terms;
}

const std::vector<ProductTerm>& product_table() {
  static const std::vector<ProductTerm> table = build_product_table();
  return table;
}

// Positions of alpha + e_axis for every alpha of degree <= 2, with the
// multiplier (alpha_axis + 1) used by the derivative shift.
struct DeriveTerm {
  std::uint16_t src, dst;
  double scale;
};

const std::array<std::vector<DeriveTerm>, 4>& derive_tables() {
  static const std::array<std::vector<DeriveTerm>, 4> tables = [] {
    std::array<std::vector<DeriveTerm>, 4> t;
    const auto& table = jet_index_table();
    for (int axis = 0; axis < 4; ++axis)
      for (int i = 0; i < Jet3::kSize; ++i) {
        if (table[i].degree() >= Jet3::kOrder) continue;
        MultiIndex up = table[i];
        up.e[axis] += 1;
        t[axis].push_back({static_cast<std::uint16_t>(jet_index_of(up)),
                           static_cast<std::uint16_t>(i),
                           static_cast<double>(table[i].e[axis] + 1)});
      }
    return t;
  }();
  return tables;
}

Jet3 apply_unary3(detail::UnaryFn fn, const Jet3& a, double exponent = 0.0) {
  std::array<double, Jet3::kOrder + 1> c{};
  detail::unary_series(fn, a.value(), exponent, c);
  Jet3 delta = a;
  delta[0] = 0.0;
  Jet3 r = Jet3::constant(c[Jet3::kOrder]);
  for (int k = Jet3::kOrder - 1; k >= 0; --k) r = r * delta + c[k];
  return r;
}

}  // namespace

const std::array<MultiIndex, Jet3::kSize>& jet_index_table() {
  static const std::array<MultiIndex, Jet3::kSize> table = build_index_table();
  return table;
}

int jet_index_of(const MultiIndex& alpha) {
  if (alpha.degree() > Jet3::kOrder) return -1;
  static const std::array<int, 256> pos = build_position_table();
  return pos[alpha.e[0] * 64 + alpha.e[1] * 16 + alpha.e[2] * 4 + alpha.e[3]];
}

double MultiIndex::factorial() const {
  static constexpr std::array<double, 4> f{1.0, 1.0, 2.0, 6.0};
  return f[e[0]] * f[e[1]] * f[e[2]] * f[e[3]];
}

Jet3 Jet3::variable(int axis, double value) {
  Jet3 j;
  j.c_[0] = value;
  j.c_[1 + axis] = 1.0;
  return j;
}

double Jet3::coeff(const MultiIndex& alpha) const {
  const int i = jet_index_of(alpha);
  return i < 0 ? 0.0 : c_[i];
}

double Jet3::derivative(const MultiIndex& alpha) const {
  return coeff(alpha) * alpha.factorial();
}

Jet3 operator*(const Jet3& a, const Jet3& b) {
  Jet3 r;
  for (const auto& t : product_table()) r[t.dst] += a[t.a] * b[t.b];
  return r;
}

Jet3 operator/(const Jet3& a, const Jet3& b) {
  return a * apply_unary3(detail::UnaryFn::Recip, b);
}

Jet3 operator/(double s, const Jet3& b) {
  return apply_unary3(detail::UnaryFn::Recip, b) * s;
}

Jet3 exp(const Jet3& a) { return apply_unary3(detail::UnaryFn::Exp, a); }
Jet3 log(const Jet3& a) { return apply_unary3(detail::UnaryFn::Log, a); }
Jet3 sin(const Jet3& a) { return apply_unary3(detail::UnaryFn::Sin, a); }
Jet3 cos(const Jet3& a) { return apply_unary3(detail::UnaryFn::Cos, a); }
Jet3 sinh(const Jet3& a) { return apply_unary3(detail::UnaryFn::Sinh, a); }
Jet3 cosh(const Jet3& a) { return apply_unary3(detail::UnaryFn::Cosh, a); }
Jet3 sqrt(const Jet3& a) { return apply_unary3(detail::UnaryFn::Sqrt, a); }

Jet3 pow(const Jet3& a, double exponent) {
  const double rounded = std::round(exponent);
  if (std::abs(exponent - rounded) < 1e-12 && std::abs(rounded) <= 32.0) {
    // Integer powers as repeated products: exact, and valid at zero values.
    int n = static_cast<int>(rounded);
    Jet3 r = Jet3::constant(1.0);
    Jet3 base = a;
    int m = n < 0 ? -n : n;
    while (m > 0) {
      if (m & 1) r = r * base;
      base = base * base;
      m >>= 1;
    }
    if (n < 0) return 1.0 / r;
    return r;
  }
  return apply_unary3(detail::UnaryFn::PowConst, a, exponent);
}

Jet3 derive(const Jet3& a, int axis) {
  Jet3 r;
  for (const auto& t : derive_tables()[axis]) r[t.dst] = a[t.src] * t.scale;
  return r;
}

namespace detail {

const char* unary_name(UnaryFn fn) {
  switch (fn) {
    case UnaryFn::Exp:
      return "exp";
    case UnaryFn::Log:
      return "log";
    case UnaryFn::Sin:
      return "sin";
    case UnaryFn::Cos:
      return "cos";
    case UnaryFn::Sinh:
      return "sinh";
    case UnaryFn::Cosh:
      return "cosh";
    case UnaryFn::Sqrt:
      return "sqrt";
    case UnaryFn::PowConst:
      return "pow";
    case UnaryFn::Recip:
      return "reciprocal";
  }
  return "?";
}

void unary_series(UnaryFn fn, double a, double exponent, std::span<double> out) {
  const int n = static_cast<int>(out.size()) - 1;
  switch (fn) {
    case UnaryFn::Exp: {
      double c = std::exp(a);
      for (int k = 0; k <= n; ++k) {
        out[k] = c;
        c /= (k + 1);
      }
      return;
    }
    case UnaryFn::Log: {
      if (!(a > 0.0)) throw EvalDomainError("log of nonpositive value");
      out[0] = std::log(a);
      if (n >= 1) out[1] = 1.0 / a;
      for (int k = 2; k <= n; ++k) out[k] = -out[k - 1] * (k - 1) / (k * a);
      return;
    }
    case UnaryFn::Sin:
    case UnaryFn::Cos: {
      const double s = std::sin(a), c = std::cos(a);
      // Derivative cycle starting at sin: sin, cos, -sin, -cos.
      std::array<double, 4> cyc = fn == UnaryFn::Sin
                                      ? std::array<double, 4>{s, c, -s, -c}
                                      : std::array<double, 4>{c, -s, -c, s};
      double fact = 1.0;
      for (int k = 0; k <= n; ++k) {
        if (k > 0) fact *= k;
        out[k] = cyc[k % 4] / fact;
      }
      return;
    }
    case UnaryFn::Sinh:
    case UnaryFn::Cosh: {
      const double s = std::sinh(a), c = std::cosh(a);
      double fact = 1.0;
      for (int k = 0; k <= n; ++k) {
        if (k > 0) fact *= k;
        const bool even = (k % 2) == 0;
        const double d = (fn == UnaryFn::Sinh) == even ? s : c;
        out[k] = d / fact;
      }
      return;
    }
    case UnaryFn::Sqrt: {
      if (!(a > 0.0)) throw EvalDomainError("sqrt of nonpositive value");
      out[0] = std::sqrt(a);
      for (int k = 1; k <= n; ++k) out[k] = out[k - 1] * (0.5 - (k - 1)) / (k * a);
      return;
    }
    case UnaryFn::PowConst: {
      if (!(a > 0.0))
        throw EvalDomainError("pow with non-integer exponent of nonpositive value");
      out[0] = std::pow(a, exponent);
      for (int k = 1; k <= n; ++k)
        out[k] = out[k - 1] * (exponent - (k - 1)) / (k * a);
      return;
    }
    case UnaryFn::Recip: {
      if (a == 0.0) throw EvalDomainError("division by zero value");
      out[0] = 1.0 / a;
      for (int k = 1; k <= n; ++k) out[k] = -out[k - 1] / a;
      return;
    }
  }
}

}  // namespace detail

}  // namespace prwave
