#include "prwave/jet.hpp"

#include <cmath>

#include "doctest.h"
#include "prwave/expr.hpp"
#include "prwave/sampling.hpp"
#include "support/finite_difference.hpp"
#include "support/random_exprs.hpp"

using namespace prwave;
using prwave::testing::finite_difference_oracle;
using prwave::testing::random_expression;
using prwave::testing::random_point;

namespace {

MultiIndex mi(int a, int b, int c, int d) {
  return MultiIndex{{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
                     static_cast<std::uint8_t>(c), static_cast<std::uint8_t>(d)}};
}

std::array<Jet3, 4> seed_point(const Point& p) {
  return {Jet3::variable(kAxisU, p[0]), Jet3::variable(kAxisV, p[1]),
          Jet3::variable(kAxisX, p[2]), Jet3::variable(kAxisY, p[3])};
}

}  // namespace

TEST_CASE("index table is graded-lex with 35 entries") {
  const auto& table = jet_index_table();
  CHECK(table.size() == 35);
  CHECK(table[0] == mi(0, 0, 0, 0));
  CHECK(table[1] == mi(1, 0, 0, 0));
  CHECK(table[2] == mi(0, 1, 0, 0));
  CHECK(table[3] == mi(0, 0, 1, 0));
  CHECK(table[4] == mi(0, 0, 0, 1));
  CHECK(table[5] == mi(2, 0, 0, 0));
  CHECK(table[34] == mi(0, 0, 0, 3));
  for (int i = 0; i < 35; ++i) CHECK(jet_index_of(table[i]) == i);
  for (int i = 1; i < 35; ++i) {
    CHECK(table[i].degree() >= table[i - 1].degree());
  }
}

TEST_CASE("coordinate jets carry the seed value and a unit slot") {
  const auto jets = seed_point(Point(0, 0, 0, 0));
  for (int a = 0; a < 4; ++a) {
    for (int i = 0; i < 35; ++i) {
      const double expected = (i == 1 + a) ? 1.0 : 0.0;
      CHECK(jets[a][i] == expected);
    }
  }

  const auto at = seed_point(Point(1, 2, 3, 4));
  CHECK(at[kAxisV].value() == 2.0);
  CHECK(at[kAxisV][1 + kAxisV] == 1.0);

  // Linearity of the sum of the four coordinate jets.
  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const Point p = random_point(rng, 2.0);
    const auto s = seed_point(p);
    const Jet3 sum = s[0] + s[1] + s[2] + s[3];
    CHECK(sum.value() == doctest::Approx(p.sum()).epsilon(1e-15));
    for (int a = 0; a < 4; ++a) CHECK(sum[1 + a] == 1.0);
    for (int i = 5; i < 35; ++i) CHECK(sum[i] == 0.0);
  }
}

TEST_CASE("product jet of x*y") {
  const Jet3 p = Jet3::variable(kAxisX, 2.0) * Jet3::variable(kAxisY, 3.0);
  CHECK(p.value() == 6.0);
  CHECK(p.derivative(mi(0, 0, 1, 0)) == 3.0);
  CHECK(p.derivative(mi(0, 0, 0, 1)) == 2.0);
  CHECK(p.coeff(mi(0, 0, 1, 1)) == 1.0);
  for (const auto& alpha : jet_index_table())
    if (alpha.degree() == 3) CHECK(p.coeff(alpha) == 0.0);
}

TEST_CASE("f/f is the constant jet 1") {
  auto f = bind(ExprAst::parse("exp(0.3*u)*(2+sin(v+x*y))"));
  Rng rng(21);
  for (int trial = 0; trial < 8; ++trial) {
    const Jet3 fj = f.eval(random_point(rng));
    const Jet3 q = fj / fj;
    CHECK(q.value() == doctest::Approx(1.0).epsilon(1e-14));
    for (int i = 1; i < 35; ++i) CHECK(std::abs(q[i]) < 1e-13);
  }
}

TEST_CASE("(u+v)^3 matches the multinomial expansion") {
  // Oracle: Taylor coefficients of (u+v)^3 at (u0,v0) are
  // 3!/( (3-i-j)! i! j! ) * (u0+v0)^(3-i-j) / (i! j!)... computed directly as
  // derivative/alpha! below.
  const double u0 = 0.5, v0 = -0.3;
  const Jet3 s = Jet3::variable(kAxisU, u0) + Jet3::variable(kAxisV, v0);
  const Jet3 cube = s * s * s;
  const double w = u0 + v0;
  auto falling = [](int n, int k) {  // n! / (n-k)!
    double r = 1;
    for (int i = 0; i < k; ++i) r *= n - i;
    return r;
  };
  auto fact = [](int n) { return n <= 1 ? 1.0 : n == 2 ? 2.0 : 6.0; };
  for (const auto& alpha : jet_index_table()) {
    const int i = alpha.e[kAxisU], j = alpha.e[kAxisV];
    double expected = 0.0;
    if (alpha.e[kAxisX] == 0 && alpha.e[kAxisY] == 0) {
      const int k = i + j;
      expected = falling(3, k) * std::pow(w, 3 - k) / (fact(i) * fact(j));
    }
    CHECK(cube.coeff(alpha) == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("division by a zero value raises a domain error") {
  const Jet3 zero = Jet3::variable(kAxisX, 0.0);
  CHECK_THROWS_AS(Jet3::constant(1.0) / zero, EvalDomainError);
  CHECK_THROWS_AS(log(zero), EvalDomainError);
  CHECK_THROWS_AS(sqrt(Jet3::constant(-2.0)), EvalDomainError);
}

TEST_CASE("log jet at v = 1") {
  const Jet3 lg = log(Jet3::variable(kAxisV, 1.0));
  CHECK(lg.value() == 0.0);
  CHECK(lg.derivative(mi(0, 1, 0, 0)) == doctest::Approx(1.0));
  CHECK(lg.derivative(mi(0, 2, 0, 0)) == doctest::Approx(-1.0));
  CHECK(lg.coeff(mi(0, 2, 0, 0)) == doctest::Approx(-0.5));
  CHECK(lg.derivative(mi(0, 3, 0, 0)) == doctest::Approx(2.0));
  CHECK(lg.coeff(mi(0, 3, 0, 0)) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("exp of the zero jet is the constant 1") {
  const Jet3 e = exp(Jet3::constant(0.0));
  CHECK(e.value() == 1.0);
  for (int i = 1; i < 35; ++i) CHECK(e[i] == 0.0);
}

TEST_CASE("nested analytic composition matches finite differences") {
  // cosh(0.5 e^{2v} sqrt(a+b)) with a+b = 2, at v = 0.3.
  auto field = bind(ExprAst::parse("cosh(0.5*exp(2*v)*sqrt(a+b))"),
                    {{"a", 1.5}, {"b", 0.5}});
  const Point p(0, 0.3, 0, 0);
  const Jet3 jet = field.eval(p);
  for (const auto& alpha : jet_index_table()) {
    const double fd = finite_difference_oracle(field, p, alpha);
    const double jet_deriv = jet.derivative(alpha);
    CHECK(std::abs(jet_deriv - fd) <=
          1e-6 * std::max(std::abs(jet_deriv), std::abs(fd)) + 1e-8);
  }
}

TEST_CASE("finite-difference oracle spot checks") {
  auto x2y = bind(ExprAst::parse("x^2*y"));
  CHECK(finite_difference_oracle(x2y, Point(0, 0, 1, 1), mi(0, 0, 1, 1)) ==
        doctest::Approx(2.0).epsilon(1e-7));

  auto c5 = bind(ExprAst::parse("5"));
  for (const auto& alpha : jet_index_table())
    if (alpha.degree() >= 1)
      CHECK(std::abs(finite_difference_oracle(c5, Point(0, 0, 0, 0), alpha)) < 1e-9);

  auto expxy = bind(ExprAst::parse("exp(x+y)"));
  CHECK(std::abs(finite_difference_oracle(expxy, Point(0, 0, 0, 0), mi(0, 0, 2, 1)) -
                 1.0) < 1e-5);
  // Convergence of the raw stencil as the step shrinks (before Richardson).
  double prev = 1e9;
  for (double step : {4e-2, 2e-2, 1e-2}) {
    const double err = std::abs(
        finite_difference_oracle(expxy, Point(0, 0, 0, 0), mi(0, 0, 2, 1), step) - 1.0);
    CHECK(err < prev + 1e-12);
    prev = err;
  }
}

TEST_CASE("random expression jets agree with the finite-difference oracle") {
  Rng rng(0xAD5EED);
  int checked = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const std::string text = random_expression(rng, 3);
    ScalarField field = bind(ExprAst::parse(text));
    for (int rep = 0; rep < 2; ++rep) {
      const Point p = random_point(rng);
      const Jet3 jet = field.eval(p);
      for (const auto& alpha : jet_index_table()) {
        const double fd = finite_difference_oracle(field, p, alpha);
        const double got = jet.derivative(alpha);
        const double tol = 1e-5 * std::max(std::abs(got), std::abs(fd)) + 1e-8;
        INFO("expr = ", text, ", alpha degree ", alpha.degree());
        CHECK(std::abs(got - fd) <= tol);
        ++checked;
      }
    }
  }
  CHECK(checked == 12 * 2 * 35);
}

TEST_CASE("multiplication is commutative and associative to roundoff") {
  Rng rng(99);
  auto random_jet = [&rng]() {
    Jet3 j;
    for (int i = 0; i < 35; ++i) j[i] = rng.uniform(-1.0, 1.0);
    return j;
  };
  for (int trial = 0; trial < 20; ++trial) {
    const Jet3 a = random_jet(), b = random_jet(), c = random_jet();
    const Jet3 ab = a * b, ba = b * a;
    for (int i = 0; i < 35; ++i)
      CHECK(std::abs(ab[i] - ba[i]) <= 1e-13 * (std::abs(ab[i]) + 1.0));
    const Jet3 l = (a * b) * c, r = a * (b * c);
    for (int i = 0; i < 35; ++i)
      CHECK(std::abs(l[i] - r[i]) <= 1e-13 * (std::abs(l[i]) + 1.0));
  }
}

TEST_CASE("exp(log(f)) reproduces f where f > 0") {
  Rng rng(1234);
  for (int trial = 0; trial < 10; ++trial) {
    const std::string text = "(2.5+sin(" + random_expression(rng, 2) + "))";
    ScalarField field = bind(ExprAst::parse(text));
    const Point p = random_point(rng);
    const Jet3 f = field.eval(p);
    const Jet3 roundtrip = exp(log(f));
    for (int i = 0; i < 35; ++i)
      CHECK(std::abs(roundtrip[i] - f[i]) <= 1e-12 * (std::abs(f[i]) + 1.0));
  }
}

TEST_CASE("integer powers are exact at zero base values") {
  const Jet3 x = Jet3::variable(kAxisX, 0.0);
  const Jet3 sq = pow(x, 2.0);
  CHECK(sq.value() == 0.0);
  CHECK(sq.coeff(mi(0, 0, 2, 0)) == 1.0);
  const Jet3 inv = pow(Jet3::variable(kAxisX, 2.0), -2.0);
  CHECK(inv.value() == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("derivative extraction shifts coefficients") {
  auto f = bind(ExprAst::parse("sin(x*v)+u*y^2"));
  Rng rng(5);
  for (int trial = 0; trial < 4; ++trial) {
    const Point p = random_point(rng);
    const Jet3 jet = f.eval(p);
    for (int axis = 0; axis < 4; ++axis) {
      const Jet3 d = derive(jet, axis);
      for (const auto& alpha : jet_index_table()) {
        if (alpha.degree() > 2) continue;
        MultiIndex up = alpha;
        up.e[axis] += 1;
        CHECK(d.derivative(alpha) ==
              doctest::Approx(jet.derivative(up)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("univariate series match the 4-variable jets on v") {
  auto ast = ExprAst::parse("exp(-v)*cosh(0.5*exp(2*v))");
  auto field = bind(ast);
  auto profile = bind_profile(ast);
  for (double v : {-0.4, 0.0, 0.7}) {
    const Jet3 jet = field.eval(Point(0, v, 0, 0));
    const auto series = profile.at(v);
    for (int k = 0; k <= 3; ++k) {
      MultiIndex alpha;
      alpha.e[kAxisV] = static_cast<std::uint8_t>(k);
      CHECK(series.derivative(k) ==
            doctest::Approx(jet.derivative(alpha)).epsilon(1e-12));
    }
    // Orders 4..6 exist only on the profile side; sanity-check one against
    // a finite difference of the third derivative.
    MultiIndex third;
    third.e[kAxisV] = 3;
    auto d3 = [&](double vv) {
      return field.eval(Point(0, vv, 0, 0)).derivative(third);
    };
    const double h = 1e-3;
    const double fd4 = (-d3(v + 2 * h) + 8 * d3(v + h) - 8 * d3(v - h) + d3(v - 2 * h)) /
                       (12 * h);
    CHECK(std::abs(series.derivative(4) - fd4) <=
          1e-5 * std::max(1.0, std::abs(fd4)));
  }
}
