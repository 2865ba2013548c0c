#include "prwave/analysis.hpp"

#include <cmath>

#include <Eigen/Dense>



#include "doctest.h"
#include "prwave/expr.hpp"
#include "prwave/sampling.hpp"
#include "support/plane_wave_oracle.hpp"
#include "support/random_exprs.hpp"

using namespace prwave;
using prwave::testing::plane_wave_geodesic;
using prwave::testing::random_point;

namespace {

ScalarField expr(const std::string& text, const ParamTable& params = {}) {
  return prwave::bind(ExprAst::parse(text), params);
}

}  // namespace

TEST_CASE("nilpotency index on synthetic matrices") {
  CHECK(nilpotency_index(Eigen::Matrix4d::Zero()) == 0);
  CHECK(nilpotency_index(Eigen::Matrix4d::Identity()) == -1);
  CHECK(nilpotency_label(-1) == "not-nilpotent");

  Eigen::Matrix4d two_step = Eigen::Matrix4d::Zero();
  two_step(0, 1) = 3.0;
  CHECK(nilpotency_index(two_step) == 2);

  Eigen::Matrix4d shift = Eigen::Matrix4d::Zero();
  shift(0, 1) = shift(1, 2) = shift(2, 3) = 1.0;
  CHECK(nilpotency_index(shift) == 4);

  Eigen::Matrix4d three = Eigen::Matrix4d::Zero();
  three(0, 1) = 1.0;
  three(1, 2) = 0.5;
  CHECK(nilpotency_index(three) == 3);
}

TEST_CASE("nilpotency index is similarity-invariant for family Ricci operators") {
  Rng rng(0x51A1);
  std::vector<Eigen::Matrix4d> ops;
  for (const auto& fam : builtin_family_corpus()) {
    const auto points = family_sample_points(fam, 3, kDefaultSeed);
    for (const auto& p : points)
      ops.push_back(curvature_at(fam.metric, p).ricci_op);
  }
  int transforms = 0;
  while (transforms < 30) {
    Eigen::Matrix4d s;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) s(r, c) = rng.uniform(-1.0, 1.0);
    const Eigen::JacobiSVD<Eigen::Matrix4d> svd(s);
    const double cond =
        svd.singularValues()(0) / std::max(svd.singularValues()(3), 1e-300);
    if (cond > 1e3) continue;
    const Eigen::Matrix4d sinv = s.inverse();
    for (const auto& m : ops)
      CHECK(nilpotency_index(s * m * sinv) == nilpotency_index(m));
    ++transforms;
  }
}

TEST_CASE("classification of the reference inputs") {
  Tolerances tol;

  const FamilySpec cw =
      family_cahen_wallach(-1.0, -1.0, CahenWallachMode::Isotropic, 1.0, 1.0);
  const auto pts = family_sample_points(cw, 30, kDefaultSeed);
  const auto rep = classify(cw.metric, cw.density, pts, tol);
  CHECK(rep.branch == Branch::IsotropicPp);
  CHECK(rep.is_solution);
  CHECK(rep.tau_spread < 1e-9);
  CHECK(std::abs(rep.tau_value) < 1e-9);

  const FamilySpec ts = make_family("three_step", {});
  const auto ts_pts = family_sample_points(ts, 30, kDefaultSeed);
  const auto ts_rep = classify(ts.metric, ts.density, ts_pts, tol);
  CHECK(ts_rep.branch == Branch::Spacelike3StepPr);
  CHECK(ts_rep.nilpotency == 3);
  CHECK_FALSE(ts_rep.harmonic_curvature);
  CHECK_FALSE(ts_rep.pp_wave);

  // Non-solution on a solution metric: branch structure persists, the
  // verdict does not.
  const DensityField off{expr("1+v^2"), {}, {}};
  const auto off_rep = classify(cw.metric, off, ts_pts, tol);
  CHECK_FALSE(off_rep.is_solution);
  CHECK(off_rep.branch == Branch::IsotropicPp);
  // The residual concentrates in the vv component.
  const auto wt = weighted_at(cw.metric, off, Point(0, 1.0, 0.1, 0.1));
  double vv = std::abs(wt.gh(kAxisV, kAxisV));
  double rest = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (!(a == kAxisV && b == kAxisV)) rest = std::max(rest, std::abs(wt.gh(a, b)));
  CHECK(vv > 1.0);
  CHECK(rest < 1e-12);

  const MetricField flat = prwave_metric(ScalarField::constant(0.0));
  const DensityField one_plus_v{expr("1+0.5*v"), {}, {}};
  const auto flat_rep = classify(flat, one_plus_v, ts_pts, tol);
  CHECK(flat_rep.branch == Branch::FlatExcluded);
  CHECK(flat_rep.flat);

  CHECK_THROWS_AS(classify(flat, one_plus_v, std::span<const Point>{}, tol), Error);
}

TEST_CASE("every classification lands on exactly one branch with a reason") {
  std::vector<std::pair<MetricField, DensityField>> inputs;
  for (const auto& fam : builtin_family_corpus())
    inputs.emplace_back(fam.metric, fam.density);
  inputs.emplace_back(prwave_metric(expr("x^3")), DensityField{expr("1+v"), {}, {}});
  inputs.emplace_back(prwave_metric(ScalarField::constant(0.0)),
                      DensityField{expr("2"), {}, {}});

  std::vector<Point> pts;
  Rng rng(0xB0B);
  for (int i = 0; i < 10; ++i) pts.push_back(random_point(rng, 0.4));

  for (const auto& [metric, dens] : inputs) {
    const auto rep = classify(metric, dens, pts);
    const bool known =
        rep.branch == Branch::FlatExcluded || rep.branch == Branch::IsotropicPp ||
        rep.branch == Branch::Spacelike2StepPp ||
        rep.branch == Branch::Spacelike3StepPr || rep.branch == Branch::OutsideAnsatz;
    CHECK(known);
    CHECK_FALSE(rep.branch_explanation.empty());
  }

  // A density constant in all coordinates has a vanishing gradient; the
  // classification refuses to guess.
  const auto rep = classify(prwave_metric(expr("x^3+v*x^2")),
                            DensityField{expr("2"), {}, {}}, pts);
  CHECK(rep.branch == Branch::OutsideAnsatz);
}

TEST_CASE("positivity boundary along rays") {
  const DensityField linear{expr("1+x"), {}, {}};
  const auto res =
      positivity_domain(linear, Ray{Point(0, 0, 0, 0), {0, 0, 1, 0}}, 0.0, -10.0);
  REQUIRE(res.bounded);
  CHECK(res.boundary == doctest::Approx(-1.0).epsilon(1e-11));

  const FamilySpec cw =
      family_cahen_wallach(1.0, 0.0, CahenWallachMode::NonIsotropic, 1.0, 0.0, 1.0);
  const auto cw_res = positivity_domain(
      cw.density, Ray{Point(0, 0, 0, 0), {0, 0, 1, 0}}, 0.0, -10.0);
  REQUIRE(cw_res.bounded);
  CHECK(std::abs(cw_res.boundary - (-1.0)) < 1e-9);  // cosh(0) = 1

  const FamilySpec eg = family_egorov(EgorovCase::C1a, -1.0, -1.0, 0.0, 1.0);
  const auto eg_res = positivity_domain(
      eg.density, Ray{Point(0, 0, 0, 0), {0, 1, 0, 0}}, 0.0, 50.0);
  CHECK_FALSE(eg_res.bounded);  // h = v^2 + 1 > 0 everywhere

  CHECK_THROWS_AS(positivity_domain(DensityField{expr("-1-x^2"), {}, {}},
                                    Ray{Point(0, 0, 0, 0), {0, 0, 1, 0}}, 0.0, 1.0),
                  NonpositiveDensityError);
}

TEST_CASE("flat geodesics are straight lines") {
  const MetricField flat = prwave_metric(ScalarField::constant(0.0));
  GeodesicState init;
  init.position = Point(0.1, -0.2, 0.3, 0.4);
  init.velocity = Eigen::Vector4d(0.5, 1.0, -0.25, 0.75);
  const auto r = geodesic_integrate(flat, init, 5.0, {}, 11);
  REQUIRE(r.termination == GeodesicTermination::ReachedSMax);
  for (const auto& st : r.samples) {
    for (int a = 0; a < 4; ++a) {
      CHECK(st.position[a] ==
            doctest::Approx(init.position[a] + st.s * init.velocity[a]).epsilon(1e-12));
      CHECK(st.velocity[a] == doctest::Approx(init.velocity[a]).epsilon(1e-12));
    }
  }
  CHECK(r.energy_drift < 1e-12);
}

TEST_CASE("oracle itself satisfies the geodesic equations") {
  // Differentiate the closed form numerically and compare against the
  // Christoffel right-hand side; guards the oracle algebra independently.
  const double a = -1.0, b = -1.0;
  const MetricField g = prwave_metric(expr("a*x^2+b*y^2", {{"a", a}, {"b", b}}));
  GeodesicState init;
  init.position = Point(0.0, 0.0, 0.5, -0.3);
  init.velocity = Eigen::Vector4d(0.25, 1.0, 0.4, 0.1);
  const double ds = 1e-4;
  for (double s : {0.5, 2.0, 7.7}) {
    const auto mid = plane_wave_geodesic(a, b, init, s);
    const auto fwd = plane_wave_geodesic(a, b, init, s + ds);
    const auto bwd = plane_wave_geodesic(a, b, init, s - ds);
    const auto gamma = christoffel_values(g, mid.position);
    for (int k = 0; k < 4; ++k) {
      const double acc =
          (fwd.position[k] - 2 * mid.position[k] + bwd.position[k]) / (ds * ds);
      double rhs = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          rhs -= gamma[k * 16 + i * 4 + j] * mid.velocity[i] * mid.velocity[j];
      CHECK(std::abs(acc - rhs) < 1e-5);
    }
  }
}

TEST_CASE("integrator matches the plane-wave oracle") {
  const double a = -1.0, b = -1.0;
  const MetricField g = prwave_metric(expr("a*x^2+b*y^2", {{"a", a}, {"b", b}}));
  GeodesicState init;
  init.position = Point(0.2, -0.1, 0.5, -0.3);
  init.velocity = Eigen::Vector4d(0.25, 1.0, 0.4, 0.1);
  const auto r = geodesic_integrate(g, init, 10.0, {}, 101);
  REQUIRE(r.termination == GeodesicTermination::ReachedSMax);
  double worst = 0.0;
  for (const auto& st : r.samples) {
    const auto ref = plane_wave_geodesic(a, b, init, st.s - init.s);
    for (int k = 0; k < 4; ++k) {
      worst = std::max(worst, std::abs(st.position[k] - ref.position[k]));
      worst = std::max(worst, std::abs(st.velocity[k] - ref.velocity[k]));
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("energy is conserved on family metrics") {
  for (const auto& fam : builtin_family_corpus()) {
    if (fam.name == "egorov:1b" || fam.name == "egorov:2b") continue;  // covered below
    GeodesicState init;
    init.position = Point(0.0, 0.0, 0.05, 0.02);
    init.velocity = Eigen::Vector4d(0.1, 0.35, 0.05, -0.04);
    const auto r = geodesic_integrate(fam.metric, init, 5.0, {}, 51);
    INFO("family ", fam.name);
    CHECK(r.termination == GeodesicTermination::ReachedSMax);
    CHECK(r.energy_drift < 1e-7 * 5.0);
  }
  // The doubly-exponential profiles blow up along growing v; keep v shrinking.
  const FamilySpec eg = family_egorov(EgorovCase::C1b, 2.0, 2.0, 1.0, 0.0);
  GeodesicState init;
  init.position = Point(0.0, 0.5, 0.05, 0.02);
  init.velocity = Eigen::Vector4d(0.1, -0.2, 0.05, -0.04);
  const auto r = geodesic_integrate(eg.metric, init, 5.0, {}, 51);
  CHECK(r.termination == GeodesicTermination::ReachedSMax);
  CHECK(r.energy_drift < 1e-7 * 5.0);
}

TEST_CASE("completeness probe reaches large affine parameter") {
  const FamilySpec cw =
      family_cahen_wallach(-1.0, -1.0, CahenWallachMode::Isotropic, 1.0, 1.0);
  GeodesicState init;
  init.position = Point(0.0, 0.0, 0.3, -0.2);
  init.velocity = Eigen::Vector4d(0.2, 1.0, 0.1, 0.15);
  const auto r = geodesic_integrate(cw.metric, init, 20.0, {}, 81);
  CHECK(r.termination == GeodesicTermination::ReachedSMax);
  CHECK(r.s_reached == doctest::Approx(20.0));
  CHECK(r.energy_drift < 1e-5);
}

TEST_CASE("blowup terminates with a tag, not an exception") {
  // F = -e^{2x}: geodesics accelerate without bound in x.
  const MetricField g = prwave_metric(expr("exp(2*x)"));
  GeodesicState init;
  init.position = Point(0, 0, 1.0, 0);
  init.velocity = Eigen::Vector4d(0, 1.0, 0.5, 0);
  const auto r = geodesic_integrate(g, init, 1e4, {}, 21);
  CHECK(r.termination != GeodesicTermination::ReachedSMax);
}
