#include "prwave/families.hpp"

#include <algorithm>
#include <cmath>

#include "prwave/analysis.hpp"

namespace prwave {

namespace {

ScalarField bind_expr(const std::string& text, const ParamTable& params) {
  return prwave::bind(ExprAst::parse(text), params);
}

Profile profile_expr(const std::string& text, const ParamTable& params = {}) {
  return bind_profile(ExprAst::parse(text), params);
}

Profile scaled_profile(const Profile& p, double c) {
  return Profile([p, c](double v) { return p.at(v) * c; },
                 "(" + p.provenance() + ")*" + std::to_string(c));
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConstraintError(message);
}

double min_on_grid(const std::function<double(double)>& f, double lo, double hi,
                   int n = 201) {
  double best = f(lo);
  for (int i = 1; i < n; ++i)
    best = std::min(best, f(lo + (hi - lo) * i / (n - 1)));
  return best;
}

double max_abs_on_grid(const std::function<double(double)>& f, double lo, double hi,
                       int n = 201) {
  double best = 0.0;
  for (int i = 0; i < n; ++i)
    best = std::max(best, std::abs(f(lo + (hi - lo) * i / (n - 1))));
  return best;
}

Box default_box() {
  Box b;
  b.lo = Eigen::Vector4d::Constant(-2.0);
  b.hi = Eigen::Vector4d::Constant(2.0);
  return b;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

}  // namespace

const char* to_string(Branch branch) {
  switch (branch) {
    case Branch::FlatExcluded:
      return "flat-excluded";
    case Branch::IsotropicPp:
      return "isotropic-pp";
    case Branch::Spacelike2StepPp:
      return "spacelike-2step-pp";
    case Branch::Spacelike3StepPr:
      return "spacelike-3step-pr";
    case Branch::OutsideAnsatz:
      return "outside-ansatz";
  }
  return "?";
}

FamilySpec family_isotropic_pp(double gamma0, double A, double B) {
  ScalarField shape = bind_expr("g4*(x^2+y^2)", {{"g4", gamma0 / 4.0}});
  return family_isotropic_pp(gamma0, A, B, shape, /*shape_is_plane_wave=*/true);
}

FamilySpec family_isotropic_pp(double gamma0, double A, double B,
                               const ScalarField& f_shape, bool shape_is_plane_wave) {
  require(gamma0 < 0, "isotropic_pp requires gamma0 < 0, got " + fmt(gamma0));
  require(A >= 0 && B >= 0, "isotropic_pp requires A, B >= 0");
  require(A + B > 0, "isotropic_pp requires A + B > 0");

  // The shape must satisfy laplacian(F) = gamma0; probed, not assumed.
  const std::array<Point, 5> probes = {Point(0, 0, 0, 0), Point(0.3, -0.4, 0.7, 0.2),
                                       Point(-0.8, 0.5, -0.3, 0.9),
                                       Point(0.1, 1.2, 0.4, -1.1),
                                       Point(0.9, -1.3, -0.8, -0.5)};
  for (const Point& p : probes) {
    const Jet3 fj = f_shape.eval(p);
    const double lap = derive(derive(fj, kAxisX), kAxisX).value() +
                       derive(derive(fj, kAxisY), kAxisY).value();
    require(std::abs(lap - gamma0) < 1e-8,
            "isotropic_pp: laplacian(F) = " + fmt(lap) + " != gamma0 = " + fmt(gamma0) +
                " at probe point");
    require(std::abs(derive(fj, kAxisU).value()) < 1e-12,
            "isotropic_pp: F must not depend on u");
  }

  const double w = std::sqrt(-gamma0 / 2.0);
  FamilySpec spec;
  spec.name = "isotropic_pp";
  spec.params = {{"gamma0", gamma0}, {"A", A}, {"B", B}};
  spec.options["shape"] = f_shape.provenance();
  spec.F = f_shape;
  spec.metric = prwave_metric(spec.F);
  spec.density.h = bind_expr("A*exp(w*v)+B*exp(-w*v)", {{"A", A}, {"B", B}, {"w", w}});
  spec.expected = {Branch::IsotropicPp, 2, CausalTag::Lightlike, true, true, true,
                   shape_is_plane_wave ? CurvatureClass::Symmetric
                                       : CurvatureClass::Generic};
  spec.domain = default_box();
  return spec;
}

FamilySpec family_harmonic_plane_wave(double A, const Profile& profile, double c1,
                                      double c2, double hx, double v_halfwidth) {
  require(hx != 0.0, "harmonic_plane_wave requires hx != 0");
  require(c1 > 0.0, "harmonic_plane_wave requires c1 = h0(0) > 0");
  require(v_halfwidth > 0.0, "harmonic_plane_wave requires a positive v range");

  const bool half_square = std::abs(A * A - 0.5) < 1e-12;
  // (2-A^2) Fx + (1-2A^2) Fy = 0. Away from A^2 = 1/2 the profile is Fx and
  // Fy follows; at A^2 = 1/2 the constraint forces Fx = 0 and the profile is Fy.
  double cfy = 0.0;
  if (!half_square) cfy = -(2.0 - A * A) / (1.0 - 2.0 * A * A);

  Profile fx, fy;
  if (half_square) {
    fx = Profile::constant(0.0);
    fy = profile;
  } else {
    fx = profile;
    fy = scaled_profile(profile, cfy);
  }
  const double cfxy_fx = -2.0 * A * (1.0 + 2.0 * cfy);  // Fxy = cfxy_fx * Fx
  Profile fxy = half_square ? scaled_profile(fy, -4.0 * A) : scaled_profile(fx, cfxy_fx);

  // h0'' = q h0 with q = -(Fx + Fy).
  Profile q = half_square ? scaled_profile(fy, -1.0) : scaled_profile(fx, -(1.0 + cfy));
  const double margin = 0.1;
  DensityOdeSolution h0_ode = solve_density_ode(q, 0.0, c1, c2, -v_halfwidth - margin,
                                                v_halfwidth + margin);
  Profile h0 = h0_ode.profile();

  FamilySpec spec;
  spec.name = half_square ? "harmonic_plane_wave:A2half" : "harmonic_plane_wave";
  spec.params = {{"A", A}, {"c1", c1}, {"c2", c2}, {"hx", hx},
                 {"vrange", v_halfwidth}};
  spec.options[half_square ? "fy" : "fx"] = profile.provenance();

  auto Ffn = [fx, fy, fxy](const Point& p) {
    const Jet3 xj = Jet3::variable(kAxisX, p[kAxisX]);
    const Jet3 yj = Jet3::variable(kAxisY, p[kAxisY]);
    const double v = p[kAxisV];
    return jet_from_v_series(fx.at(v)) * (xj * xj) +
           jet_from_v_series(fy.at(v)) * (yj * yj) +
           jet_from_v_series(fxy.at(v)) * (xj * yj);
  };
  spec.F = ScalarField::from_jet_fn(Ffn, spec.name + ":F",
                                    Deps{false, true, true, true});
  spec.metric = prwave_metric(spec.F);

  auto hfn = [h0, A, hx](const Point& p) {
    const Jet3 xj = Jet3::variable(kAxisX, p[kAxisX]);
    const Jet3 yj = Jet3::variable(kAxisY, p[kAxisY]);
    return jet_from_v_series(h0.at(p[kAxisV])) + (xj + A * yj) * hx;
  };
  spec.density.h = ScalarField::from_jet_fn(hfn, spec.name + ":h",
                                            Deps{false, true, true, A != 0.0});

  const double h0min =
      min_on_grid([&](double v) { return h0.value(v); }, -v_halfwidth, v_halfwidth);
  require(h0min > 0.0, "harmonic_plane_wave: h0 vanishes inside the v range");
  double tw = 0.45 * h0min / (std::abs(hx) * (1.0 + std::abs(A)));
  tw = std::min(tw, 1.5);

  spec.domain = default_box();
  spec.domain.lo[kAxisV] = -v_halfwidth;
  spec.domain.hi[kAxisV] = v_halfwidth;
  spec.domain.lo[kAxisX] = -tw;
  spec.domain.hi[kAxisX] = tw;
  spec.domain.lo[kAxisY] = -tw;
  spec.domain.hi[kAxisY] = tw;
  spec.density.hint_lo = spec.domain.lo;
  spec.density.hint_hi = spec.domain.hi;

  const bool fx_varies =
      max_abs_on_grid([&](double v) { return (half_square ? fy : fx).derivative(v, 1); },
                      -v_halfwidth, v_halfwidth, 17) > 1e-12;
  spec.expected = {Branch::Spacelike2StepPp, 2,    CausalTag::Spacelike,
                   true,                     true, false,
                   fx_varies ? CurvatureClass::Recurrent : CurvatureClass::Symmetric};
  return spec;
}

FamilySpec family_three_step(double A, const Profile& h0, const Profile& hx,
                             const Profile& alpha, double v_halfwidth) {
  require(std::abs(A) < 1e-12,
          "three_step is constructed for A = 0 (use the verifier for general A)");
  require(v_halfwidth > 0.0, "three_step requires a positive v range");

  // hx and hx' must not vanish on the working interval, and h0 > 0 there.
  const double lo = -v_halfwidth, hi = v_halfwidth;
  for (int i = 0; i < 33; ++i) {
    const double v = lo + (hi - lo) * i / 32.0;
    const auto s = hx.at(v);
    require(std::abs(s.value()) > 1e-10, "three_step: hx vanishes at v = " + fmt(v));
    require(std::abs(s.derivative(1)) > 1e-10,
            "three_step: hx' vanishes at v = " + fmt(v));
    require(h0.value(v) > 0.0, "three_step: h0 <= 0 at v = " + fmt(v));
  }

  FamilySpec spec;
  spec.name = "three_step";
  spec.params = {{"A", A}, {"vrange", v_halfwidth}};
  spec.options["h0"] = h0.provenance();
  spec.options["hx"] = hx.provenance();
  spec.options["alpha"] = alpha.provenance();

  // F = F0(v,x) + u F1(v,x), F1 = alpha + 2 log(h) hx'/hx, h = h0 + x hx.
  // F0 solves hx d/dx (h dF0/dx) = -RHS with
  //   RHS = (b1 + b2 x) log h + hx (b3 + b4 x),
  //   b1 = 2 hx' h0', b2 = 2 hx'^2, b3 = alpha h0' + 2 h0'', b4 = alpha hx' + 2 hx''.
  // Both x-quadratures have elementary antiderivatives, used here verbatim.
  auto Ffn = [h0, hx, alpha](const Point& p) {
    const auto h0s = h0.at(p[kAxisV]);
    const auto hxs = hx.at(p[kAxisV]);
    const auto als = alpha.at(p[kAxisV]);

    const Jet3 H0 = jet_from_v_series(h0s);
    const Jet3 H0p = jet_from_v_series(derive(h0s));
    const Jet3 H0pp = jet_from_v_series(derive(derive(h0s)));
    const Jet3 Hx = jet_from_v_series(hxs);
    const Jet3 Hxp = jet_from_v_series(derive(hxs));
    const Jet3 Hxpp = jet_from_v_series(derive(derive(hxs)));
    const Jet3 Al = jet_from_v_series(als);

    const Jet3 xj = Jet3::variable(kAxisX, p[kAxisX]);
    const Jet3 uj = Jet3::variable(kAxisU, p[kAxisU]);

    const Jet3 H = H0 + xj * Hx;
    const Jet3 L = log(H);
    const Jet3 L0 = log(H0);

    const Jet3 b1 = 2.0 * Hxp * H0p;
    const Jet3 b2 = 2.0 * Hxp * Hxp;
    const Jet3 b3 = Al * H0p + 2.0 * H0pp;
    const Jet3 b4 = Al * Hxp + 2.0 * Hxpp;

    // Antiderivatives in x from 0.
    const Jet3 dL = L - L0;
    const Jet3 I0 = dL / Hx;                                      // int 1/h
    const Jet3 I1 = xj / Hx - H0 * dL / (Hx * Hx);                // int x/h
    const Jet3 I2 = xj * xj / (2.0 * Hx) - H0 * xj / (Hx * Hx) +  // int x^2/h
                    H0 * H0 * dL / (Hx * Hx * Hx);
    const Jet3 L1 = (H * L - H - H0 * L0 + H0) / Hx;              // int log h
    const Jet3 J1 = (H * H * L * 0.5 - H * H * 0.25 - H0 * H0 * L0 * 0.5 +
                     H0 * H0 * 0.25) /
                    Hx;                                           // int h log h
    const Jet3 intL1H = (L1 - xj + (H0 - H0 * L0) * I0) / Hx;     // int L1/h
    const Jet3 intL2H = (J1 * 0.5 - (H * H - H0 * H0) / (8.0 * Hx) - H0 * L1 +
                         H0 * xj + (H0 * H0 * L0 * 0.5 - 0.75 * H0 * H0) * I0) /
                        (Hx * Hx);                                // int L2/h

    const Jet3 F0 =
        -(b1 * intL1H + b2 * intL2H) / Hx - b3 * I1 - 0.5 * b4 * I2;
    const Jet3 F1 = Al + 2.0 * L * Hxp / Hx;
    return F0 + uj * F1;
  };
  spec.F = ScalarField::from_jet_fn(Ffn, "three_step:F",
                                    Deps{true, true, true, false});
  spec.metric = prwave_metric(spec.F);

  auto hfn = [h0, hx](const Point& p) {
    return jet_from_v_series(h0.at(p[kAxisV])) +
           Jet3::variable(kAxisX, p[kAxisX]) * jet_from_v_series(hx.at(p[kAxisV]));
  };
  spec.density.h = ScalarField::from_jet_fn(hfn, "three_step:h",
                                            Deps{false, true, true, false});

  const double h0min = min_on_grid([&](double v) { return h0.value(v); }, lo, hi);
  const double hxmax = max_abs_on_grid([&](double v) { return hx.value(v); }, lo, hi);
  const double xw = std::min(0.45 * h0min / hxmax, 1.5);

  spec.domain = default_box();
  spec.domain.lo[kAxisV] = lo;
  spec.domain.hi[kAxisV] = hi;
  spec.domain.lo[kAxisX] = -xw;
  spec.domain.hi[kAxisX] = xw;
  spec.density.hint_lo = spec.domain.lo;
  spec.density.hint_hi = spec.domain.hi;

  spec.expected = {Branch::Spacelike3StepPr, 3,     CausalTag::Spacelike,
                   false,                    false, false,
                   CurvatureClass::Generic};
  return spec;
}

FamilySpec family_cahen_wallach(double a, double b, CahenWallachMode mode, double c1,
                                double c2, double hx) {
  FamilySpec spec;
  spec.params = {{"a", a}, {"b", b}, {"c1", c1}, {"c2", c2}};

  if (mode == CahenWallachMode::Isotropic) {
    require(a + b < 0,
            "cahen_wallach isotropic requires a + b < 0, got " + fmt(a + b));
    require(c1 >= 0 && c2 >= 0 && c1 + c2 > 0,
            "cahen_wallach isotropic requires c1, c2 >= 0 with c1 + c2 > 0");
    spec.name = "cahen_wallach:isotropic";
    spec.options["mode"] = "isotropic";
    spec.F = bind_expr("a*x^2+b*y^2", {{"a", a}, {"b", b}});
    const double s = std::sqrt(-a - b);
    spec.density.h =
        bind_expr("c1*exp(s*v)+c2*exp(-s*v)", {{"c1", c1}, {"c2", c2}, {"s", s}});
    spec.expected = {Branch::IsotropicPp, 2,    CausalTag::Lightlike,
                     true,                true, true,
                     CurvatureClass::Symmetric};
    spec.domain = default_box();
  } else {
    require(a != 0.0, "cahen_wallach non-isotropic requires a != 0");
    require(hx != 0.0, "cahen_wallach non-isotropic requires hx != 0");
    require(c1 > 0.0, "cahen_wallach non-isotropic requires c1 = h0(0) > 0");
    spec.name = "cahen_wallach:nonisotropic";
    spec.options["mode"] = "nonisotropic";
    spec.params["hx"] = hx;
    spec.F = bind_expr("a*(x^2-2*y^2)", {{"a", a}});
    // h0'' = a h0 with h0(0) = c1, h0'(0) = c2.
    const double s = std::sqrt(std::abs(a));
    ParamTable hp = {{"k1", c1}, {"k2", c2 / s}, {"s", s}, {"hx", hx}};
    const std::string h0_text = a > 0 ? "k1*cosh(s*v)+k2*sinh(s*v)"
                                      : "k1*cos(s*v)+k2*sin(s*v)";
    spec.density.h = bind_expr(h0_text + "+hx*x", hp);
    ScalarField h0_field = bind_expr(h0_text, hp);

    // Largest symmetric v interval (up to 1.5) keeping h0 comfortably positive.
    auto h0_at = [&](double v) { return h0_field.value(Point(0, v, 0, 0)); };
    double vhw = 1.5;
    while (vhw > 0.1 && min_on_grid(h0_at, -vhw, vhw) < 0.25 * c1) vhw *= 0.8;
    const double h0min = min_on_grid(h0_at, -vhw, vhw);
    require(h0min > 0,
            "cahen_wallach non-isotropic: h0 has no positive neighborhood of v = 0");
    const double xw = std::min(0.45 * h0min / std::abs(hx), 1.5);

    spec.domain = default_box();
    spec.domain.lo[kAxisV] = -vhw;
    spec.domain.hi[kAxisV] = vhw;
    spec.domain.lo[kAxisX] = -xw;
    spec.domain.hi[kAxisX] = xw;
    spec.density.hint_lo = spec.domain.lo;
    spec.density.hint_hi = spec.domain.hi;
    spec.expected = {Branch::Spacelike2StepPp, 2,    CausalTag::Spacelike,
                     true,                     true, false,
                     CurvatureClass::Symmetric};
  }
  spec.metric = prwave_metric(spec.F);
  return spec;
}

FamilySpec family_egorov(EgorovCase c, double a, double b, double c1, double c2,
                         double hx) {
  FamilySpec spec;
  spec.params = {{"a", a}, {"b", b}, {"c1", c1}, {"c2", c2}};
  Box box = default_box();

  switch (c) {
    case EgorovCase::C1a: {
      require(a + b < 0, "egorov 1a requires a + b < 0");
      require(c2 > -c1 * c1 / (2.0 * (a + b)),
              "egorov 1a requires c2 > -c1^2 / (2(a+b)) so the density stays positive");
      spec.name = "egorov:1a";
      spec.options["case"] = "1a";
      const ParamTable p = {{"a", a}, {"b", b}, {"q2", -(a + b) / 2.0},
                            {"c1", c1}, {"c2", c2}};
      // f = 1/h: the density inverse modulates the plane-wave coefficients.
      spec.F = bind_expr("(a*x^2+b*y^2)/(q2*v^2+c1*v+c2)", p);
      spec.density.h = bind_expr("q2*v^2+c1*v+c2", p);
      spec.expected = {Branch::IsotropicPp, 2,    CausalTag::Lightlike,
                       true,                true, true,
                       CurvatureClass::Recurrent};
      break;
    }
    case EgorovCase::C1b: {
      require(a + b > 0, "egorov 1b requires a + b > 0");
      require(c1 > std::abs(c2), "egorov 1b requires c1 > |c2|");
      spec.name = "egorov:1b";
      spec.options["case"] = "1b";
      const double s = a + b;
      const ParamTable p = {{"a", a},   {"b", b},        {"s", s},
                            {"fc", -1.0 / s},            {"rs", std::sqrt(s)},
                            {"c1", c1}, {"c2", c2}};
      spec.F = bind_expr("fc*(1+s*exp(4*v))*(a*x^2+b*y^2)", p);
      spec.density.h = bind_expr(
          "exp(-v)*(c1*cosh(0.5*rs*exp(2*v))+c2*sinh(0.5*rs*exp(2*v)))", p);
      spec.expected = {Branch::IsotropicPp, 2,    CausalTag::Lightlike,
                       true,                true, true,
                       CurvatureClass::Recurrent};
      box.hi[kAxisV] = 1.2;  // density derivatives grow doubly exponentially in v
      break;
    }
    case EgorovCase::C2a: {
      require(a != 0.0, "egorov 2a requires a != 0");
      require(hx != 0.0, "egorov 2a requires hx != 0");
      require(c2 > 0.0, "egorov 2a requires c2 = h0(0) > 0");
      spec.name = "egorov:2a";
      spec.options["case"] = "2a";
      spec.params["hx"] = hx;
      const ParamTable p = {{"a", a}, {"ha", a / 2.0}, {"c1", c1}, {"c2", c2},
                            {"hx", hx}};
      spec.F = bind_expr("a*(x^2-2*y^2)/(ha*v^2+c1*v+c2)", p);
      spec.density.h = bind_expr("ha*v^2+c1*v+c2+hx*x", p);
      ScalarField h0_field = bind_expr("ha*v^2+c1*v+c2", p);
      auto h0_at = [&](double v) { return h0_field.value(Point(0, v, 0, 0)); };
      double vhw = 1.5;
      while (vhw > 0.1 && min_on_grid(h0_at, -vhw, vhw) < 0.25 * c2) vhw *= 0.8;
      const double h0min = min_on_grid(h0_at, -vhw, vhw);
      require(h0min > 0, "egorov 2a: h0 not positive near v = 0");
      const double xw = std::min(0.45 * h0min / std::abs(hx), 1.5);
      box.lo[kAxisV] = -vhw;
      box.hi[kAxisV] = vhw;
      box.lo[kAxisX] = -xw;
      box.hi[kAxisX] = xw;
      spec.expected = {Branch::Spacelike2StepPp, 2,    CausalTag::Spacelike,
                       true,                     true, false,
                       CurvatureClass::Recurrent};
      break;
    }
    case EgorovCase::C2b: {
      require(a > 0.0, "egorov 2b requires a > 0");
      require(c1 > std::abs(c2), "egorov 2b requires c1 > |c2|");
      require(hx != 0.0, "egorov 2b requires hx != 0");
      spec.name = "egorov:2b";
      spec.options["case"] = "2b";
      spec.params["hx"] = hx;
      const ParamTable p = {{"a", a}, {"ra", std::sqrt(a)}, {"c1", c1}, {"c2", c2},
                            {"hx", hx}};
      spec.F = bind_expr("(1+a*exp(4*v))*(x^2-2*y^2)", p);
      const std::string h0_text =
          "exp(-v)*(c1*cosh(0.5*ra*exp(2*v))+c2*sinh(0.5*ra*exp(2*v)))";
      spec.density.h = bind_expr(h0_text + "+hx*x", p);
      ScalarField h0_field = bind_expr(h0_text, p);
      auto h0_at = [&](double v) { return h0_field.value(Point(0, v, 0, 0)); };
      const double vhw = 1.0;
      const double h0min = min_on_grid(h0_at, -vhw, vhw);
      require(h0min > 0, "egorov 2b: h0 not positive on the v range");
      const double xw = std::min(0.45 * h0min / std::abs(hx), 1.5);
      box.lo[kAxisV] = -vhw;
      box.hi[kAxisV] = vhw;
      box.lo[kAxisX] = -xw;
      box.hi[kAxisX] = xw;
      spec.expected = {Branch::Spacelike2StepPp, 2,    CausalTag::Spacelike,
                       true,                     true, false,
                       CurvatureClass::Recurrent};
      break;
    }
  }
  spec.metric = prwave_metric(spec.F);
  spec.domain = box;
  if (spec.expected.causal == CausalTag::Spacelike) {
    spec.density.hint_lo = box.lo;
    spec.density.hint_hi = box.hi;
  }
  return spec;
}

namespace {

double param_or(const ParamTable& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

std::string option_or(const std::map<std::string, std::string>& options,
                      const std::string& key, const std::string& fallback) {
  auto it = options.find(key);
  return it == options.end() ? fallback : it->second;
}

}  // namespace

FamilySpec make_family(const std::string& name, ParamTable params,
                       std::map<std::string, std::string> options) {
  if (name == "isotropic_pp") {
    const double gamma0 = param_or(params, "gamma0", -2.0);
    const double A = param_or(params, "A", 1.0);
    const double B = param_or(params, "B", 1.0);
    if (options.count("shape")) {
      ScalarField shape = bind_expr(options.at("shape"), params);
      return family_isotropic_pp(gamma0, A, B, shape, false);
    }
    return family_isotropic_pp(gamma0, A, B);
  }
  if (name == "harmonic_plane_wave") {
    const double A = param_or(params, "A", 0.0);
    const bool half_square = std::abs(A * A - 0.5) < 1e-12;
    const std::string key = half_square ? "fy" : "fx";
    Profile profile = profile_expr(option_or(options, key, "cos(v)"), params);
    return family_harmonic_plane_wave(A, profile, param_or(params, "c1", 1.0),
                                      param_or(params, "c2", 0.0),
                                      param_or(params, "hx", 1.0),
                                      param_or(params, "vrange", 0.6));
  }
  if (name == "three_step") {
    Profile h0 = profile_expr(option_or(options, "h0", "2"), params);
    Profile hx = profile_expr(option_or(options, "hx", "1+v/10"), params);
    Profile alpha = profile_expr(option_or(options, "alpha", "0"), params);
    return family_three_step(param_or(params, "A", 0.0), h0, hx, alpha,
                             param_or(params, "vrange", 0.5));
  }
  if (name == "cahen_wallach") {
    const std::string mode = option_or(options, "mode", "isotropic");
    if (mode == "isotropic")
      return family_cahen_wallach(param_or(params, "a", -1.0),
                                  param_or(params, "b", -1.0),
                                  CahenWallachMode::Isotropic,
                                  param_or(params, "c1", 1.0),
                                  param_or(params, "c2", 1.0), 0.0);
    if (mode == "nonisotropic")
      return family_cahen_wallach(
          param_or(params, "a", 1.0), param_or(params, "b", 0.0),
          CahenWallachMode::NonIsotropic, param_or(params, "c1", 1.0),
          param_or(params, "c2", 0.0), param_or(params, "hx", 1.0));
    throw ConstraintError("cahen_wallach mode must be isotropic or nonisotropic, got '" +
                          mode + "'");
  }
  if (name == "egorov") {
    const std::string c = option_or(options, "case", "1a");
    EgorovCase ec;
    if (c == "1a")
      ec = EgorovCase::C1a;
    else if (c == "1b")
      ec = EgorovCase::C1b;
    else if (c == "2a")
      ec = EgorovCase::C2a;
    else if (c == "2b")
      ec = EgorovCase::C2b;
    else
      throw ConstraintError("egorov case must be one of 1a, 1b, 2a, 2b; got '" + c +
                            "'");
    const double dflt_a = (ec == EgorovCase::C1a)   ? -1.0
                          : (ec == EgorovCase::C1b) ? 2.0
                          : (ec == EgorovCase::C2a) ? 2.0
                                                    : 4.0;
    const double dflt_b = (ec == EgorovCase::C1a)   ? -1.0
                          : (ec == EgorovCase::C1b) ? 2.0
                                                    : 0.0;
    const double dflt_c1 = (ec == EgorovCase::C1a || ec == EgorovCase::C2a) ? 0.0 : 1.0;
    const double dflt_c2 = (ec == EgorovCase::C1a || ec == EgorovCase::C2a) ? 1.0 : 0.0;
    return family_egorov(ec, param_or(params, "a", dflt_a),
                         param_or(params, "b", dflt_b), param_or(params, "c1", dflt_c1),
                         param_or(params, "c2", dflt_c2), param_or(params, "hx", 1.0));
  }
  throw ConstraintError(
      "unknown family '" + name +
      "' (expected isotropic_pp, harmonic_plane_wave, three_step, cahen_wallach, "
      "egorov)");
}

std::vector<FamilySpec> builtin_family_corpus() {
  std::vector<FamilySpec> corpus;
  corpus.push_back(family_isotropic_pp(-2.0, 1.0, 1.0));
  corpus.push_back(
      family_harmonic_plane_wave(0.0, profile_expr("cos(v)"), 1.0, 0.0, 1.0));
  corpus.push_back(family_harmonic_plane_wave(1.0 / std::sqrt(2.0),
                                              profile_expr("cos(v)"), 1.0, 0.0, 1.0));
  corpus.push_back(family_three_step(0.0, profile_expr("2"), profile_expr("1+v/10"),
                                     profile_expr("0")));
  corpus.push_back(
      family_cahen_wallach(-1.0, -1.0, CahenWallachMode::Isotropic, 1.0, 1.0));
  corpus.push_back(
      family_cahen_wallach(1.0, 0.0, CahenWallachMode::NonIsotropic, 1.0, 0.0, 1.0));
  corpus.push_back(family_egorov(EgorovCase::C1a, -1.0, -1.0, 0.0, 1.0));
  corpus.push_back(family_egorov(EgorovCase::C1b, 2.0, 2.0, 1.0, 0.0));
  corpus.push_back(family_egorov(EgorovCase::C2a, 2.0, 0.0, 0.0, 1.0, 1.0));
  corpus.push_back(family_egorov(EgorovCase::C2b, 4.0, 0.0, 1.0, 0.0, 1.0));
  return corpus;
}

}  // namespace prwave
