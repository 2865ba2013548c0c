#pragma once

#include <map>
#include <string>
#include <vector>

#include "prwave/expr.hpp"
#include "prwave/weighted.hpp"

namespace prwave {

enum class Branch {
  FlatExcluded,
  IsotropicPp,
  Spacelike2StepPp,
  Spacelike3StepPr,
  OutsideAnsatz,
};

const char* to_string(Branch branch);

enum class CurvatureClass { Symmetric, Recurrent, Generic };

struct FamilyExpectation {
  Branch branch = Branch::OutsideAnsatz;
  int nilpotency_index = 0;
  CausalTag causal = CausalTag::Zero;
  bool harmonic_curvature = false;
  bool pp_wave = false;
  bool global_density = false;
  CurvatureClass curvature_class = CurvatureClass::Generic;
};

struct Box {
  Eigen::Vector4d lo = Eigen::Vector4d::Constant(-1.0);
  Eigen::Vector4d hi = Eigen::Vector4d::Constant(1.0);

  bool contains(const Point& p) const {
    return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
  }
};

/// A concrete metric/density pair with the classification metadata it is
/// expected to reproduce, plus a box inside its validity domain (h > 0).
struct FamilySpec {
  std::string name;
  ParamTable params;
  std::map<std::string, std::string> options;
  ScalarField F;
  MetricField metric;
  DensityField density;
  FamilyExpectation expected;
  Box domain;
};

/// pp-wave with lightlike grad h: F with laplacian(F) = gamma0 < 0 and
/// h(v) = A e^{wv} + B e^{-wv}, w = sqrt(-gamma0/2). The F shape is verified
/// against gamma0 at probe points.
FamilySpec family_isotropic_pp(double gamma0, double A, double B);
FamilySpec family_isotropic_pp(double gamma0, double A, double B,
                               const ScalarField& f_shape, bool shape_is_plane_wave);

/// Plane wave F = Fx x^2 + Fy y^2 + Fxy xy with (2-A^2)Fx + (1-2A^2)Fy = 0,
/// Fxy = -2A(Fx + 2Fy), density h0(v) + (x+Ay) hx where h0 solves
/// h0'' + (Fx+Fy) h0 = 0 with data (c1, c2) at v=0. For A^2 = 1/2 the profile
/// argument is Fy (the constraint forces Fx = 0); otherwise it is Fx.
FamilySpec family_harmonic_plane_wave(double A, const Profile& profile, double c1,
                                      double c2, double hx, double v_halfwidth = 0.6);

/// Genuinely pr-wave branch with 3-step nilpotent Ricci operator:
/// h = h0(v) + x hx(v) with hx' != 0, F = F0(v,x) + u (alpha + 2 log(h) hx'/hx)
/// where F0 is built in closed form so the remaining field equation holds.
/// Restricted to A = 0.
FamilySpec family_three_step(double A, const Profile& h0, const Profile& hx,
                             const Profile& alpha, double v_halfwidth = 0.5);

enum class CahenWallachMode { Isotropic, NonIsotropic };

/// F = a x^2 + b y^2 (isotropic; requires a+b < 0) or F = a (x^2 - 2 y^2)
/// (non-isotropic) with the matching exponential/oscillatory density.
FamilySpec family_cahen_wallach(double a, double b, CahenWallachMode mode, double c1,
                                double c2, double hx = 1.0);

enum class EgorovCase { C1a, C1b, C2a, C2b };

/// Plane waves F = f(v)(a x^2 + b y^2) with recurrent curvature and the four
/// explicit density constructions (two global isotropic, two local
/// non-isotropic).
FamilySpec family_egorov(EgorovCase c, double a, double b, double c1, double c2,
                         double hx = 1.0);

/// Name-based dispatcher used by the CLI and manifests. `options` may carry
/// "mode" (cahen_wallach), "case" (egorov) and profile expressions
/// ("fx", "fy", "h0", "hx", "alpha", "shape").
FamilySpec make_family(const std::string& name, ParamTable params,
                       std::map<std::string, std::string> options = {});

/// The instances exercised by the acceptance suite: isotropic pp, plane wave
/// (A = 0 and A^2 = 1/2), three-step, Cahen-Wallach both modes, Egorov 1a-2b.
std::vector<FamilySpec> builtin_family_corpus();

}  // namespace prwave
