#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prwave/families.hpp"
#include "prwave/ode.hpp"

namespace prwave {

struct Tolerances {
  double solution = 1e-8;    // residual_norm below this counts as a solution
  double lightlike = 1e-10;  // causal_character threshold
  double nilpotency = 1e-9;
  double flat = 1e-10;      // |R| below this at all samples: flat-excluded
  double harmonic = 1e-7;   // codazzi defect bound
  double tau_constancy = 1e-9;
  double rank = 1e-9;       // singular-value cutoff factor
  double isotropy = 1e-7;   // Ricci-image pairing bound
  double pp_du_f = 1e-9;    // |dF/du| bound for the pp flag
};

/// Smallest k <= 4 with |M^k| < tol (|M|^k + tol); 0 when M itself is below
/// tol, -1 when even M^4 stays above threshold (not nilpotent).
int nilpotency_index(const Eigen::Matrix4d& m, double tol = 1e-9);

std::string nilpotency_label(int index);

struct PointDiagnostics {
  Point p;
  double residual = 0.0;
  double tau = 0.0;
  double h = 0.0;
  CausalTag causal = CausalTag::Zero;
  bool causal_near_threshold = false;
  int nilpotency = 0;
  bool ricci_isotropic = false;
  bool pp_wave = false;
  bool flat = false;
  double codazzi = 0.0;
  double div_gh_max = 0.0;
  double grad_norm_sq = 0.0;
};

struct ClassificationReport {
  bool is_solution = false;
  double max_residual = 0.0;
  double tau_value = 0.0;   // mean over samples
  double tau_spread = 0.0;  // max - min over samples
  CausalTag causal = CausalTag::Zero;
  bool causal_consistent = true;
  bool causal_near_threshold = false;
  int nilpotency = 0;
  bool nilpotency_consistent = true;
  Branch branch = Branch::OutsideAnsatz;
  bool harmonic_curvature = false;
  double codazzi_max = 0.0;
  bool pp_wave = false;
  bool ricci_image_isotropic = false;
  bool flat = false;
  std::optional<double> recurrent_defect;
  double max_div_gh = 0.0;
  std::string branch_explanation;
  std::vector<PointDiagnostics> samples;
};

/// Aggregates per-point diagnostics over the sample set and decides the
/// branch via (causal character, nilpotency, pp structure). Branch labels
/// require unanimity across samples; disagreement falls back to
/// outside-ansatz with the per-point detail kept in `samples`.
ClassificationReport classify(const MetricField& metric, const DensityField& density,
                              std::span<const Point> samples,
                              const Tolerances& tol = {});

/// Dense-output solution of h'' = q(v) h. The profile view reconstructs
/// higher series coefficients through the equation itself, so curvature-grade
/// derivative data is available everywhere on the interval.
class DensityOdeSolution {
 public:
  DensityOdeSolution(DenseSolution left, DenseSolution right, Profile q, double v0,
                     Eigen::Vector2d y0);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  Eigen::Vector2d state(double v) const;  // (h, h')
  double value(double v) const { return state(v)[0]; }

  Profile profile() const;

 private:
  std::shared_ptr<const DenseSolution> left_, right_;
  Profile q_;
  double v0_;
  Eigen::Vector2d y0_;
  double lo_, hi_;
};

/// Integrates h'' = q(v) h with data (h0, h0p) at v0 over [lo, hi].
/// Throws OdeStepUnderflow with the failure location on stiffness.
DensityOdeSolution solve_density_ode(const Profile& q, double v0, double h0,
                                     double h0p, double lo, double hi,
                                     const OdeOptions& options = {});

struct Ray {
  Point base;
  Eigen::Vector4d dir;
};

struct PositivityResult {
  bool bounded = false;
  double boundary = 0.0;  // ray parameter of the first zero when bounded
};

/// Walks h along base + t dir for t in [t0, t1] (either order), bisecting the
/// first sign change to 1e-12 parameter accuracy. Positive throughout:
/// bounded = false. h(base + t0 dir) <= 0 is an error.
PositivityResult positivity_domain(const DensityField& density, const Ray& ray,
                                   double t0, double t1);

struct GeodesicState {
  Point position;
  Eigen::Vector4d velocity;
  double s = 0.0;
};

enum class GeodesicTermination { ReachedSMax, Blowup, StepUnderflow };

const char* to_string(GeodesicTermination t);

struct GeodesicResult {
  std::vector<GeodesicState> samples;
  GeodesicTermination termination = GeodesicTermination::ReachedSMax;
  double s_reached = 0.0;
  double initial_energy = 0.0;  // g(x', x') at s = 0
  double energy_drift = 0.0;    // max |g(x',x') - initial| over samples
};

/// Integrates x''^k + Gamma^k_{ij} x'^i x'^j = 0 with adaptive RK and records
/// uniformly spaced samples. Blowup: any coordinate or velocity beyond 1e12.
GeodesicResult geodesic_integrate(const MetricField& metric,
                                  const GeodesicState& init, double s_max,
                                  const OdeOptions& options = {},
                                  int sample_count = 201);

}  // namespace prwave
