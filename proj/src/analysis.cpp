#include "prwave/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace prwave {

int nilpotency_index(const Eigen::Matrix4d& m, double tol) {
  const double norm = m.norm();
  if (norm < tol) return 0;
  Eigen::Matrix4d power = m;
  for (int k = 2; k <= 4; ++k) {
    power = power * m;
    if (power.norm() < tol * (std::pow(norm, k) + tol)) return k;
  }
  return -1;
}

std::string nilpotency_label(int index) {
  if (index < 0) return "not-nilpotent";
  return std::to_string(index);
}

namespace {

struct PointData {
  PointDiagnostics diag;
  Eigen::Matrix4d ricci_op;
};

PointData evaluate_point(const MetricField& metric, const DensityField& density,
                         const Point& p, const Tolerances& tol) {
  const auto mj = metric.eval(p);
  const auto cj = curvature_jets(mj);
  const auto bundle = curvature_from_jets(cj, p);
  const auto wt = weighted_from_jets(cj, density.h, p);

  PointData out;
  out.ricci_op = bundle.ricci_op;
  PointDiagnostics& d = out.diag;
  d.p = p;
  d.residual = residual_norm(wt);
  d.tau = bundle.tau;
  d.h = wt.h;
  d.causal = causal_character(wt, tol.lightlike);
  d.causal_near_threshold = causal_near_threshold(wt, tol.lightlike);
  d.nilpotency = nilpotency_index(bundle.ricci_op, tol.nilpotency);
  d.flat = bundle.riemann_norm() < tol.flat;
  d.codazzi = codazzi_defect(bundle);
  d.div_gh_max = wt.div_gh.cwiseAbs().maxCoeff();
  d.grad_norm_sq = wt.grad_norm_sq;

  const RicciImage image = ricci_operator_image(bundle, tol.rank, tol.isotropy);
  d.ricci_isotropic = image.totally_isotropic;
  d.pp_wave = image.totally_isotropic;
  if (metric.is_pr_wave()) {
    const double du_f = std::abs(derive(metric.pr_profile().eval(p), kAxisU).value());
    d.pp_wave = d.pp_wave && du_f < tol.pp_du_f * (1.0 + std::abs(wt.tau));
  }
  return out;
}

}  // namespace

ClassificationReport classify(const MetricField& metric, const DensityField& density,
                              std::span<const Point> samples, const Tolerances& tol) {
  if (samples.empty()) throw Error("classify requires a nonempty sample set");

  ClassificationReport rep;
  rep.samples.reserve(samples.size());

  double tau_min = 0, tau_max = 0, tau_sum = 0;
  bool first = true;
  std::vector<Eigen::Matrix4d> ricci_ops;
  for (const Point& p : samples) {
    PointData data = evaluate_point(metric, density, p, tol);
    const PointDiagnostics& d = data.diag;
    rep.samples.push_back(d);
    ricci_ops.push_back(data.ricci_op);

    rep.max_residual = std::max(rep.max_residual, d.residual);
    rep.codazzi_max = std::max(rep.codazzi_max, d.codazzi);
    rep.max_div_gh = std::max(rep.max_div_gh, d.div_gh_max);
    rep.causal_near_threshold |= d.causal_near_threshold;
    tau_sum += d.tau;
    if (first) {
      tau_min = tau_max = d.tau;
      rep.causal = d.causal;
      rep.nilpotency = d.nilpotency;
      rep.flat = d.flat;
      rep.pp_wave = d.pp_wave;
      rep.ricci_image_isotropic = d.ricci_isotropic;
      first = false;
    } else {
      tau_min = std::min(tau_min, d.tau);
      tau_max = std::max(tau_max, d.tau);
      rep.causal_consistent &= d.causal == rep.causal;
      rep.nilpotency_consistent &= d.nilpotency == rep.nilpotency;
      rep.flat &= d.flat;
      rep.pp_wave &= d.pp_wave;
      rep.ricci_image_isotropic &= d.ricci_isotropic;
    }
  }
  rep.tau_value = tau_sum / static_cast<double>(samples.size());
  rep.tau_spread = tau_max - tau_min;
  rep.is_solution = rep.max_residual < tol.solution;
  rep.harmonic_curvature =
      rep.codazzi_max < tol.harmonic && rep.tau_spread < tol.tau_constancy;

  // Recurrence is probed at a handful of samples; zero curvature (flat) makes
  // the fit undefined and leaves the field unset.
  if (!rep.flat) {
    double worst = 0.0;
    bool any = false;
    const std::size_t step = std::max<std::size_t>(1, samples.size() / 5);
    for (std::size_t i = 0; i < samples.size(); i += step) {
      try {
        worst = std::max(worst, recurrent_curvature_defect(metric, samples[i]));
        any = true;
      } catch (const ZeroCurvatureError&) {
      }
    }
    if (any) rep.recurrent_defect = worst;
  }

  std::ostringstream why;
  if (rep.flat) {
    rep.branch = Branch::FlatExcluded;
    why << "curvature vanishes at every sample; the classification assumes a "
           "non-flat geometry";
  } else if (!rep.causal_consistent || !rep.nilpotency_consistent) {
    rep.branch = Branch::OutsideAnsatz;
    why << "samples disagree on "
        << (!rep.causal_consistent ? "the causal character of grad h"
                                   : "the nilpotency index")
        << "; no single branch applies";
  } else if (rep.causal == CausalTag::Lightlike && rep.pp_wave &&
             rep.nilpotency >= 0 && rep.nilpotency <= 2) {
    rep.branch = Branch::IsotropicPp;
    why << "grad h is lightlike, the Ricci image is totally isotropic and "
           "dF/du = 0: isotropic solution on a pp-wave";
  } else if (rep.causal == CausalTag::Spacelike && rep.nilpotency == 2 &&
             rep.pp_wave) {
    rep.branch = Branch::Spacelike2StepPp;
    why << "grad h is spacelike with a 2-step nilpotent Ricci operator on a "
           "pp-wave";
  } else if (rep.causal == CausalTag::Spacelike && rep.nilpotency == 3) {
    rep.branch = Branch::Spacelike3StepPr;
    why << "grad h is spacelike with a 3-step nilpotent Ricci operator: "
           "genuinely pr-wave";
  } else {
    rep.branch = Branch::OutsideAnsatz;
    why << "pattern (causal = " << to_string(rep.causal)
        << ", nilpotency = " << nilpotency_label(rep.nilpotency)
        << ", pp = " << (rep.pp_wave ? "yes" : "no")
        << ") matches no branch of the classification";
  }
  rep.branch_explanation = why.str();
  return rep;
}

DensityOdeSolution::DensityOdeSolution(DenseSolution left, DenseSolution right,
                                       Profile q, double v0, Eigen::Vector2d y0)
    : left_(std::make_shared<DenseSolution>(std::move(left))),
      right_(std::make_shared<DenseSolution>(std::move(right))),
      q_(std::move(q)),
      v0_(v0),
      y0_(y0) {
  lo_ = left_->empty() ? v0 : left_->t_back();
  hi_ = right_->empty() ? v0 : right_->t_back();
}

Eigen::Vector2d DensityOdeSolution::state(double v) const {
  if (v == v0_) return y0_;
  const DenseSolution& side = v < v0_ ? *left_ : *right_;
  if (side.empty()) return y0_;
  return side.eval(v);
}

Profile DensityOdeSolution::profile() const {
  auto self = *this;
  auto fn = [self](double v) {
    const Eigen::Vector2d y = self.state(v);
    const auto qs = self.q_.at(v);
    Profile::Series h;
    h[0] = y[0];
    h[1] = y[1];
    // h'' = q h propagated as a series recurrence: the dense output supplies
    // (h, h'), the equation supplies everything above.
    for (int k = 0; k + 2 <= Profile::kOrder; ++k) {
      double conv = 0.0;
      for (int m = 0; m <= k; ++m) conv += qs[m] * h[k - m];
      h[k + 2] = conv / ((k + 1) * (k + 2));
    }
    return h;
  };
  return Profile(fn, "ode[h''=(" + q_.provenance() + ")h]");
}

DensityOdeSolution solve_density_ode(const Profile& q, double v0, double h0,
                                     double h0p, double lo, double hi,
                                     const OdeOptions& options) {
  if (lo > hi) std::swap(lo, hi);
  auto rhs = [&q](double v, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    dy[0] = y[1];
    dy[1] = q.value(v) * y[0];
  };
  Eigen::Vector2d y0(h0, h0p);

  auto run = [&](double target) {
    if (target == v0) return DenseSolution();
    OdeResult r = integrate_rk45(rhs, v0, y0, target, options);
    if (r.termination == OdeTermination::StepUnderflow)
      throw OdeStepUnderflow("density ODE step size underflow near v = " +
                                 std::to_string(r.t_reached),
                             r.t_reached);
    if (r.termination != OdeTermination::Completed)
      throw Error("density ODE integration did not reach the interval end");
    return r.dense;
  };

  DenseSolution left = run(std::min(lo, v0));
  DenseSolution right = run(std::max(hi, v0));
  return DensityOdeSolution(std::move(left), std::move(right), q, v0, y0);
}

PositivityResult positivity_domain(const DensityField& density, const Ray& ray,
                                   double t0, double t1) {
  auto phi = [&](double t) -> double {
    const Point p = ray.base + t * ray.dir;
    return density.h.value(p);
  };
  if (!(phi(t0) > 0.0))
    throw NonpositiveDensityError("density is nonpositive at the ray base",
                                  Point(ray.base + t0 * ray.dir));

  constexpr int kScan = 512;
  double prev_t = t0;
  double prev_v = phi(t0);
  double a = 0, b = 0;
  bool bracketed = false;
  for (int i = 1; i <= kScan; ++i) {
    const double t = t0 + (t1 - t0) * i / kScan;
    const double v = phi(t);
    if (v <= 0.0) {
      a = prev_t;
      b = t;
      bracketed = true;
      break;
    }
    prev_t = t;
    prev_v = v;
  }
  (void)prev_v;
  if (!bracketed) return {false, 0.0};

  const double eps = 1e-12 * std::max({1.0, std::abs(t0), std::abs(t1)});
  while (std::abs(b - a) > eps) {
    const double mid = 0.5 * (a + b);
    if (phi(mid) > 0.0)
      a = mid;
    else
      b = mid;
  }
  return {true, 0.5 * (a + b)};
}

const char* to_string(GeodesicTermination t) {
  switch (t) {
    case GeodesicTermination::ReachedSMax:
      return "reached-s_max";
    case GeodesicTermination::Blowup:
      return "blowup";
    case GeodesicTermination::StepUnderflow:
      return "step-underflow";
  }
  return "?";
}

GeodesicResult geodesic_integrate(const MetricField& metric, const GeodesicState& init,
                                  double s_max, const OdeOptions& options,
                                  int sample_count) {
  auto rhs = [&metric](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    const Point pos(y[0], y[1], y[2], y[3]);
    const auto gamma = christoffel_values(metric, pos);
    for (int i = 0; i < 4; ++i) dy[i] = y[4 + i];
    for (int k = 0; k < 4; ++k) {
      double acc = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          acc += gamma[k * 16 + i * 4 + j] * y[4 + i] * y[4 + j];
      dy[4 + k] = -acc;
    }
  };

  Eigen::VectorXd y0(8);
  y0 << init.position[0], init.position[1], init.position[2], init.position[3],
      init.velocity[0], init.velocity[1], init.velocity[2], init.velocity[3];

  OdeOptions opts = options;
  if (opts.blowup_threshold == 0.0) opts.blowup_threshold = 1e12;
  // Geodesic experiments favor speed over the density solver's tight default.
  if (options.rtol == OdeOptions{}.rtol && options.atol == OdeOptions{}.atol) {
    opts.rtol = 1e-11;
    opts.atol = 1e-12;
  }

  OdeResult r = integrate_rk45(rhs, init.s, y0, init.s + s_max, opts);

  GeodesicResult out;
  out.s_reached = r.t_reached;
  switch (r.termination) {
    case OdeTermination::Completed:
      out.termination = GeodesicTermination::ReachedSMax;
      break;
    case OdeTermination::Blowup:
      out.termination = GeodesicTermination::Blowup;
      break;
    default:
      out.termination = GeodesicTermination::StepUnderflow;
      break;
  }

  auto energy = [&metric](const Eigen::VectorXd& y) {
    const Point pos(y[0], y[1], y[2], y[3]);
    const Eigen::Vector4d vel(y[4], y[5], y[6], y[7]);
    return vel.dot(metric.value(pos) * vel);
  };
  out.initial_energy = energy(y0);

  const double s_end = r.t_reached;
  const int n = std::max(2, sample_count);
  out.samples.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double s = init.s + (s_end - init.s) * i / (n - 1);
    Eigen::VectorXd y = (i == 0 || r.dense.empty()) ? y0 : r.dense.eval(s);
    if (i == n - 1 && r.termination == OdeTermination::Completed) y = r.y_reached;
    GeodesicState st;
    st.position = Point(y[0], y[1], y[2], y[3]);
    st.velocity = Eigen::Vector4d(y[4], y[5], y[6], y[7]);
    st.s = s;
    out.samples.push_back(st);
    out.energy_drift =
        std::max(out.energy_drift, std::abs(energy(y) - out.initial_energy));
  }
  return out;
}

}  // namespace prwave
