#pragma once

#include <optional>

#include <Eigen/Core>

#include "prwave/geometry.hpp"

namespace prwave {

/// Positive density function h on the chart, with an optional box where
/// positivity is expected to hold.
struct DensityField {
  ScalarField h;
  std::optional<Eigen::Vector4d> hint_lo, hint_hi;
};

struct WeightedTensors {
  Point point;
  double h = 0.0;
  Eigen::Vector4d grad_h;       // index-raised gradient
  Eigen::Matrix4d hess_h;       // second covariant derivative
  double lap_h = 0.0;           // g^{ij} (Hess h)_{ij}
  double grad_norm_sq = 0.0;    // g(grad h, grad h)
  Eigen::Matrix4d gh;           // G^h = h rho - Hess h + (lap h) g
  Eigen::Matrix4d h_rho;        // h * rho (residual scale)
  Eigen::Vector4d div_gh;       // g^{ij} (nabla_i G^h)_{jk}
  double tau = 0.0;
  Eigen::Vector4d grad_tau;     // d tau (coordinate components)
};

/// Evaluates every weighted quantity at p. Throws NonpositiveDensityError
/// when h(p) <= 0 and SingularMetricError when the metric degenerates.
WeightedTensors weighted_at(const MetricField& metric, const DensityField& density,
                            const Point& p);

/// Variant reusing curvature jets already computed at p.
WeightedTensors weighted_from_jets(const CurvatureJets& cj, const ScalarField& h,
                                   const Point& p);

enum class CausalTag { Zero, Lightlike, Spacelike, Timelike };

const char* to_string(CausalTag tag);

/// Causal character of grad h. Zero when every gradient component is below
/// tol; lightlike when |g(grad h, grad h)| < tol * (1 + |grad h|_euclid^2);
/// otherwise the sign of the norm decides.
CausalTag causal_character(const WeightedTensors& wt, double tol = 1e-10);

/// True when |grad_norm_sq| lies within a factor 10 of the lightlike
/// threshold; reports flag such points as numerically ambiguous.
bool causal_near_threshold(const WeightedTensors& wt, double tol = 1e-10);

/// Scale-aware solution residual: max |G^h| component normalized by
/// max(1, max |h rho| component).
double residual_norm(const WeightedTensors& wt);

}  // namespace prwave
