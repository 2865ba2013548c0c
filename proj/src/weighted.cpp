#include "prwave/weighted.hpp"

#include <cmath>

namespace prwave {

WeightedTensors weighted_from_jets(const CurvatureJets& cj, const ScalarField& h,
                                   const Point& p) {
  WeightedTensors wt;
  wt.point = p;

  const Jet3 hj = h.eval(p);
  wt.h = hj.value();
  if (!(wt.h > 0.0))
    throw NonpositiveDensityError("density is nonpositive (h = " +
                                      std::to_string(wt.h) + ")",
                                  p);

  std::array<Jet3, 4> dh;
  for (int a = 0; a < 4; ++a) dh[a] = derive(hj, a);

  // Hess_ab = d_a d_b h - Gamma^m_{ab} d_m h
  std::array<Jet3, 16> hess;
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b) {
      Jet3 t = derive(dh[a], b);
      for (int m = 0; m < 4; ++m) t -= cj.christoffel(m, a, b) * dh[m];
      hess[a * 4 + b] = t;
      hess[b * 4 + a] = t;
    }

  Jet3 lap;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) lap += cj.ginv[a * 4 + b] * hess[a * 4 + b];

  std::array<Jet3, 16> gh;
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b) {
      Jet3 t = hj * cj.ricci[a * 4 + b] - hess[a * 4 + b] + lap * cj.g[a * 4 + b];
      gh[a * 4 + b] = t;
      gh[b * 4 + a] = t;
    }

  for (int a = 0; a < 4; ++a) {
    double grad = 0.0;
    for (int b = 0; b < 4; ++b) grad += cj.ginv[a * 4 + b].value() * dh[b].value();
    wt.grad_h[a] = grad;
  }
  wt.grad_norm_sq = 0.0;
  for (int a = 0; a < 4; ++a) wt.grad_norm_sq += wt.grad_h[a] * dh[a].value();

  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      wt.hess_h(a, b) = hess[a * 4 + b].value();
      wt.gh(a, b) = gh[a * 4 + b].value();
      wt.h_rho(a, b) = wt.h * cj.ricci[a * 4 + b].value();
    }
  wt.lap_h = lap.value();
  wt.tau = cj.tau.value();
  for (int a = 0; a < 4; ++a) wt.grad_tau[a] = derive(cj.tau, a).value();

  // (div G^h)_k = g^{ij} [ d_i G_{jk} - Gamma^m_{ij} G_{mk} - Gamma^m_{ik} G_{jm} ]
  for (int k = 0; k < 4; ++k) {
    double sum = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const double ginv_ij = cj.ginv[i * 4 + j].value();
        if (ginv_ij == 0.0) continue;
        double t = derive(gh[j * 4 + k], i).value();
        for (int m = 0; m < 4; ++m)
          t -= cj.christoffel(m, i, j).value() * gh[m * 4 + k].value() +
               cj.christoffel(m, i, k).value() * gh[j * 4 + m].value();
        sum += ginv_ij * t;
      }
    wt.div_gh[k] = sum;
  }
  return wt;
}

WeightedTensors weighted_at(const MetricField& metric, const DensityField& density,
                            const Point& p) {
  const auto cj = curvature_jets(metric.eval(p));
  return weighted_from_jets(cj, density.h, p);
}

const char* to_string(CausalTag tag) {
  switch (tag) {
    case CausalTag::Zero:
      return "zero";
    case CausalTag::Lightlike:
      return "lightlike";
    case CausalTag::Spacelike:
      return "spacelike";
    case CausalTag::Timelike:
      return "timelike";
  }
  return "?";
}

CausalTag causal_character(const WeightedTensors& wt, double tol) {
  if (wt.grad_h.cwiseAbs().maxCoeff() < tol) return CausalTag::Zero;
  const double euclid = wt.grad_h.squaredNorm();
  if (std::abs(wt.grad_norm_sq) < tol * (1.0 + euclid)) return CausalTag::Lightlike;
  return wt.grad_norm_sq > 0 ? CausalTag::Spacelike : CausalTag::Timelike;
}

bool causal_near_threshold(const WeightedTensors& wt, double tol) {
  if (wt.grad_h.cwiseAbs().maxCoeff() < tol) return false;
  const double euclid = wt.grad_h.squaredNorm();
  const double threshold = tol * (1.0 + euclid);
  const double v = std::abs(wt.grad_norm_sq);
  return v >= threshold * 0.1 && v <= threshold * 10.0;
}

double residual_norm(const WeightedTensors& wt) {
  const double scale = std::max(1.0, wt.h_rho.cwiseAbs().maxCoeff());
  return wt.gh.cwiseAbs().maxCoeff() / scale;
}

}  // namespace prwave
