#include "prwave/ode.hpp"

#include <algorithm>
#include <cmath>

namespace prwave {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// Error weights: (5th order b) - (4th order b).
constexpr double kE[7] = {71.0 / 57600,      0.0,          -71.0 / 16695, 71.0 / 1920,
                          -17253.0 / 339200, 22.0 / 525,   -1.0 / 40};
// Dense-output weights.
constexpr double kD[7] = {-12715105075.0 / 11282082432.0,
                          0.0,
                          87487479700.0 / 32700410799.0,
                          -10690763975.0 / 1880347072.0,
                          701980252875.0 / 199316789632.0,
                          -1453857185.0 / 822651844.0,
                          69997945.0 / 29380423.0};

}  // namespace

Eigen::VectorXd DenseSolution::eval(double t) const {
  if (segments_.empty()) throw Error("dense solution is empty");
  const bool forward = segments_.front().h > 0;
  // Binary search for the segment containing t (clamped at the ends).
  int lo = 0, hi = static_cast<int>(segments_.size()) - 1;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    const double t_end = segments_[mid].t0 + segments_[mid].h;
    if (forward ? (t <= t_end) : (t >= t_end))
      hi = mid;
    else
      lo = mid + 1;
  }
  return segments_[lo].eval(t);
}

OdeResult integrate_rk45(const OdeRhs& rhs, double t0, const Eigen::VectorXd& y0,
                         double t1, const OdeOptions& options) {
  OdeResult result;
  result.t_reached = t0;
  result.y_reached = y0;
  if (t1 == t0) return result;

  const double span = t1 - t0;
  const double dir = span > 0 ? 1.0 : -1.0;
  const double hmax = options.max_step > 0 ? options.max_step : std::abs(span);
  const double hmin = 1e-14 * std::max(1.0, std::abs(span));

  const long n = y0.size();
  std::array<Eigen::VectorXd, 7> k;
  for (auto& ki : k) ki.resize(n);

  Eigen::VectorXd y = y0;
  double t = t0;
  rhs(t, y, k[0]);

  double h = options.initial_step != 0.0 ? std::abs(options.initial_step) : 0.0;
  if (h == 0.0) {
    // Crude starter; the controller corrects it within a couple of steps.
    const double scale = options.atol + options.rtol * y.cwiseAbs().maxCoeff();
    const double d = k[0].cwiseAbs().maxCoeff();
    h = d > 0 ? std::min(hmax, 0.01 * std::sqrt(scale / d)) : 1e-6 * std::abs(span);
    h = std::min(h, hmax);
  }

  std::vector<OdeSegment> segments;
  Eigen::VectorXd y_new(n), y_tmp(n), err(n);

  long total = 0;
  while (dir * (t1 - t) > 0) {
    if (++total > options.max_steps) {
      result.termination = OdeTermination::MaxSteps;
      break;
    }
    h = std::min(h, hmax);
    if (h < hmin) {
      result.termination = OdeTermination::StepUnderflow;
      break;
    }
    if (dir * (t + dir * h - t1) > 0) h = std::abs(t1 - t);
    const double hs = dir * h;

    for (int s = 1; s < 7; ++s) {
      y_tmp = y;
      for (int j = 0; j < s; ++j)
        if (kA[s][j] != 0.0) y_tmp += hs * kA[s][j] * k[j];
      rhs(t + kC[s] * hs, y_tmp, k[s]);
    }
    y_new = y_tmp;  // stage 7 state is the 5th-order solution

    err.setZero();
    for (int s = 0; s < 7; ++s)
      if (kE[s] != 0.0) err += kE[s] * k[s];
    err *= hs;

    double err_norm = 0.0;
    for (long i = 0; i < n; ++i) {
      const double scale =
          options.atol +
          options.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      const double q = err[i] / scale;
      err_norm += q * q;
    }
    err_norm = std::sqrt(err_norm / static_cast<double>(n));

    if (err_norm <= 1.0) {
      OdeSegment seg;
      seg.t0 = t;
      seg.h = hs;
      seg.c0 = y;
      seg.c1 = y_new - y;
      seg.c2 = hs * k[0] - seg.c1;
      seg.c3 = seg.c1 - hs * k[6] - seg.c2;
      seg.c4 = Eigen::VectorXd::Zero(n);
      for (int s = 0; s < 7; ++s)
        if (kD[s] != 0.0) seg.c4 += kD[s] * k[s];
      seg.c4 *= hs;
      segments.push_back(std::move(seg));

      t += hs;
      y.swap(y_new);
      k[0] = k[6];  // FSAL
      ++result.accepted;

      if (options.blowup_threshold > 0 &&
          y.cwiseAbs().maxCoeff() > options.blowup_threshold) {
        result.termination = OdeTermination::Blowup;
        break;
      }
    } else {
      ++result.rejected;
    }

    const double factor =
        err_norm > 0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
  }

  result.t_reached = t;
  result.y_reached = y;
  result.dense = DenseSolution(std::move(segments));
  return result;
}

}  // namespace prwave
