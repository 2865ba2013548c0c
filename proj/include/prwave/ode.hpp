#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "prwave/errors.hpp"

namespace prwave {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0 = choose automatically
  double max_step = 0.0;      // 0 = |t1 - t0|
  long max_steps = 2'000'000;
  // A nonzero threshold stops integration when any state component
  // exceeds it in magnitude.
  double blowup_threshold = 0.0;
};

enum class OdeTermination { Completed, Blowup, StepUnderflow, MaxSteps };

using OdeRhs =
    std::function<void(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy)>;

/// One accepted Dormand-Prince step with its quartic interpolation polynomial.
struct OdeSegment {
  double t0, h;
  Eigen::VectorXd c0, c1, c2, c3, c4;

  Eigen::VectorXd eval(double t) const {
    const double theta = (t - t0) / h;
    const double theta1 = 1.0 - theta;
    return c0 + theta * (c1 + theta1 * (c2 + theta * (c3 + theta1 * c4)));
  }
};

/// Piecewise dense output over the accepted steps. Evaluation clamps to the
/// covered interval; segments are stored in integration order (t may run
/// backwards).
class DenseSolution {
 public:
  DenseSolution() = default;
  explicit DenseSolution(std::vector<OdeSegment> segments)
      : segments_(std::move(segments)) {}

  bool empty() const { return segments_.empty(); }
  double t_front() const { return segments_.front().t0; }
  double t_back() const { return segments_.back().t0 + segments_.back().h; }

  Eigen::VectorXd eval(double t) const;

  const std::vector<OdeSegment>& segments() const { return segments_; }

 private:
  std::vector<OdeSegment> segments_;
};

struct OdeResult {
  DenseSolution dense;
  OdeTermination termination = OdeTermination::Completed;
  double t_reached = 0.0;
  Eigen::VectorXd y_reached;
  long accepted = 0;
  long rejected = 0;
};

/// Adaptive Dormand-Prince 5(4) with the classic quartic dense output.
/// Integrates from t0 to t1 (either direction).
OdeResult integrate_rk45(const OdeRhs& rhs, double t0, const Eigen::VectorXd& y0,
                         double t1, const OdeOptions& options = {});

}  // namespace prwave
