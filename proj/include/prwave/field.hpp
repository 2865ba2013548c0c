#pragma once

#include <array>
#include <functional>
#include <string>
#include <utility>

#include <Eigen/Core>

#include "prwave/errors.hpp"
#include "prwave/jet.hpp"

namespace prwave {

using Point = Eigen::Vector4d;

using Deps = std::array<bool, 4>;

inline constexpr Deps kDepsAll{true, true, true, true};
inline constexpr Deps kDepsNone{false, false, false, false};

/// An evaluatable real function of the chart coordinates. Evaluation yields
/// the full order-3 jet; a separate value path avoids jet arithmetic where
/// only f(p) is needed. Immutable and re-entrant.
class ScalarField {
 public:
  using JetFn = std::function<Jet3(const Point&)>;
  using ValueFn = std::function<double(const Point&)>;

  ScalarField() = default;
  ScalarField(JetFn jet_fn, ValueFn value_fn, std::string provenance, Deps deps)
      : jet_fn_(std::move(jet_fn)),
        value_fn_(std::move(value_fn)),
        provenance_(std::move(provenance)),
        deps_(deps) {}

  static ScalarField constant(double c) {
    return ScalarField([c](const Point&) { return Jet3::constant(c); },
                       [c](const Point&) { return c; }, std::to_string(c),
                       kDepsNone);
  }

  /// Field from a jet evaluator only; the value path falls back to eval().
  static ScalarField from_jet_fn(JetFn fn, std::string provenance, Deps deps) {
    auto value_fn = [fn](const Point& p) { return fn(p).value(); };
    return ScalarField(std::move(fn), std::move(value_fn), std::move(provenance), deps);
  }

  bool valid() const { return static_cast<bool>(jet_fn_); }

  Jet3 eval(const Point& p) const {
    try {
      return jet_fn_(p);
    } catch (const EvalDomainError& e) {
      if (e.point) throw;
      throw EvalDomainError(std::string(e.what()) + " while evaluating " + provenance_, p);
    }
  }

  double value(const Point& p) const {
    try {
      return value_fn_(p);
    } catch (const EvalDomainError& e) {
      if (e.point) throw;
      throw EvalDomainError(std::string(e.what()) + " while evaluating " + provenance_, p);
    }
  }

  const std::string& provenance() const { return provenance_; }
  const Deps& dependencies() const { return deps_; }

 private:
  JetFn jet_fn_;
  ValueFn value_fn_;
  std::string provenance_;
  Deps deps_{false, false, false, false};
};

/// A function of v alone, evaluated as a univariate Taylor series of order 6.
/// Family constructors consume up to five derivatives of a profile, which is
/// more than a Jet3 carries; hence the dedicated representation.
class Profile {
 public:
  static constexpr int kOrder = 6;
  using Series = Jet1<kOrder>;
  using SeriesFn = std::function<Series(double)>;

  Profile() = default;
  Profile(SeriesFn fn, std::string provenance)
      : fn_(std::move(fn)), provenance_(std::move(provenance)) {}

  static Profile constant(double c) {
    return Profile([c](double) { return Series::constant(c); }, std::to_string(c));
  }

  bool valid() const { return static_cast<bool>(fn_); }

  Series at(double v) const { return fn_(v); }
  double value(double v) const { return fn_(v).value(); }
  double derivative(double v, int k) const { return fn_(v).derivative(k); }

  const std::string& provenance() const { return provenance_; }

  /// View as a 4-variable field depending on v only.
  ScalarField as_field() const;

 private:
  SeriesFn fn_;
  std::string provenance_;
};

/// Embeds a univariate series at v into a 4-variable jet whose only
/// dependence is on the v axis.
Jet3 jet_from_v_series(const Profile::Series& s);

}  // namespace prwave
