#include "prwave/field.hpp"

namespace prwave {

Jet3 jet_from_v_series(const Profile::Series& s) {
  Jet3 j;
  for (int k = 0; k <= Jet3::kOrder; ++k) {
    MultiIndex alpha;
    alpha.e[kAxisV] = static_cast<std::uint8_t>(k);
    j[jet_index_of(alpha)] = s[k];
  }
  return j;
}

ScalarField Profile::as_field() const {
  auto fn = fn_;
  auto jet_fn = [fn](const Point& p) { return jet_from_v_series(fn(p[kAxisV])); };
  auto value_fn = [fn](const Point& p) { return fn(p[kAxisV]).value(); };
  return ScalarField(std::move(jet_fn), std::move(value_fn), provenance_,
                     Deps{false, true, false, false});
}

}  // namespace prwave
