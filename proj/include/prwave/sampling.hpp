#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "prwave/families.hpp"

namespace prwave {

/// splitmix64; fixed algorithm so seeded runs are reproducible across
/// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

enum class SampleStrategy { Random, Grid };

struct SampleSpec {
  SampleStrategy strategy = SampleStrategy::Random;
  int count = 100;                     // random strategy
  std::array<int, 4> grid{3, 3, 3, 3}; // grid strategy
  Box box;
  std::uint64_t seed = kDefaultSeed;
};

/// Points for the spec; no validity filtering.
std::vector<Point> sample_points(const SampleSpec& spec);

/// Random points satisfying predicate(p) (rejection sampling); throws Error
/// when the acceptance rate collapses.
std::vector<Point> sample_points_where(const SampleSpec& spec,
                                       const std::function<bool(const Point&)>& keep);

/// Random points in the family's validity domain (h > 0 enforced).
std::vector<Point> family_sample_points(const FamilySpec& family, int count,
                                        std::uint64_t seed = kDefaultSeed);

}  // namespace prwave
