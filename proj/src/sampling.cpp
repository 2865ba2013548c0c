#include "prwave/sampling.hpp"

namespace prwave {

std::vector<Point> sample_points(const SampleSpec& spec) {
  std::vector<Point> points;
  if (spec.strategy == SampleStrategy::Random) {
    Rng rng(spec.seed);
    points.reserve(spec.count);
    for (int i = 0; i < spec.count; ++i) {
      Point p;
      for (int a = 0; a < 4; ++a) p[a] = rng.uniform(spec.box.lo[a], spec.box.hi[a]);
      points.push_back(p);
    }
    return points;
  }
  std::size_t total = 1;
  for (int a = 0; a < 4; ++a) total *= std::max(1, spec.grid[a]);
  points.reserve(total);
  std::array<double, 4> step;
  for (int a = 0; a < 4; ++a)
    step[a] = spec.grid[a] > 1
                  ? (spec.box.hi[a] - spec.box.lo[a]) / (spec.grid[a] - 1)
                  : 0.0;
  for (int iu = 0; iu < std::max(1, spec.grid[0]); ++iu)
    for (int iv = 0; iv < std::max(1, spec.grid[1]); ++iv)
      for (int ix = 0; ix < std::max(1, spec.grid[2]); ++ix)
        for (int iy = 0; iy < std::max(1, spec.grid[3]); ++iy) {
          Point p(spec.box.lo[0] + iu * step[0], spec.box.lo[1] + iv * step[1],
                  spec.box.lo[2] + ix * step[2], spec.box.lo[3] + iy * step[3]);
          // Center degenerate axes rather than pinning them to the low edge.
          for (int a = 0; a < 4; ++a)
            if (spec.grid[a] <= 1) p[a] = 0.5 * (spec.box.lo[a] + spec.box.hi[a]);
          points.push_back(p);
        }
  return points;
}

std::vector<Point> sample_points_where(const SampleSpec& spec,
                                       const std::function<bool(const Point&)>& keep) {
  Rng rng(spec.seed);
  std::vector<Point> points;
  points.reserve(spec.count);
  long attempts = 0;
  const long max_attempts = 1000L * std::max(1, spec.count);
  while (static_cast<int>(points.size()) < spec.count) {
    if (++attempts > max_attempts)
      throw Error("rejection sampling failed: acceptance rate too low in the box");
    Point p;
    for (int a = 0; a < 4; ++a) p[a] = rng.uniform(spec.box.lo[a], spec.box.hi[a]);
    if (keep(p)) points.push_back(p);
  }
  return points;
}

std::vector<Point> family_sample_points(const FamilySpec& family, int count,
                                        std::uint64_t seed) {
  SampleSpec spec;
  spec.strategy = SampleStrategy::Random;
  spec.count = count;
  spec.box = family.domain;
  spec.seed = seed;
  const ScalarField& h = family.density.h;
  return sample_points_where(spec, [&h](const Point& p) {
    try {
      return h.value(p) > 0.0;
    } catch (const EvalDomainError&) {
      return false;
    }
  });
}

}  // namespace prwave
