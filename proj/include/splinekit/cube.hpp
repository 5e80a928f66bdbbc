#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "splinekit/polyfun.hpp"
#include "splinekit/rng.hpp"
#include "splinekit/space.hpp"

namespace splinekit {

// Parameter tuple (u | v_1..v_m); the vertex multiset is u + omega.v over
// omega in 2^m. Degenerate tuples count as cubes.
struct Cube {
  Point u = 0;
  std::vector<Point> dirs;
};

// Same tuple with the omega = 0 vertex removed.
struct AlmostCube {
  Point u = 0;
  std::vector<Point> dirs;
};

class SubsetOracle {
 public:
  SubsetOracle(Space space, std::vector<std::uint8_t> mask);
  static SubsetOracle full(Space space);

  const Space& space() const { return space_; }
  bool contains(Point x) const { return mask_[x] != 0; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }
  const std::vector<Point>& members() const { return members_; }
  double density() const { return density_; }

 private:
  Space space_;
  std::vector<std::uint8_t> mask_;
  std::vector<Point> members_;
  double density_;
};

// signed vertex sums in Z/N
std::uint32_t alt_sum(const GroupFun& f, const Cube& c);
std::uint32_t alt_sum_prime(const GroupFun& f, const AlmostCube& c);

// Visits every parameter tuple in C_m(X) once; returns the number visited.
// The visitor may be null (pure counting).
std::uint64_t for_each_cube(const SubsetOracle& x, std::uint32_t m, std::uint64_t budget,
                            const std::function<void(Point, std::span<const Point>)>& visit);

std::vector<Cube> enumerate_cubes(const SubsetOracle& x, std::uint32_t m,
                                  std::uint64_t budget = kDefaultBudget);

struct SampleStats {
  std::uint64_t attempts = 0;
  std::uint64_t accepted = 0;
  double acceptance = 0.0;
};

// Rejection sampler over C_m(X): u uniform from the member list, directions
// uniform from V^m, accept iff every vertex lands in X.
std::vector<Cube> sample_cubes(const SubsetOracle& x, std::uint32_t m, std::uint64_t count,
                               std::uint64_t seed, SampleStats* stats = nullptr);

// Completions of the anchor a: directions with (a|v)' in C'_m(X). The anchor
// itself need not lie in X. With allow_partial, budget exhaustion returns
// whatever was gathered instead of throwing.
std::vector<std::vector<Point>> sample_completions(Point a, const SubsetOracle& x,
                                                   std::uint32_t m, std::uint64_t count,
                                                   std::uint64_t seed,
                                                   SampleStats* stats = nullptr,
                                                   bool allow_partial = false);

struct BadFractionReport {
  std::uint64_t samples = 0;
  std::uint64_t bad = 0;
  double eps_hat = 0.0;
  Interval wilson;
  std::uint64_t seed = 0;
  bool exhaustive = false;
};

// Fraction of cubes in C_m(X) with nonzero alternating sum; exhaustive when
// the scan fits the budget, otherwise seeded sampling with a Wilson interval.
BadFractionReport bad_fraction(const GroupFun& f, const SubsetOracle& x, std::uint32_t m,
                               std::uint64_t samples, std::uint64_t seed,
                               std::uint64_t budget = kDefaultBudget);

struct FiberReport {
  std::uint64_t domain = 0;
  std::uint64_t fibers = 0;
  std::uint64_t min_fiber = 0;
  std::uint64_t max_fiber = 0;
  double mean_fiber = 0.0;
  double homogeneity = 0.0;  // max fiber / min nonempty fiber
};

// Exact fiber-size distribution of index -> key over [0, domain_size); indices
// mapped to nullopt are outside the domain.
FiberReport fiber_statistics(
    std::uint64_t domain_size,
    const std::function<std::optional<std::uint64_t>(std::uint64_t)>& to_key);

}  // namespace splinekit
