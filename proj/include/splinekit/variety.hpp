#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "splinekit/cube.hpp"
#include "splinekit/polyfun.hpp"

namespace splinekit {

// Joint level set {x : P_i(x) = a_i, i = 1..L}.
class VarietySpec {
 public:
  explicit VarietySpec(std::vector<std::pair<PolyFun, std::uint32_t>> equations);

  const Space& space() const { return equations_.front().first.space(); }
  const std::vector<std::pair<PolyFun, std::uint32_t>>& equations() const { return equations_; }
  std::uint32_t codimension() const { return static_cast<std::uint32_t>(equations_.size()); }
  std::vector<std::uint32_t> degree_vector() const;
  std::uint32_t max_degree() const;
  // every equation homogeneous with zero target
  bool homogeneous_zero() const;
  bool satisfied(Point x) const;

 private:
  std::vector<std::pair<PolyFun, std::uint32_t>> equations_;
};

SubsetOracle variety_members(const VarietySpec& spec, std::uint64_t budget = kDefaultBudget);

struct AnchoredCountReport {
  std::uint64_t count = 0;
  std::uint64_t anchors = 0;
  std::uint32_t exponent = 0;  // assembled from the per-equation recipe
  std::string formula;
  double bound = 0.0;  // q^{n - exponent}
  bool pass = false;
};

// |{x : P_i(x + a_j) = a_i for all i, j}| against the construction-derived bound.
AnchoredCountReport solution_count_anchored(const VarietySpec& spec,
                                            std::span<const Point> anchors,
                                            std::uint64_t budget = kDefaultBudget);

struct LineCountReport {
  Point base = 0;
  std::uint64_t directions = 0;  // v != 0 with x + tv in X for every t
  std::uint32_t exponent = 0;    // C(d bar)
  double bound = 0.0;            // q^{n - C}
  bool pass = false;
};

LineCountReport lines_through(const VarietySpec& spec, Point x,
                              std::uint64_t budget = kDefaultBudget);

struct ProjectiveDensityReport {
  std::uint64_t projective_zeros = 0;
  std::uint64_t projective_space = 0;
  double density = 0.0;
  double bound_count = 0.0;  // |P(V)| / (2 q^{D+1})
  std::uint32_t total_degree = 0;
  bool pass = false;
};

ProjectiveDensityReport projective_zero_density(const VarietySpec& spec,
                                                std::uint64_t budget = kDefaultBudget);

struct HighRankInstance {
  std::vector<PolyFun> polys;  // homogeneous, degree d, zero targets
  int certified_rank = 0;      // exact or lower bound (degree 2)
  double bias_proxy = -1.0;    // max multilinear bias over combos (degree 3)
  bool bias_certified = false;
};

VarietySpec to_spec(const HighRankInstance& inst);

// Retries fresh random families until the requested strength is certified:
// exact/family rank for d = 2, multilinear-bias threshold q^{-target} for d = 3.
HighRankInstance random_high_rank_instance(const Space& s, std::uint32_t degree, std::uint32_t l,
                                           int rank_target, std::uint64_t seed,
                                           std::uint64_t budget = kDefaultBudget);

// Variety file: one polynomial per line in the text format, optional "= target".
VarietySpec parse_variety(const Space& s, const std::string& text);
std::string emit_variety(const VarietySpec& spec);

}  // namespace splinekit
