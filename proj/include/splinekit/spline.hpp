#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "splinekit/cube.hpp"
#include "splinekit/variety.hpp"

namespace splinekit {

// The value a full cube through the anchor forces for f(anchor): the signed
// sum over the nonzero vertices with the sign flipped so that cubes with
// vanishing alternating sum vote for f(anchor) itself.
std::uint32_t completion_vote(const GroupFun& f, Point a, std::span<const Point> dirs);

struct VoteTally {
  Point anchor = 0;
  std::uint64_t requested = 0;  // T
  std::uint64_t completed = 0;
  std::uint64_t failed_draws = 0;
  std::map<std::uint32_t, std::uint64_t> tally;
  bool has_winner = false;
  bool tied = false;
  std::uint32_t winner = 0;
  double margin = 0.0;  // (top - second) / T
};

// Plurality over T sampled completions of the anchor; deterministic given the
// seed (the draw stream is keyed by the anchor).
VoteTally correct_at(const GroupFun& f, const SubsetOracle& x, std::uint32_t m, Point a,
                     std::uint64_t votes, std::uint64_t seed);

struct SplineReport {
  std::string domain;  // "X" or "V"
  std::uint32_t m = 0;
  std::uint64_t votes = 0;
  std::uint64_t seed = 0;
  std::string vote_convention = "plurality of negated almost-cube sums (good cubes vote f(a))";
  std::optional<GroupFun> h;
  BadFractionReport input_bad;     // of f on C_m(X)
  BadFractionReport residual_bad;  // of h on C_m(domain)
  double disagreement = 0.0;       // |{x in X : h(x) != f(x)}| / |X|
  std::uint64_t anchors_total = 0;
  std::uint64_t anchors_tied = 0;
  std::uint64_t anchors_failed = 0;
  std::vector<Point> flagged_anchors;  // capped at 32 entries
  double margin_min = 0.0;
  double margin_mean = 0.0;
  bool exact_extension = false;  // set when eps = 0 inputs extend exactly
};

SplineReport spline_on_x(const GroupFun& f, const SubsetOracle& x, std::uint32_t m,
                         std::uint64_t votes, std::uint64_t seed,
                         std::uint64_t budget = kDefaultBudget, unsigned workers = 0);

SplineReport extend_to_v(const GroupFun& f, const SubsetOracle& x, std::uint32_t m,
                         std::uint64_t votes, std::uint64_t seed,
                         std::uint64_t budget = kDefaultBudget, unsigned workers = 0);

// Residual bad-cube fraction of h on its own domain (mask or all of V).
BadFractionReport verify_vanishing(const GroupFun& h, std::uint32_t m,
                                   std::uint64_t samples = 20000, std::uint64_t seed = 0,
                                   std::uint64_t budget = kDefaultBudget);

struct SubspaceTestReport {
  std::uint32_t m = 0;
  std::uint32_t l = 0;
  bool exhaustive = false;
  std::uint64_t tested = 0;
  std::uint64_t failures = 0;  // flats where the restriction has degree >= m
  double fraction = 0.0;
  std::uint64_t seed = 0;
};

// l = ceil(m / (q - q/p)) when l == 0 is passed.
std::uint32_t default_subspace_dim(const Field& f, std::uint32_t m);

// Fraction of l-dimensional affine flats inside X on which the restriction of
// the field-valued table has reduced degree >= m. Exhaustive scan over flat
// parametrizations when affordable, otherwise greedy seeded sampling from
// lines inside X.
SubspaceTestReport subspace_poly_test(const std::vector<std::uint32_t>& field_values,
                                      const SubsetOracle& x, std::uint32_t m, std::uint32_t l,
                                      std::uint64_t samples, std::uint64_t seed,
                                      std::uint64_t budget = kDefaultBudget);

// f = g|X with ceil(rho |X|) seeded corruptions in Z/N.
GroupFun plant_noisy(const PolyFun& g, const SubsetOracle& x, double rho, std::uint64_t seed,
                     std::uint64_t budget = kDefaultBudget);

struct NoiseSweepRow {
  double rho = 0.0;
  std::uint64_t corrupted = 0;
  double input_eps = 0.0;
  double disagreement_f = 0.0;  // h vs the corrupted input on X
  double disagreement_g = 0.0;  // h vs the planted polynomial on its domain
  double residual = 0.0;
  double margin_min = 0.0;
  double margin_mean = 0.0;
  std::uint64_t anchors_tied = 0;
  std::uint64_t anchors_failed = 0;
  bool recovered = false;  // h equals the planted polynomial everywhere tested
};

std::vector<NoiseSweepRow> noise_experiment(const PolyFun& g, const SubsetOracle& x,
                                            std::uint32_t m, std::span<const double> rhos,
                                            std::uint64_t votes, std::uint64_t seed, bool extend,
                                            std::uint64_t budget = kDefaultBudget,
                                            unsigned workers = 0);

}  // namespace splinekit
