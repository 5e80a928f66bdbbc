#include "splinekit/spline.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "splinekit/errors.hpp"
#include "splinekit/parallel.hpp"

namespace splinekit {

std::uint32_t completion_vote(const GroupFun& f, Point a, std::span<const Point> dirs) {
  const Space& s = f.space();
  const std::uint32_t m = static_cast<std::uint32_t>(dirs.size());
  const std::uint32_t n = f.modulus();
  std::uint32_t acc = 0;
  for (std::uint32_t omega = 1; omega < (1u << m); ++omega) {
    Point v = s.combine(a, omega, dirs);
    if (!f.defined(v)) throw std::invalid_argument("completion vertex outside the function domain");
    // sign (-1)^{|omega|+1}: odd vertex count adds, even subtracts
    acc = (std::popcount(omega) & 1) ? (acc + f.value(v)) % n : (acc + n - f.value(v)) % n;
  }
  return acc;
}

VoteTally correct_at(const GroupFun& f, const SubsetOracle& x, std::uint32_t m, Point a,
                     std::uint64_t votes, std::uint64_t seed) {
  VoteTally t;
  t.anchor = a;
  t.requested = votes;
  SampleStats stats;
  auto draws = sample_completions(a, x, m, votes, seed, &stats, /*allow_partial=*/true);
  if (draws.empty())
    throw SamplingFailure("correct_at: no completions found for anchor " + std::to_string(a) +
                              " (acceptance " + std::to_string(stats.acceptance) + ")",
                          stats.attempts, 0);
  for (const auto& dirs : draws) ++t.tally[completion_vote(f, a, dirs)];
  t.completed = draws.size();
  t.failed_draws = votes - t.completed;
  std::uint64_t top = 0, second = 0;
  std::uint32_t winner = 0;
  std::uint64_t top_multiplicity = 0;
  for (const auto& [value, count] : t.tally) {
    if (count > top) {
      second = top;
      top = count;
      winner = value;
      top_multiplicity = 1;
    } else if (count == top) {
      ++top_multiplicity;
      second = count;
    } else if (count > second) {
      second = count;
    }
  }
  t.tied = top_multiplicity > 1;
  t.has_winner = !t.tied;
  t.winner = winner;
  t.margin = static_cast<double>(top - second) / static_cast<double>(votes);
  return t;
}

namespace {

struct AnchorOutcome {
  bool failed = false;
  bool tied = false;
  std::uint32_t winner = 0;
  double margin = 0.0;
};

SplineReport run_spline(const GroupFun& f, const SubsetOracle& x, std::uint32_t m,
                        std::uint64_t votes, std::uint64_t seed, std::uint64_t budget,
                        unsigned workers, bool extend) {
  for (Point p : x.members())
    if (!f.defined(p)) throw std::invalid_argument("f is undefined somewhere on X");
  if (workers == 0) workers = default_workers();
  const Space& s = f.space();

  SplineReport rep;
  rep.domain = extend ? "V" : "X";
  rep.m = m;
  rep.votes = votes;
  rep.seed = seed;
  rep.input_bad = bad_fraction(f, x, m, 20000, CounterRng::mix(seed, 0xbad, 0), budget);

  std::vector<Point> anchors;
  if (extend) {
    anchors.resize(s.size());
    for (Point a = 0; a < s.size(); ++a) anchors[a] = a;
  } else {
    anchors = x.members();
  }
  rep.anchors_total = anchors.size();

  std::vector<AnchorOutcome> outcomes(anchors.size());
  parallel_for(anchors.size(), workers, [&](std::uint64_t i) {
    try {
      VoteTally t = correct_at(f, x, m, anchors[i], votes, seed);
      outcomes[i].tied = t.tied;
      outcomes[i].winner = t.winner;
      outcomes[i].margin = t.margin;
    } catch (const SamplingFailure&) {
      outcomes[i].failed = true;
    }
  });

  std::vector<std::uint32_t> values = f.values();
  double margin_sum = 0.0;
  std::uint64_t margin_count = 0;
  rep.margin_min = 1.0;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const Point a = anchors[i];
    const AnchorOutcome& o = outcomes[i];
    if (o.failed) {
      ++rep.anchors_failed;
      if (rep.flagged_anchors.size() < 32) rep.flagged_anchors.push_back(a);
      continue;
    }
    if (o.tied) {
      ++rep.anchors_tied;
      if (rep.flagged_anchors.size() < 32) rep.flagged_anchors.push_back(a);
      if (extend && !x.contains(a))
        throw std::runtime_error("plurality tie at anchor " + std::to_string(a) +
                                 " outside X; no fallback value exists");
      continue;  // anchor keeps f's value
    }
    values[a] = o.winner;
    margin_sum += o.margin;
    ++margin_count;
    rep.margin_min = std::min(rep.margin_min, o.margin);
  }
  if (margin_count == 0) rep.margin_min = 0.0;
  rep.margin_mean = margin_count ? margin_sum / static_cast<double>(margin_count) : 0.0;

  if (extend && rep.anchors_failed > 0) {
    std::string detail;
    for (std::size_t k = 0; k < rep.flagged_anchors.size() && k < 8; ++k)
      detail += (k ? "," : "") + std::to_string(rep.flagged_anchors[k]);
    throw SamplingFailure("extension aborted: " + std::to_string(rep.anchors_failed) +
                              " anchors with no sampled completions (first: " + detail +
                              "); the uniformity hypothesis looks broken",
                          0, 0);
  }

  GroupFun h = extend ? GroupFun(s, f.modulus(), std::move(values))
                      : GroupFun(s, f.modulus(), std::move(values), x.mask());

  std::uint64_t differ = 0;
  for (Point p : x.members())
    if (h.value(p) != f.value(p)) ++differ;
  rep.disagreement = static_cast<double>(differ) / static_cast<double>(x.members().size());

  SubsetOracle domain = extend ? SubsetOracle::full(s) : x;
  rep.residual_bad = bad_fraction(h, domain, m, 20000, CounterRng::mix(seed, 0xbad, 1), budget);

  if (extend && rep.input_bad.exhaustive && rep.input_bad.bad == 0)
    rep.exact_extension = rep.disagreement == 0.0 && rep.residual_bad.exhaustive &&
                          rep.residual_bad.bad == 0;

  rep.h = std::move(h);
  return rep;
}

}  // namespace

SplineReport spline_on_x(const GroupFun& f, const SubsetOracle& x, std::uint32_t m,
                         std::uint64_t votes, std::uint64_t seed, std::uint64_t budget,
                         unsigned workers) {
  return run_spline(f, x, m, votes, seed, budget, workers, false);
}

SplineReport extend_to_v(const GroupFun& f, const SubsetOracle& x, std::uint32_t m,
                         std::uint64_t votes, std::uint64_t seed, std::uint64_t budget,
                         unsigned workers) {
  return run_spline(f, x, m, votes, seed, budget, workers, true);
}

BadFractionReport verify_vanishing(const GroupFun& h, std::uint32_t m, std::uint64_t samples,
                                   std::uint64_t seed, std::uint64_t budget) {
  SubsetOracle domain = h.total() ? SubsetOracle::full(h.space())
                                  : SubsetOracle(h.space(), h.mask());
  return bad_fraction(h, domain, m, samples, seed, budget);
}

std::uint32_t default_subspace_dim(const Field& f, std::uint32_t m) {
  const std::uint64_t denom = f.q() - f.q() / f.p();
  return static_cast<std::uint32_t>((m + denom - 1) / denom);
}

namespace {

// v independent from dirs over F_q, by elimination on coordinate vectors
bool independent_direction(const Space& s, std::span<const Point> dirs, Point v) {
  const Field& f = s.field();
  const std::uint32_t n = s.dim();
  std::vector<std::vector<std::uint32_t>> rows;
  for (Point d : dirs) {
    std::vector<std::uint32_t> c(n);
    s.decode(d, c);
    rows.push_back(std::move(c));
  }
  std::vector<std::uint32_t> target(n);
  s.decode(v, target);
  // reduce rows then the target against them
  std::vector<std::int32_t> pivots;
  for (auto& row : rows) {
    for (std::size_t k = 0; k < pivots.size(); ++k) {
      std::uint32_t piv = static_cast<std::uint32_t>(pivots[k]);
      if (row[piv] == 0) continue;
      std::uint32_t c = row[piv];
      for (std::uint32_t i = 0; i < n; ++i) row[i] = f.sub(row[i], f.mul(c, rows[k][i]));
    }
    std::int32_t piv = -1;
    for (std::uint32_t i = 0; i < n; ++i)
      if (row[i] != 0) {
        piv = static_cast<std::int32_t>(i);
        break;
      }
    if (piv < 0) continue;  // dependent row; harmless, the caller keeps dirs independent
    std::uint32_t inv = f.inv(row[static_cast<std::uint32_t>(piv)]);
    for (std::uint32_t i = 0; i < n; ++i) row[i] = f.mul(row[i], inv);
    pivots.push_back(piv);
  }
  for (std::size_t k = 0; k < pivots.size(); ++k) {
    std::uint32_t piv = static_cast<std::uint32_t>(pivots[k]);
    if (target[piv] == 0) continue;
    std::uint32_t c = target[piv];
    for (std::uint32_t i = 0; i < n; ++i) target[i] = f.sub(target[i], f.mul(c, rows[k][i]));
  }
  return std::any_of(target.begin(), target.end(), [](std::uint32_t c) { return c != 0; });
}

// all q^k points of the affine flat u + span(dirs) lie in X
bool flat_inside(const SubsetOracle& x, Point u, std::span<const Point> dirs) {
  const Space& s = x.space();
  const std::uint64_t q = s.field().q();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < dirs.size(); ++i) total *= q;
  for (std::uint64_t t = 0; t < total; ++t) {
    Point p = u;
    std::uint64_t tt = t;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      std::uint32_t c = static_cast<std::uint32_t>(tt % q);
      tt /= q;
      if (c) p = s.add(p, s.smul(c, dirs[i]));
    }
    if (!x.contains(p)) return false;
  }
  return true;
}

// reduced degree of the restriction to the flat, via interpolation on F_q^l
int restricted_degree(const std::vector<std::uint32_t>& values, const Space& ambient,
                      const Space& flat, Point u, std::span<const Point> dirs) {
  const std::uint64_t q = ambient.field().q();
  std::vector<std::uint32_t> table(flat.size());
  for (std::uint64_t t = 0; t < flat.size(); ++t) {
    Point p = u;
    std::uint64_t tt = t;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      std::uint32_t c = static_cast<std::uint32_t>(tt % q);
      tt /= q;
      if (c) p = ambient.add(p, ambient.smul(c, dirs[i]));
    }
    table[t] = values[p];
  }
  return PolyFun::interpolate(flat, table).reduced_degree();
}

}  // namespace

SubspaceTestReport subspace_poly_test(const std::vector<std::uint32_t>& field_values,
                                      const SubsetOracle& x, std::uint32_t m, std::uint32_t l,
                                      std::uint64_t samples, std::uint64_t seed,
                                      std::uint64_t budget) {
  const Space& s = x.space();
  const Field& f = s.field();
  if (l == 0) l = default_subspace_dim(f, m);
  if (field_values.size() != s.size()) throw std::invalid_argument("value table size mismatch");
  for (Point p : x.members())
    if (field_values[p] >= f.q())
      throw std::invalid_argument("table entry is not a field element index");

  SubspaceTestReport rep;
  rep.m = m;
  rep.l = l;
  rep.seed = seed;
  Space flat(s.field_ptr(), l);

  double dir_tuples = std::pow(static_cast<double>(s.size()), static_cast<double>(l));
  double cost = static_cast<double>(x.members().size()) * dir_tuples *
                static_cast<double>(flat.size());
  if (cost <= static_cast<double>(budget)) {
    rep.exhaustive = true;
    std::vector<Point> dirs(l);
    std::uint64_t tuples = static_cast<std::uint64_t>(dir_tuples);
    for (Point u : x.members()) {
      for (std::uint64_t t = 0; t < tuples; ++t) {
        std::uint64_t tt = t;
        for (std::uint32_t i = 0; i < l; ++i) {
          dirs[i] = tt % s.size();
          tt /= s.size();
        }
        bool indep = true;
        for (std::uint32_t i = 0; i < l && indep; ++i)
          indep = independent_direction(s, std::span<const Point>(dirs.data(), i), dirs[i]);
        if (!indep) continue;
        if (!flat_inside(x, u, dirs)) continue;
        ++rep.tested;
        if (restricted_degree(field_values, s, flat, u, dirs) >= static_cast<int>(m))
          ++rep.failures;
      }
    }
    if (rep.tested == 0)
      throw SamplingFailure("no " + std::to_string(l) + "-flat inside X", 0, 0);
    rep.fraction = static_cast<double>(rep.failures) / static_cast<double>(rep.tested);
    return rep;
  }

  // greedy sampled mode: grow flats from random lines inside X
  rep.exhaustive = false;
  CounterRng rng(seed, 0x737562737061ull);
  std::uint32_t deepest = 0;
  const int kDirTries = 200;
  for (std::uint64_t i = 0; i < samples; ++i) {
    Point u = x.members()[rng.below(x.members().size())];
    std::vector<Point> dirs;
    bool ok = true;
    while (dirs.size() < l) {
      bool extended = false;
      for (int t = 0; t < kDirTries && !extended; ++t) {
        Point v = 1 + rng.below(s.size() - 1);
        if (!independent_direction(s, dirs, v)) continue;
        dirs.push_back(v);
        if (flat_inside(x, u, dirs)) {
          extended = true;
        } else {
          dirs.pop_back();
        }
      }
      if (!extended) {
        deepest = std::max(deepest, static_cast<std::uint32_t>(dirs.size()));
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    ++rep.tested;
    if (restricted_degree(field_values, s, flat, u, dirs) >= static_cast<int>(m)) ++rep.failures;
  }
  if (rep.tested == 0)
    throw SamplingFailure("no " + std::to_string(l) +
                              "-flat inside X found; deepest dimension reached " +
                              std::to_string(deepest),
                          samples, 0);
  rep.fraction = static_cast<double>(rep.failures) / static_cast<double>(rep.tested);
  return rep;
}

GroupFun plant_noisy(const PolyFun& g, const SubsetOracle& x, double rho, std::uint64_t seed,
                     std::uint64_t budget) {
  if (rho < 0.0 || rho > 1.0) throw std::invalid_argument("noise rate must lie in [0,1]");
  GroupFun f = GroupFun::from_poly(g, budget).restricted(x.mask());
  const std::uint64_t k =
      static_cast<std::uint64_t>(std::ceil(rho * static_cast<double>(x.members().size())));
  if (k == 0) return f;
  std::vector<Point> pool = x.members();
  CounterRng rng(seed, 0x6e6f697365ull);
  const std::uint32_t n = f.modulus();
  for (std::uint64_t i = 0; i < k && i < pool.size(); ++i) {
    std::uint64_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
    std::uint32_t offset = 1 + static_cast<std::uint32_t>(rng.below(n - 1));
    f.set(pool[i], (f.value(pool[i]) + offset) % n);
  }
  return f;
}

std::vector<NoiseSweepRow> noise_experiment(const PolyFun& g, const SubsetOracle& x,
                                            std::uint32_t m, std::span<const double> rhos,
                                            std::uint64_t votes, std::uint64_t seed, bool extend,
                                            std::uint64_t budget, unsigned workers) {
  if (g.reduced_degree() >= static_cast<int>(m))
    throw std::invalid_argument("planted polynomial must have degree < m");
  GroupFun clean = GroupFun::from_poly(g, budget);
  std::vector<NoiseSweepRow> rows;
  for (std::size_t r = 0; r < rhos.size(); ++r) {
    GroupFun f = plant_noisy(g, x, rhos[r], CounterRng::mix(seed, r, 2));
    SplineReport rep = extend ? extend_to_v(f, x, m, votes, seed, budget, workers)
                              : spline_on_x(f, x, m, votes, seed, budget, workers);
    NoiseSweepRow row;
    row.rho = rhos[r];
    std::uint64_t corrupted = 0;
    for (Point p : x.members())
      if (f.value(p) != clean.value(p)) ++corrupted;
    row.corrupted = corrupted;
    row.input_eps = rep.input_bad.eps_hat;
    row.disagreement_f = rep.disagreement;
    const GroupFun& h = *rep.h;
    std::uint64_t differ_g = 0, domain = 0;
    for (Point p = 0; p < h.space().size(); ++p) {
      if (!h.defined(p)) continue;
      ++domain;
      if (h.value(p) != clean.value(p)) ++differ_g;
    }
    row.disagreement_g = domain ? static_cast<double>(differ_g) / domain : 0.0;
    row.residual = rep.residual_bad.eps_hat;
    row.margin_min = rep.margin_min;
    row.margin_mean = rep.margin_mean;
    row.anchors_tied = rep.anchors_tied;
    row.anchors_failed = rep.anchors_failed;
    row.recovered = differ_g == 0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace splinekit
