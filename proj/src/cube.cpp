#include "splinekit/cube.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "splinekit/errors.hpp"

namespace splinekit {

SubsetOracle::SubsetOracle(Space space, std::vector<std::uint8_t> mask)
    : space_(std::move(space)), mask_(std::move(mask)) {
  if (mask_.size() != space_.size()) throw std::invalid_argument("mask size mismatch");
  for (Point x = 0; x < mask_.size(); ++x)
    if (mask_[x]) members_.push_back(x);
  if (members_.empty()) throw std::invalid_argument("empty subset");
  density_ = static_cast<double>(members_.size()) / static_cast<double>(space_.size());
}

SubsetOracle SubsetOracle::full(Space space) {
  std::vector<std::uint8_t> mask(space.size(), 1);
  return SubsetOracle(std::move(space), std::move(mask));
}

namespace {

inline std::uint32_t signed_accumulate(std::uint32_t acc, std::uint32_t v, bool odd,
                                       std::uint32_t n) {
  return odd ? (acc + n - v) % n : (acc + v) % n;
}

}  // namespace

std::uint32_t alt_sum(const GroupFun& f, const Cube& c) {
  const Space& s = f.space();
  const std::uint32_t m = static_cast<std::uint32_t>(c.dirs.size());
  const std::uint32_t n = f.modulus();
  std::uint32_t acc = 0;
  for (std::uint32_t omega = 0; omega < (1u << m); ++omega) {
    Point v = s.combine(c.u, omega, c.dirs);
    if (!f.defined(v)) throw std::invalid_argument("cube vertex outside the function domain");
    acc = signed_accumulate(acc, f.value(v), std::popcount(omega) & 1, n);
  }
  return acc;
}

std::uint32_t alt_sum_prime(const GroupFun& f, const AlmostCube& c) {
  const Space& s = f.space();
  const std::uint32_t m = static_cast<std::uint32_t>(c.dirs.size());
  const std::uint32_t n = f.modulus();
  std::uint32_t acc = 0;
  for (std::uint32_t omega = 1; omega < (1u << m); ++omega) {
    Point v = s.combine(c.u, omega, c.dirs);
    if (!f.defined(v)) throw std::invalid_argument("almost-cube vertex outside the function domain");
    acc = signed_accumulate(acc, f.value(v), std::popcount(omega) & 1, n);
  }
  return acc;
}

std::uint64_t for_each_cube(const SubsetOracle& x, std::uint32_t m, std::uint64_t budget,
                            const std::function<void(Point, std::span<const Point>)>& visit) {
  const Space& s = x.space();
  const std::uint64_t vsize = s.size();
  double cost = static_cast<double>(x.members().size()) * std::pow(static_cast<double>(vsize),
                                                                   static_cast<double>(m)) *
                (1u << m);
  if (cost > static_cast<double>(budget)) throw BudgetExceeded("cube enumeration outside budget");

  std::vector<Point> dirs(m, 0);
  std::uint64_t tuples = 1;
  for (std::uint32_t i = 0; i < m; ++i) tuples *= vsize;
  std::uint64_t found = 0;
  for (Point u : x.members()) {
    for (std::uint64_t t = 0; t < tuples; ++t) {
      std::uint64_t tt = t;
      for (std::uint32_t i = 0; i < m; ++i) {
        dirs[i] = tt % vsize;
        tt /= vsize;
      }
      bool inside = true;
      for (std::uint32_t omega = 1; omega < (1u << m) && inside; ++omega)
        inside = x.contains(s.combine(u, omega, dirs));
      if (!inside) continue;
      ++found;
      if (visit) visit(u, dirs);
    }
  }
  return found;
}

std::vector<Cube> enumerate_cubes(const SubsetOracle& x, std::uint32_t m, std::uint64_t budget) {
  std::vector<Cube> out;
  for_each_cube(x, m, budget, [&](Point u, std::span<const Point> dirs) {
    out.push_back(Cube{u, {dirs.begin(), dirs.end()}});
  });
  return out;
}

namespace {

constexpr std::uint64_t kAttemptsPerDraw = 10000;

template <typename Accept>
std::uint64_t rejection_run(CounterRng& rng, std::uint64_t count, const Accept& accept,
                            SampleStats* stats, const char* what, bool allow_partial = false) {
  std::uint64_t accepted = 0, attempts = 0;
  const std::uint64_t max_attempts = kAttemptsPerDraw * count;
  while (accepted < count) {
    if (attempts >= max_attempts) {
      double rate = attempts ? static_cast<double>(accepted) / attempts : 0.0;
      if (stats) {
        stats->attempts = attempts;
        stats->accepted = accepted;
        stats->acceptance = rate;
      }
      if (allow_partial) return accepted;
      throw SamplingFailure(std::string(what) + ": rejection budget exhausted, acceptance " +
                                std::to_string(rate),
                            attempts, accepted);
    }
    ++attempts;
    if (accept()) ++accepted;
  }
  if (stats) {
    stats->attempts = attempts;
    stats->accepted = accepted;
    stats->acceptance = attempts ? static_cast<double>(accepted) / attempts : 0.0;
  }
  return accepted;
}

}  // namespace

std::vector<Cube> sample_cubes(const SubsetOracle& x, std::uint32_t m, std::uint64_t count,
                               std::uint64_t seed, SampleStats* stats) {
  const Space& s = x.space();
  CounterRng rng(seed, 0x637562657371ull);  // stream tag for cube draws
  std::vector<Cube> out;
  out.reserve(count);
  std::vector<Point> dirs(m);
  rejection_run(
      rng, count,
      [&] {
        Point u = x.members()[rng.below(x.members().size())];
        for (std::uint32_t i = 0; i < m; ++i) dirs[i] = rng.below(s.size());
        for (std::uint32_t omega = 1; omega < (1u << m); ++omega)
          if (!x.contains(s.combine(u, omega, dirs))) return false;
        out.push_back(Cube{u, dirs});
        return true;
      },
      stats, "sample_cubes");
  return out;
}

std::vector<std::vector<Point>> sample_completions(Point a, const SubsetOracle& x,
                                                   std::uint32_t m, std::uint64_t count,
                                                   std::uint64_t seed, SampleStats* stats,
                                                   bool allow_partial) {
  const Space& s = x.space();
  CounterRng rng(seed, CounterRng::mix(0x636f6d706cull, a, 0));
  std::vector<std::vector<Point>> out;
  out.reserve(count);
  std::vector<Point> dirs(m);
  rejection_run(
      rng, count,
      [&] {
        for (std::uint32_t i = 0; i < m; ++i) dirs[i] = rng.below(s.size());
        for (std::uint32_t omega = 1; omega < (1u << m); ++omega)
          if (!x.contains(s.combine(a, omega, dirs))) return false;
        out.push_back(dirs);
        return true;
      },
      stats, "sample_completions", allow_partial);
  return out;
}

BadFractionReport bad_fraction(const GroupFun& f, const SubsetOracle& x, std::uint32_t m,
                               std::uint64_t samples, std::uint64_t seed, std::uint64_t budget) {
  for (Point p : x.members())
    if (!f.defined(p)) throw std::invalid_argument("bad_fraction: f undefined somewhere on X");
  BadFractionReport rep;
  rep.seed = seed;
  const Space& s = f.space();
  const std::uint32_t n = f.modulus();
  double cost = static_cast<double>(x.members().size()) *
                std::pow(static_cast<double>(s.size()), static_cast<double>(m)) * (1u << m);
  if (cost <= static_cast<double>(budget)) {
    rep.exhaustive = true;
    std::uint64_t bad = 0, total = 0;
    for_each_cube(x, m, budget, [&](Point u, std::span<const Point> dirs) {
      std::uint32_t acc = 0;
      for (std::uint32_t omega = 0; omega < (1u << m); ++omega)
        acc = signed_accumulate(acc, f.value(s.combine(u, omega, dirs)),
                                std::popcount(omega) & 1, n);
      ++total;
      if (acc != 0) ++bad;
    });
    rep.samples = total;
    rep.bad = bad;
    rep.eps_hat = total ? static_cast<double>(bad) / total : 0.0;
    rep.wilson = {rep.eps_hat, rep.eps_hat};
    return rep;
  }
  rep.exhaustive = false;
  auto cubes = sample_cubes(x, m, samples, seed);
  std::uint64_t bad = 0;
  for (const auto& c : cubes)
    if (alt_sum(f, c) != 0) ++bad;
  rep.samples = samples;
  rep.bad = bad;
  rep.eps_hat = samples ? static_cast<double>(bad) / samples : 0.0;
  rep.wilson = wilson95(bad, samples);
  return rep;
}

FiberReport fiber_statistics(
    std::uint64_t domain_size,
    const std::function<std::optional<std::uint64_t>(std::uint64_t)>& to_key) {
  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t in_domain = 0;
  for (std::uint64_t i = 0; i < domain_size; ++i) {
    auto key = to_key(i);
    if (!key) continue;
    ++in_domain;
    ++counts[*key];
  }
  FiberReport rep;
  rep.domain = in_domain;
  rep.fibers = counts.size();
  if (counts.empty()) return rep;
  rep.min_fiber = UINT64_MAX;
  for (const auto& [k, c] : counts) {
    rep.min_fiber = std::min(rep.min_fiber, c);
    rep.max_fiber = std::max(rep.max_fiber, c);
  }
  rep.mean_fiber = static_cast<double>(in_domain) / static_cast<double>(counts.size());
  rep.homogeneity = static_cast<double>(rep.max_fiber) / static_cast<double>(rep.min_fiber);
  return rep;
}

}  // namespace splinekit
