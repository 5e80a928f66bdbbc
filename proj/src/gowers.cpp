#include "splinekit/gowers.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "splinekit/errors.hpp"

namespace splinekit {

ComplexFun::ComplexFun(Space space, std::vector<std::complex<double>> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (values_.size() != space_.size()) throw std::invalid_argument("value table size mismatch");
  bound_ = 0.0;
  for (const auto& v : values_) bound_ = std::max(bound_, std::abs(v));
}

ComplexFun ComplexFun::constant(Space space, std::complex<double> c) {
  std::vector<std::complex<double>> v(space.size(), c);
  return ComplexFun(std::move(space), std::move(v));
}

ComplexFun ComplexFun::phase(const PolyFun& p, std::uint64_t budget) {
  const Field& f = p.space().field();
  auto table = p.eval_table(budget);
  std::vector<std::complex<double>> chi(f.q());
  for (std::uint64_t a = 0; a < f.q(); ++a) chi[a] = f.char_value(static_cast<std::uint32_t>(a));
  std::vector<std::complex<double>> v(table.size());
  for (std::uint64_t x = 0; x < table.size(); ++x) v[x] = chi[table[x]];
  return ComplexFun(p.space(), std::move(v));
}

ComplexFun ComplexFun::centered_indicator(const SubsetOracle& x) {
  const double delta = x.density();
  std::vector<std::complex<double>> v(x.space().size());
  for (Point p = 0; p < x.space().size(); ++p)
    v[p] = {(x.contains(p) ? 1.0 : 0.0) - delta, 0.0};
  return ComplexFun(x.space(), std::move(v));
}

ComplexFun ComplexFun::from_groupfun(const GroupFun& f) {
  if (!f.total()) throw std::invalid_argument("phase table needs a total function");
  std::vector<std::complex<double>> v(f.space().size());
  const double step = 2.0 * std::numbers::pi / f.modulus();
  for (Point x = 0; x < f.space().size(); ++x) {
    double a = step * f.value(x);
    v[x] = {std::cos(a), std::sin(a)};
  }
  return ComplexFun(f.space(), std::move(v));
}

ComplexFun ComplexFun::modulated(const ComplexFun& other) const {
  if (!space_.same(other.space_)) throw std::invalid_argument("space mismatch");
  std::vector<std::complex<double>> v(values_.size());
  for (std::uint64_t i = 0; i < values_.size(); ++i) v[i] = values_[i] * other.values_[i];
  return ComplexFun(space_, std::move(v));
}

GowersReport gowers_exact(const ComplexFun& g, std::uint32_t m, std::uint64_t budget,
                          unsigned workers) {
  if (m < 1) throw std::invalid_argument("U_m needs m >= 1");
  if (workers == 0) workers = default_workers();
  const Space& s = g.space();
  const std::uint64_t vsize = s.size();
  double cost = std::pow(static_cast<double>(vsize), static_cast<double>(m)) * (1u << (m - 1));
  if (cost > static_cast<double>(budget)) throw BudgetExceeded("exact Gowers norm outside budget");

  std::uint64_t tuples = 1;
  for (std::uint32_t i = 0; i + 1 < m; ++i) tuples *= vsize;
  const std::uint32_t half = 1u << (m - 1);
  const auto& tab = g.values();

  std::complex<double> total = parallel_sum(tuples, workers, [&](std::uint64_t t) {
    std::vector<Point> offs(half, 0);
    std::uint64_t tt = t;
    std::vector<Point> dirs(m - 1);
    for (std::uint32_t i = 0; i + 1 < m; ++i) {
      dirs[i] = tt % vsize;
      tt /= vsize;
    }
    for (std::uint32_t omega = 1; omega < half; ++omega) {
      std::uint32_t low = omega & (~omega + 1);
      offs[omega] = s.add(offs[omega ^ low], dirs[std::countr_zero(omega)]);
    }
    std::complex<double> inner{0.0, 0.0};
    for (Point x = 0; x < vsize; ++x) {
      std::complex<double> prod = tab[x];
      for (std::uint32_t omega = 1; omega < half; ++omega) {
        const std::complex<double>& v = tab[s.add(x, offs[omega])];
        prod *= (std::popcount(omega) & 1) ? std::conj(v) : v;
      }
      inner += prod;
    }
    inner /= static_cast<double>(vsize);
    return std::complex<double>{std::norm(inner), 0.0};
  });

  GowersReport rep;
  rep.m = m;
  rep.exact = true;
  rep.pre_root = total.real() / static_cast<double>(tuples);
  rep.imag_residue = std::abs(total.imag()) / static_cast<double>(tuples);
  if (rep.pre_root < 0.0) rep.pre_root = 0.0;
  rep.value = std::pow(rep.pre_root, 1.0 / static_cast<double>(1u << m));
  return rep;
}

GowersReport gowers_mc(const ComplexFun& g, std::uint32_t m, std::uint64_t samples,
                       std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("U_m needs m >= 1");
  if (samples == 0) throw std::invalid_argument("need at least one sample");
  const Space& s = g.space();
  const auto& tab = g.values();
  const std::uint32_t full = 1u << m;
  CounterRng rng(seed, 0x676f77657273ull);

  double sum = 0.0, sumsq = 0.0, imag_sum = 0.0;
  std::vector<Point> verts(full, 0);
  std::vector<Point> dirs(m);
  for (std::uint64_t i = 0; i < samples; ++i) {
    Point x = rng.below(s.size());
    for (std::uint32_t k = 0; k < m; ++k) dirs[k] = rng.below(s.size());
    verts[0] = x;
    for (std::uint32_t omega = 1; omega < full; ++omega) {
      std::uint32_t low = omega & (~omega + 1);
      verts[omega] = s.add(verts[omega ^ low], dirs[std::countr_zero(omega)]);
    }
    std::complex<double> prod{1.0, 0.0};
    for (std::uint32_t omega = 0; omega < full; ++omega) {
      const std::complex<double>& v = tab[verts[omega]];
      prod *= (std::popcount(omega) & 1) ? std::conj(v) : v;
    }
    sum += prod.real();
    sumsq += prod.real() * prod.real();
    imag_sum += prod.imag();
  }
  GowersReport rep;
  rep.m = m;
  rep.exact = false;
  rep.samples = samples;
  rep.seed = seed;
  const double mean = sum / static_cast<double>(samples);
  rep.imag_residue = std::abs(imag_sum / static_cast<double>(samples));
  const double var = std::max(0.0, sumsq / static_cast<double>(samples) - mean * mean);
  rep.std_error = std::sqrt(var / static_cast<double>(samples));
  rep.pre_root = std::max(0.0, mean);
  rep.value = std::pow(rep.pre_root, 1.0 / static_cast<double>(full));
  return rep;
}

UniformityReport uniformity(const SubsetOracle& x, std::uint32_t m, std::uint64_t budget,
                            std::uint64_t samples, std::uint64_t seed, unsigned workers) {
  ComplexFun g = ComplexFun::centered_indicator(x);
  UniformityReport rep;
  rep.density = x.density();
  rep.m = m;
  double cost = std::pow(static_cast<double>(x.space().size()), static_cast<double>(m)) *
                (1u << (m - 1));
  if (cost <= static_cast<double>(budget)) {
    rep.gowers = gowers_exact(g, m, budget, workers);
    rep.exact = true;
  } else {
    rep.gowers = gowers_mc(g, m, samples, seed);
    rep.exact = false;
  }
  rep.eta = rep.gowers.value;
  return rep;
}

}  // namespace splinekit
