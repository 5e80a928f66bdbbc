#include "splinekit/variety.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "splinekit/errors.hpp"

namespace splinekit {

VarietySpec::VarietySpec(std::vector<std::pair<PolyFun, std::uint32_t>> equations)
    : equations_(std::move(equations)) {
  if (equations_.empty()) throw std::invalid_argument("variety needs at least one equation");
  const Space& s = equations_.front().first.space();
  for (const auto& [p, a] : equations_) {
    if (!p.space().same(s)) throw std::invalid_argument("equations live on different spaces");
    if (p.reduced_degree() < 1) throw std::invalid_argument("constant equation in variety spec");
    if (a >= s.field().q()) throw std::invalid_argument("target out of field range");
  }
}

std::vector<std::uint32_t> VarietySpec::degree_vector() const {
  std::vector<std::uint32_t> d;
  for (const auto& [p, a] : equations_) d.push_back(static_cast<std::uint32_t>(p.reduced_degree()));
  return d;
}

std::uint32_t VarietySpec::max_degree() const {
  std::uint32_t d = 0;
  for (const auto& [p, a] : equations_)
    d = std::max(d, static_cast<std::uint32_t>(p.reduced_degree()));
  return d;
}

bool VarietySpec::homogeneous_zero() const {
  for (const auto& [p, a] : equations_)
    if (a != 0 || !p.homogeneous()) return false;
  return true;
}

bool VarietySpec::satisfied(Point x) const {
  for (const auto& [p, a] : equations_)
    if (p.eval(x) != a) return false;
  return true;
}

SubsetOracle variety_members(const VarietySpec& spec, std::uint64_t budget) {
  const Space& s = spec.space();
  std::uint64_t cost = s.size() * spec.codimension();
  if (cost > budget) throw BudgetExceeded("variety enumeration outside budget");
  std::vector<std::uint8_t> mask(s.size(), 0);
  for (Point x = 0; x < s.size(); ++x) mask[x] = spec.satisfied(x) ? 1 : 0;
  return SubsetOracle(s, std::move(mask));
}

AnchoredCountReport solution_count_anchored(const VarietySpec& spec,
                                            std::span<const Point> anchors,
                                            std::uint64_t budget) {
  const Space& s = spec.space();
  if (anchors.empty()) throw std::invalid_argument("need at least one anchor");
  for (Point a : anchors)
    if (!spec.satisfied(a)) throw std::invalid_argument("anchor does not lie on the variety");
  std::uint64_t cost = s.size() * anchors.size() * spec.codimension();
  if (cost > budget) throw BudgetExceeded("anchored solution count outside budget");

  AnchoredCountReport rep;
  rep.anchors = anchors.size();
  for (Point x = 0; x < s.size(); ++x) {
    bool ok = true;
    for (Point a : anchors) {
      Point y = s.add(x, a);
      for (const auto& [p, t] : spec.equations()) {
        if (p.eval(y) != t) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (ok) ++rep.count;
  }

  // Per-equation exponent m d(d+1)/2, plus 1 homogenization slack when the
  // equation is not a homogeneous zero set.
  const std::uint64_t m = anchors.size();
  std::uint32_t exponent = 0;
  std::ostringstream formula;
  formula << "sum_i [m*d_i(d_i+1)/2" << " + slack_i] with m=" << m << ":";
  for (const auto& [p, t] : spec.equations()) {
    std::uint32_t d = static_cast<std::uint32_t>(p.reduced_degree());
    std::uint32_t slack = (t == 0 && p.homogeneous()) ? 0 : 1;
    exponent += static_cast<std::uint32_t>(m) * d * (d + 1) / 2 + slack;
    formula << " (d=" << d << ",slack=" << slack << ")";
  }
  rep.exponent = exponent;
  rep.formula = formula.str();
  rep.bound = std::pow(static_cast<double>(s.field().q()),
                       static_cast<double>(s.dim()) - static_cast<double>(exponent));
  rep.pass = static_cast<double>(rep.count) >= rep.bound;
  return rep;
}

LineCountReport lines_through(const VarietySpec& spec, Point x, std::uint64_t budget) {
  const Space& s = spec.space();
  const Field& f = s.field();
  if (f.q() <= spec.max_degree())
    throw std::invalid_argument("lines_through requires q > max degree");
  if (!spec.satisfied(x)) throw std::invalid_argument("base point not on the variety");
  std::uint64_t cost = s.size() * f.q() * spec.codimension();
  if (cost > budget) throw BudgetExceeded("line scan outside budget");

  LineCountReport rep;
  rep.base = x;
  for (Point v = 1; v < s.size(); ++v) {
    bool line_in = true;
    for (std::uint32_t t = 1; t < f.q() && line_in; ++t) {
      Point y = s.add(x, s.smul(t, v));
      line_in = spec.satisfied(y);
    }
    if (line_in) ++rep.directions;
  }
  std::uint32_t c = 1;
  for (auto d : spec.degree_vector()) c += d * (d + 1) / 2;
  rep.exponent = c;
  rep.bound = std::pow(static_cast<double>(f.q()),
                       static_cast<double>(s.dim()) - static_cast<double>(c));
  rep.pass = static_cast<double>(rep.directions) >= rep.bound;
  return rep;
}

ProjectiveDensityReport projective_zero_density(const VarietySpec& spec, std::uint64_t budget) {
  const Space& s = spec.space();
  const std::uint64_t q = s.field().q();
  if (!spec.homogeneous_zero())
    throw std::invalid_argument("projective density needs homogeneous equations with zero targets");
  std::uint64_t cost = s.size() * spec.codimension();
  if (cost > budget) throw BudgetExceeded("projective zero count outside budget");

  std::uint64_t affine = 0;
  for (Point x = 0; x < s.size(); ++x)
    if (spec.satisfied(x)) ++affine;
  ProjectiveDensityReport rep;
  rep.projective_zeros = (affine - 1) / (q - 1);  // the zero set is a cone
  rep.projective_space = (s.size() - 1) / (q - 1);
  rep.density = static_cast<double>(rep.projective_zeros) / static_cast<double>(rep.projective_space);
  std::uint32_t dtot = 0;
  for (auto d : spec.degree_vector()) dtot += d;
  rep.total_degree = dtot;
  rep.bound_count = static_cast<double>(rep.projective_space) /
                    (2.0 * std::pow(static_cast<double>(q), static_cast<double>(dtot) + 1.0));
  rep.pass = static_cast<double>(rep.projective_zeros) >= rep.bound_count;
  return rep;
}

VarietySpec to_spec(const HighRankInstance& inst) {
  std::vector<std::pair<PolyFun, std::uint32_t>> eqs;
  for (const auto& p : inst.polys) eqs.emplace_back(p, 0);
  return VarietySpec(std::move(eqs));
}

HighRankInstance random_high_rank_instance(const Space& s, std::uint32_t degree, std::uint32_t l,
                                           int rank_target, std::uint64_t seed,
                                           std::uint64_t budget) {
  if (l < 1) throw std::invalid_argument("codimension must be >= 1");
  if (degree == 2) {
    int max_rank = static_cast<int>((s.dim() + 1) / 2);
    if (rank_target > max_rank)
      throw std::invalid_argument("rank target unreachable: degree-2 rank is at most ceil(n/2)");
  } else if (degree != 3) {
    throw std::invalid_argument("instance generator supports degree 2 (exact) or 3 (bias proxy)");
  }
  const Field& f = s.field();
  CounterRng rng(seed, 0x686972616e6bull);
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<PolyFun> polys;
    for (std::uint32_t i = 0; i < l; ++i)
      polys.push_back(PolyFun::random_homogeneous(s, rng, degree));
    HighRankInstance inst;
    inst.polys = polys;
    if (degree == 2) {
      int cert = -1;
      try {
        cert = family_rank(polys, budget);
      } catch (const BudgetExceeded&) {
        if (f.p() % 2 == 1) {
          // bilinear lower bound over one representative per projective combo
          const std::uint64_t q = f.q();
          std::uint64_t total = 1;
          for (std::uint32_t i = 0; i < l; ++i) total *= q;
          cert = INT32_MAX;
          for (std::uint64_t lam = 1; lam < total; ++lam) {
            std::uint64_t xx = lam;
            while (xx % q == 0) xx /= q;
            if (xx % q != 1) continue;
            PolyFun combo(s);
            std::uint64_t ll = lam;
            for (std::uint32_t i = 0; i < l; ++i) {
              std::uint32_t ci = static_cast<std::uint32_t>(ll % q);
              ll /= q;
              if (ci) combo = combo + polys[i].scaled(ci);
            }
            int lower = combo.is_zero() ? 0 : (bilinear_rank(combo) + 1) / 2;
            cert = std::min(cert, lower);
          }
        } else {
          continue;
        }
      }
      if (cert >= rank_target) {
        inst.certified_rank = cert;
        return inst;
      }
    } else {
      const std::uint64_t q = f.q();
      std::uint64_t total = 1;
      for (std::uint32_t i = 0; i < l; ++i) total *= q;
      double worst = 0.0;
      bool ok = true;
      for (std::uint64_t lam = 1; lam < total && ok; ++lam) {
        std::uint64_t xx = lam;
        while (xx % q == 0) xx /= q;
        if (xx % q != 1) continue;
        PolyFun combo(s);
        std::uint64_t ll = lam;
        for (std::uint32_t i = 0; i < l; ++i) {
          std::uint32_t ci = static_cast<std::uint32_t>(ll % q);
          ll /= q;
          if (ci) combo = combo + polys[i].scaled(ci);
        }
        if (combo.is_zero() || combo.reduced_degree() < 3) {
          ok = false;
          break;
        }
        worst = std::max(worst, multilinear_bias(combo, 3, budget));
      }
      double threshold = std::pow(static_cast<double>(q), -static_cast<double>(rank_target));
      if (ok && worst <= threshold) {
        inst.bias_proxy = worst;
        inst.bias_certified = true;
        inst.certified_rank = rank_target;
        return inst;
      }
    }
  }
  throw std::runtime_error("no qualifying instance found after 200 attempts");
}

VarietySpec parse_variety(const Space& s, const std::string& text) {
  std::vector<std::pair<PolyFun, std::uint32_t>> eqs;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::string trimmed;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
    if (trimmed.empty() || trimmed[0] == '#') continue;
    std::uint32_t target = 0;
    auto eq = trimmed.find('=');
    std::string poly_text = trimmed;
    if (eq != std::string::npos) {
      poly_text = trimmed.substr(0, eq);
      target = static_cast<std::uint32_t>(std::stoul(trimmed.substr(eq + 1)));
    }
    eqs.emplace_back(PolyFun::parse(s, poly_text), target);
  }
  return VarietySpec(std::move(eqs));
}

std::string emit_variety(const VarietySpec& spec) {
  std::string out;
  for (const auto& [p, a] : spec.equations()) {
    out += p.to_string();
    if (a != 0) out += " = " + std::to_string(a);
    out += "\n";
  }
  return out;
}

}  // namespace splinekit
