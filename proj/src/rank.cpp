#include <algorithm>
#include <unordered_map>
#include <vector>

#include "splinekit/errors.hpp"
#include "splinekit/polyfun.hpp"

namespace splinekit {

namespace {

// Dense coefficient vector over the monomials of total degree <= 2, used by
// the exact d=2 rank search. Keys are raw byte strings (q <= 256 here).
struct QuadCtx {
  const Space& space;
  const Field& field;
  std::vector<std::uint64_t> basis;      // exponent indices, sorted
  std::vector<std::uint32_t> basis_deg;  // their total degrees
  std::vector<std::int32_t> pos;         // exponent index -> basis position
  std::uint64_t ops = 0;
  std::uint64_t budget;

  QuadCtx(const Space& s, std::uint64_t budget) : space(s), field(s.field()), budget(budget) {
    if (s.size() > (1ull << 22)) throw BudgetExceeded("rank search: monomial space too large");
    if (field.q() > 256) throw BudgetExceeded("rank search: q > 256 not supported");
    PolyFun probe(s);
    pos.assign(s.size(), -1);
    for (std::uint64_t e = 0; e < s.size(); ++e) {
      std::uint32_t d = probe.degree_of_index(e);
      if (d <= 2) {
        pos[e] = static_cast<std::int32_t>(basis.size());
        basis.push_back(e);
        basis_deg.push_back(d);
      }
    }
  }

  void charge(std::uint64_t c) {
    ops += c;
    if (ops > budget) throw BudgetExceeded("rank search: op budget exhausted");
  }

  std::string encode(const PolyFun& p) const {
    std::string v(basis.size(), '\0');
    for (const auto& [e, c] : p.coeffs()) {
      if (pos[e] < 0) throw std::invalid_argument("polynomial has degree > 2 terms");
      v[static_cast<std::size_t>(pos[e])] = static_cast<char>(c);
    }
    return v;
  }

  std::string subtract(const std::string& a, const std::string& b) {
    charge(basis.size());
    std::string r(basis.size(), '\0');
    for (std::size_t i = 0; i < basis.size(); ++i)
      r[i] = static_cast<char>(
          field.sub(static_cast<std::uint8_t>(a[i]), static_cast<std::uint8_t>(b[i])));
    return r;
  }

  static bool is_zero(const std::string& a) {
    return std::all_of(a.begin(), a.end(), [](char c) { return c == 0; });
  }

  bool is_affine(const std::string& a) const {
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (basis_deg[i] == 2 && a[i] != 0) return false;
    return true;
  }

  PolyFun to_poly(const std::string& a) const {
    PolyFun p(space);
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (a[i]) p.add_term(basis[i], static_cast<std::uint8_t>(a[i]));
    return p;
  }
};

PolyFun linear_poly(const Space& s, Point lin, std::uint32_t constant) {
  PolyFun p(s);
  const std::uint64_t q = s.field().q();
  std::uint64_t stride = 1, xx = lin;
  for (std::uint32_t i = 0; i < s.dim(); ++i) {
    std::uint32_t c = static_cast<std::uint32_t>(xx % q);
    if (c) p.add_term(stride, c);
    xx /= q;
    stride *= q;
  }
  if (constant) p.add_term(0, constant);
  return p;
}

PolyFun one_poly(const Space& s) { return linear_poly(s, 0, 1); }

struct ProductSet {
  std::vector<std::string> keys;  // insertion order
  std::vector<std::pair<PolyFun, PolyFun>> factors;
  std::unordered_map<std::string, std::size_t> index;

  void insert(std::string key, PolyFun q, PolyFun r) {
    if (index.contains(key)) return;
    index.emplace(key, keys.size());
    keys.push_back(std::move(key));
    factors.emplace_back(std::move(q), std::move(r));
  }
};

// All products Q*R with Q's linear part a projective representative (lowest
// nonzero coordinate scaled to 1) and R's linear part any nonzero vector,
// constants free. Any product of two affine forms with nonzero linear parts
// equals one of these up to the (Q,R) scaling symmetry; products involving a
// constant factor are affine-valued and handled by the single residual term.
ProductSet build_products(QuadCtx& ctx) {
  const Space& s = ctx.space;
  const Field& f = ctx.field;
  const std::uint64_t q = f.q();
  ProductSet out;
  for (Point lq = 1; lq < s.size(); ++lq) {
    std::uint64_t xx = lq;
    while (xx % q == 0) xx /= q;
    if (xx % q != 1) continue;  // not the projective representative
    for (std::uint32_t cq = 0; cq < q; ++cq) {
      PolyFun qf = linear_poly(s, lq, cq);
      for (Point lr = 1; lr < s.size(); ++lr)
        for (std::uint32_t cr = 0; cr < q; ++cr) {
          ctx.charge(4 * (s.dim() + 1));
          PolyFun rf = linear_poly(s, lr, cr);
          PolyFun prod = qf * rf;
          if (prod.reduced_degree() < 2) continue;  // cancels to affine
          out.insert(ctx.encode(prod), qf, rf);
        }
    }
  }
  return out;
}

// Can vec be written as a sum of <= k terms: products chosen from S with
// nondecreasing indices (>= start), plus at most one trailing (affine)*(1)?
bool decompose(QuadCtx& ctx, const ProductSet& sset, const std::string& vec, int k,
               std::size_t start, std::vector<std::pair<PolyFun, PolyFun>>& out) {
  if (QuadCtx::is_zero(vec)) return true;
  if (k <= 0) return false;
  if (ctx.is_affine(vec)) {
    out.emplace_back(ctx.to_poly(vec), one_poly(ctx.space));
    return true;
  }
  if (auto it = sset.index.find(vec); it != sset.index.end()) {
    out.push_back(sset.factors[it->second]);
    return true;
  }
  if (k == 1) return false;
  for (std::size_t idx = start; idx < sset.keys.size(); ++idx) {
    std::string res = ctx.subtract(vec, sset.keys[idx]);
    if (decompose(ctx, sset, res, k - 1, idx, out)) {
      out.push_back(sset.factors[idx]);
      return true;
    }
  }
  return false;
}

RankWitness monomial_split_witness(const PolyFun& p, std::uint32_t d) {
  const Space& s = p.space();
  const Field& f = s.field();
  const std::uint64_t q = f.q();
  RankWitness w;
  PolyFun residual = p;
  for (const auto& [e, c] : p.coeffs()) {
    if (p.degree_of_index(e) != d) continue;
    // split one unit of the first active variable off the monomial
    std::vector<std::uint32_t> left(s.dim(), 0), right(s.dim(), 0);
    std::uint64_t ee = e;
    bool taken = false;
    for (std::uint32_t i = 0; i < s.dim(); ++i) {
      std::uint32_t ei = static_cast<std::uint32_t>(ee % q);
      ee /= q;
      right[i] = ei;
      if (!taken && ei > 0) {
        left[i] = 1;
        right[i] = ei - 1;
        taken = true;
      }
    }
    PolyFun qf = PolyFun::monomial(s, left, 1);
    PolyFun rf = PolyFun::monomial(s, right, c);
    residual = residual - qf * rf;
    w.terms.emplace_back(std::move(qf), std::move(rf));
  }
  if (!residual.is_zero()) w.terms.emplace_back(residual, one_poly(s));
  return w;
}

}  // namespace

bool verify_rank_witness(const PolyFun& p, const RankWitness& w, std::uint32_t d) {
  PolyFun acc(p.space());
  for (const auto& [q, r] : w.terms) {
    if (q.reduced_degree() >= static_cast<int>(d) || r.reduced_degree() >= static_cast<int>(d))
      return false;
    acc = acc + q * r;
  }
  return acc == p;
}

RankResult rank_exact_small(const PolyFun& p, std::uint32_t d, std::uint64_t budget) {
  if (p.reduced_degree() != static_cast<int>(d))
    throw std::invalid_argument("rank_exact_small: reduced degree must equal d");
  if (d < 2) throw std::invalid_argument("rank is undefined below degree 2");
  if (d != 2) throw BudgetExceeded("exact rank search implemented for d=2 only");
  QuadCtx ctx(p.space(), budget);
  ProductSet sset = build_products(ctx);
  std::string target = ctx.encode(p);
  for (int k = 1; k <= 8; ++k) {
    std::vector<std::pair<PolyFun, PolyFun>> terms;
    if (decompose(ctx, sset, target, k, 0, terms)) {
      RankResult res;
      res.rank = k;
      res.witness = RankWitness{std::move(terms)};
      return res;
    }
  }
  throw BudgetExceeded("rank search: no decomposition with r <= 8");
}

RankBounds rank_bounds(const PolyFun& p, std::uint32_t d, std::uint64_t budget) {
  if (p.reduced_degree() != static_cast<int>(d))
    throw std::invalid_argument("rank_bounds: reduced degree must equal d");
  RankBounds out;
  if (d == 2 && p.space().field().p() % 2 == 1)
    out.lower = (bilinear_rank(p) + 1) / 2;
  if (d == 2) {
    try {
      RankResult exact = rank_exact_small(p, d, budget);
      out.upper = exact.rank;
      out.witness = std::move(exact.witness);
      out.lower = std::max(out.lower, 0);
      return out;
    } catch (const BudgetExceeded&) {
      // fall through to the monomial split
    }
  }
  RankWitness w = monomial_split_witness(p, d);
  out.upper = static_cast<int>(w.terms.size());
  out.witness = std::move(w);
  return out;
}

int family_rank(const std::vector<PolyFun>& family, std::uint64_t budget) {
  if (family.empty()) throw std::invalid_argument("family rank of an empty family");
  const Space& s = family.front().space();
  const Field& f = s.field();
  const std::uint64_t q = f.q();
  std::map<int, std::vector<const PolyFun*>> buckets;
  for (const auto& p : family) {
    if (!p.space().same(s)) throw std::invalid_argument("family members live on different spaces");
    int d = p.reduced_degree();
    if (d < 2) throw std::invalid_argument("family rank requires every member to have degree >= 2");
    buckets[d].push_back(&p);
  }
  int best = -1;
  for (const auto& [deg, bucket] : buckets) {
    const std::size_t c = bucket.size();
    double combos = 1.0;
    for (std::size_t i = 0; i < c; ++i) combos *= static_cast<double>(q);
    if (combos > 1e7) throw BudgetExceeded("family rank: too many linear combinations");
    std::uint64_t total = static_cast<std::uint64_t>(combos);
    for (std::uint64_t lam = 1; lam < total; ++lam) {
      // one representative per projective class: first nonzero coefficient 1
      std::uint64_t xx = lam;
      while (xx % q == 0) xx /= q;
      if (xx % q != 1) continue;
      PolyFun combo(s);
      std::uint64_t ll = lam;
      for (std::size_t i = 0; i < c; ++i) {
        std::uint32_t ci = static_cast<std::uint32_t>(ll % q);
        ll /= q;
        if (ci) combo = combo + bucket[i]->scaled(ci);
      }
      int r;
      if (combo.is_zero()) {
        r = 0;
      } else if (combo.reduced_degree() < deg) {
        r = 1;  // combo * 1 with both factors of degree < deg
      } else if (deg == 2) {
        r = rank_exact_small(combo, 2, budget).rank;
      } else {
        RankBounds rb = rank_bounds(combo, static_cast<std::uint32_t>(deg), budget);
        if (rb.lower != rb.upper)
          throw BudgetExceeded("family rank: degree > 2 bucket not exactly decidable");
        r = rb.upper;
      }
      if (best < 0 || r < best) best = r;
      if (best == 0) return 0;
    }
  }
  return best;
}

}  // namespace splinekit
