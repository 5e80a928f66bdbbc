#include "splinekit/polyfun.hpp"

#include <algorithm>
#include <cctype>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "splinekit/errors.hpp"

namespace splinekit {

namespace {

void require_budget(std::uint64_t cost, std::uint64_t budget, const char* what) {
  if (cost > budget) throw BudgetExceeded(std::string(what) + ": cost exceeds budget");
}

// x^q = x as functions, so exponents live in {0} u [1, q-1]
std::uint32_t reduce_exp(std::uint64_t e, std::uint64_t q) {
  if (e == 0) return 0;
  return static_cast<std::uint32_t>(1 + (e - 1) % (q - 1));
}

}  // namespace

std::uint32_t PolyFun::degree_of_index(std::uint64_t exp_index) const {
  const std::uint64_t q = space_.field().q();
  std::uint32_t d = 0;
  while (exp_index) {
    d += static_cast<std::uint32_t>(exp_index % q);
    exp_index /= q;
  }
  return d;
}

PolyFun PolyFun::monomial(const Space& s, std::span<const std::uint32_t> exps,
                          std::uint32_t coeff) {
  if (exps.size() != s.dim()) throw std::invalid_argument("exponent count mismatch");
  const std::uint64_t q = s.field().q();
  PolyFun p(s);
  std::uint64_t idx = 0, stride = 1;
  for (std::uint32_t i = 0; i < s.dim(); ++i) {
    idx += static_cast<std::uint64_t>(reduce_exp(exps[i], q)) * stride;
    stride *= q;
  }
  p.add_term(idx, coeff);
  return p;
}

void PolyFun::add_term(std::uint64_t exp_index, std::uint32_t coeff) {
  if (exp_index >= space_.size()) throw std::invalid_argument("exponent index out of range");
  coeff %= space_.field().q();
  if (coeff == 0) return;
  auto [it, inserted] = coeffs_.try_emplace(exp_index, coeff);
  if (!inserted) {
    it->second = space_.field().add(it->second, coeff);
    if (it->second == 0) coeffs_.erase(it);
  }
}

std::uint32_t PolyFun::eval(Point x) const {
  const Field& f = space_.field();
  const std::uint64_t q = f.q();
  std::uint32_t acc = 0;
  for (const auto& [e, c] : coeffs_) {
    std::uint32_t term = c;
    std::uint64_t ee = e;
    Point xx = x;
    while (ee) {
      std::uint32_t ei = static_cast<std::uint32_t>(ee % q);
      std::uint32_t xi = static_cast<std::uint32_t>(xx % q);
      if (ei) term = f.mul(term, f.pow(xi, ei));
      if (term == 0) break;
      ee /= q;
      xx /= q;
    }
    acc = f.add(acc, term);
  }
  return acc;
}

std::vector<std::uint32_t> PolyFun::eval_table(std::uint64_t budget) const {
  require_budget(space_.size() * (coeffs_.size() + 1), budget, "eval_table");
  std::vector<std::uint32_t> t(space_.size());
  for (Point x = 0; x < space_.size(); ++x) t[x] = eval(x);
  return t;
}

int PolyFun::reduced_degree() const {
  int d = -1;
  for (const auto& [e, c] : coeffs_) d = std::max(d, static_cast<int>(degree_of_index(e)));
  return d;
}

bool PolyFun::homogeneous() const {
  int d = -1;
  for (const auto& [e, c] : coeffs_) {
    int de = static_cast<int>(degree_of_index(e));
    if (d == -1) d = de;
    if (de != d) return false;
  }
  return true;
}

PolyFun PolyFun::operator+(const PolyFun& o) const {
  if (!space_.same(o.space_)) throw std::invalid_argument("space mismatch");
  PolyFun r = *this;
  for (const auto& [e, c] : o.coeffs_) r.add_term(e, c);
  return r;
}

PolyFun PolyFun::operator-(const PolyFun& o) const {
  if (!space_.same(o.space_)) throw std::invalid_argument("space mismatch");
  PolyFun r = *this;
  const Field& f = space_.field();
  for (const auto& [e, c] : o.coeffs_) r.add_term(e, f.neg(c));
  return r;
}

PolyFun PolyFun::operator*(const PolyFun& o) const {
  if (!space_.same(o.space_)) throw std::invalid_argument("space mismatch");
  const Field& f = space_.field();
  const std::uint64_t q = f.q();
  const std::uint32_t n = space_.dim();
  PolyFun r(space_);
  for (const auto& [ea, ca] : coeffs_)
    for (const auto& [eb, cb] : o.coeffs_) {
      std::uint64_t idx = 0, stride = 1, xa = ea, xb = eb;
      for (std::uint32_t i = 0; i < n; ++i) {
        std::uint64_t e = xa % q + xb % q;
        idx += static_cast<std::uint64_t>(reduce_exp(e, q)) * stride;
        stride *= q;
        xa /= q;
        xb /= q;
      }
      r.add_term(idx, f.mul(ca, cb));
    }
  return r;
}

PolyFun PolyFun::scaled(std::uint32_t c) const {
  PolyFun r(space_);
  const Field& f = space_.field();
  for (const auto& [e, cc] : coeffs_) r.add_term(e, f.mul(cc, c));
  return r;
}

std::string PolyFun::to_string() const {
  if (coeffs_.empty()) return "0";
  const std::uint64_t q = space_.field().q();
  std::string out;
  for (const auto& [e, c] : coeffs_) {
    if (!out.empty()) out += " + ";
    std::string vars;
    std::uint64_t ee = e;
    for (std::uint32_t i = 0; i < space_.dim(); ++i) {
      std::uint32_t ei = static_cast<std::uint32_t>(ee % q);
      ee /= q;
      if (ei == 0) continue;
      if (!vars.empty()) vars += "*";
      vars += "x" + std::to_string(i + 1);
      if (ei > 1) vars += "^" + std::to_string(ei);
    }
    if (vars.empty()) {
      out += std::to_string(c);
    } else if (c == 1) {
      out += vars;
    } else {
      out += std::to_string(c) + "*" + vars;
    }
  }
  return out;
}

PolyFun PolyFun::parse(const Space& s, const std::string& text) {
  const Field& f = s.field();
  const std::uint64_t q = f.q();
  PolyFun p(s);
  std::string t;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
  if (t.empty()) throw std::invalid_argument("empty polynomial");
  std::size_t i = 0;
  bool any = false;
  while (i < t.size()) {
    bool negate = false;
    if (t[i] == '+' || t[i] == '-') {
      negate = t[i] == '-';
      ++i;
    }
    std::size_t j = i;
    while (j < t.size() && t[j] != '+' && t[j] != '-') ++j;
    std::string term = t.substr(i, j - i);
    i = j;
    if (term.empty()) throw std::invalid_argument("empty term in polynomial");
    std::uint32_t coeff = 1;
    std::vector<std::uint32_t> exps(s.dim(), 0);
    std::stringstream ss(term);
    std::string piece;
    while (std::getline(ss, piece, '*')) {
      if (piece.empty()) throw std::invalid_argument("empty factor in term");
      if (piece[0] == 'x' || piece[0] == 'X') {
        auto caret = piece.find('^');
        std::uint64_t var = std::stoull(piece.substr(1, caret - 1));
        std::uint64_t e = 1;
        if (caret != std::string::npos) e = std::stoull(piece.substr(caret + 1));
        if (var < 1 || var > s.dim()) throw std::invalid_argument("variable index out of range");
        exps[var - 1] = reduce_exp(exps[var - 1] + e, q);
      } else {
        std::uint64_t c = std::stoull(piece);
        if (c >= q) throw std::invalid_argument("coefficient must be an element index < q");
        coeff = f.mul(coeff, static_cast<std::uint32_t>(c));
      }
    }
    if (negate) coeff = f.neg(coeff);
    PolyFun mono = monomial(s, exps, coeff);
    p = p + mono;
    any = true;
  }
  if (!any) throw std::invalid_argument("no terms parsed");
  return p;
}

PolyFun PolyFun::interpolate(const Space& s, std::span<const std::uint32_t> table,
                             std::uint64_t budget) {
  if (table.size() != s.size()) throw std::invalid_argument("table must be total on the space");
  const Field& f = s.field();
  const std::uint64_t q = f.q();
  require_budget(s.size() * q * s.dim() + q * q * q, budget, "interpolate");

  // invert the q x q Vandermonde at the nodes 0..q-1 (all field elements)
  std::vector<std::uint32_t> m(q * q), vinv(q * q, 0);
  for (std::uint64_t j = 0; j < q; ++j)
    for (std::uint64_t e = 0; e < q; ++e)
      m[j * q + e] = f.pow(static_cast<std::uint32_t>(j), e);
  for (std::uint64_t i = 0; i < q; ++i) vinv[i * q + i] = 1;
  for (std::uint64_t col = 0; col < q; ++col) {
    std::uint64_t piv = col;
    while (piv < q && m[piv * q + col] == 0) ++piv;
    if (piv == q) throw std::logic_error("singular Vandermonde");
    if (piv != col)
      for (std::uint64_t k = 0; k < q; ++k) {
        std::swap(m[piv * q + k], m[col * q + k]);
        std::swap(vinv[piv * q + k], vinv[col * q + k]);
      }
    std::uint32_t s0 = f.inv(m[col * q + col]);
    for (std::uint64_t k = 0; k < q; ++k) {
      m[col * q + k] = f.mul(m[col * q + k], s0);
      vinv[col * q + k] = f.mul(vinv[col * q + k], s0);
    }
    for (std::uint64_t r = 0; r < q; ++r) {
      if (r == col || m[r * q + col] == 0) continue;
      std::uint32_t c = m[r * q + col];
      for (std::uint64_t k = 0; k < q; ++k) {
        m[r * q + k] = f.sub(m[r * q + k], f.mul(c, m[col * q + k]));
        vinv[r * q + k] = f.sub(vinv[r * q + k], f.mul(c, vinv[col * q + k]));
      }
    }
  }

  std::vector<std::uint32_t> tensor(table.begin(), table.end());
  std::vector<std::uint32_t> line(q), coef(q);
  for (std::uint32_t axis = 0; axis < s.dim(); ++axis) {
    std::uint64_t stride = 1;
    for (std::uint32_t i = 0; i < axis; ++i) stride *= q;
    for (std::uint64_t base = 0; base < s.size(); ++base) {
      if (base / stride % q != 0) continue;
      for (std::uint64_t j = 0; j < q; ++j) line[j] = tensor[base + j * stride];
      for (std::uint64_t e = 0; e < q; ++e) {
        std::uint32_t acc = 0;
        for (std::uint64_t j = 0; j < q; ++j) acc = f.add(acc, f.mul(vinv[e * q + j], line[j]));
        coef[e] = acc;
      }
      for (std::uint64_t e = 0; e < q; ++e) tensor[base + e * stride] = coef[e];
    }
  }
  PolyFun p(s);
  for (std::uint64_t e = 0; e < s.size(); ++e)
    if (tensor[e] != 0) p.add_term(e, tensor[e]);
  return p;
}

PolyFun PolyFun::random(const Space& s, CounterRng& rng, std::uint32_t max_degree) {
  PolyFun p(s);
  const std::uint64_t q = s.field().q();
  for (std::uint64_t e = 0; e < s.size(); ++e) {
    if (p.degree_of_index(e) > max_degree) continue;
    std::uint32_t c = static_cast<std::uint32_t>(rng.below(q));
    if (c) p.add_term(e, c);
  }
  return p;
}

PolyFun PolyFun::random_exact_degree(const Space& s, CounterRng& rng, std::uint32_t degree) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    PolyFun p = random(s, rng, degree);
    if (p.reduced_degree() == static_cast<int>(degree)) return p;
  }
  throw std::invalid_argument("no reduced polynomial of that degree exists at this size");
}

PolyFun PolyFun::random_homogeneous(const Space& s, CounterRng& rng, std::uint32_t degree) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    PolyFun p(s);
    const std::uint64_t q = s.field().q();
    for (std::uint64_t e = 0; e < s.size(); ++e) {
      if (p.degree_of_index(e) != degree) continue;
      std::uint32_t c = static_cast<std::uint32_t>(rng.below(q));
      if (c) p.add_term(e, c);
    }
    if (p.reduced_degree() == static_cast<int>(degree)) return p;
  }
  throw std::invalid_argument("no homogeneous polynomial of that degree exists at this size");
}

GroupFun::GroupFun(Space space, std::uint32_t modulus, std::vector<std::uint32_t> values,
                   std::vector<std::uint8_t> mask)
    : space_(std::move(space)), modulus_(modulus), values_(std::move(values)),
      mask_(std::move(mask)) {
  if (modulus_ < 2) throw std::invalid_argument("group modulus must be >= 2");
  if (values_.size() != space_.size()) throw std::invalid_argument("value table size mismatch");
  if (!mask_.empty() && mask_.size() != space_.size())
    throw std::invalid_argument("mask size mismatch");
  domain_size_ = space_.size();
  if (!mask_.empty()) {
    domain_size_ = 0;
    for (std::uint64_t x = 0; x < mask_.size(); ++x) {
      if (mask_[x])
        ++domain_size_;
      else
        values_[x] = 0;  // canonical: undefined points hold 0
    }
  }
  for (auto& v : values_) v %= modulus_;
}

GroupFun GroupFun::from_poly(const PolyFun& p, std::uint64_t budget) {
  const Field& f = p.space().field();
  if (f.l() != 1)
    throw std::invalid_argument("from_poly needs a prime field (values are residues mod p)");
  return GroupFun(p.space(), f.p(), p.eval_table(budget));
}

GroupFun GroupFun::restricted(const std::vector<std::uint8_t>& mask) const {
  return GroupFun(space_, modulus_, values_, mask);
}

GroupFun GroupFun::additive_derivative(Point h) const {
  if (!total()) throw std::invalid_argument("additive derivative needs a total function");
  std::vector<std::uint32_t> out(values_.size());
  for (Point x = 0; x < space_.size(); ++x) {
    std::uint32_t a = values_[space_.add(x, h)];
    std::uint32_t b = values_[x];
    out[x] = (a + modulus_ - b) % modulus_;
  }
  return GroupFun(space_, modulus_, std::move(out));
}

std::uint32_t multilinear_form(const PolyFun& p, Point x, std::span<const Point> dirs) {
  const Field& f = p.space().field();
  const std::uint32_t d = static_cast<std::uint32_t>(dirs.size());
  std::uint32_t acc = 0;
  for (std::uint32_t omega = 0; omega < (1u << d); ++omega) {
    Point v = p.space().combine(x, omega, dirs);
    std::uint32_t val = p.eval(v);
    bool minus = ((d - std::popcount(omega)) & 1) != 0;
    acc = minus ? f.sub(acc, val) : f.add(acc, val);
  }
  return acc;
}

double bias(const PolyFun& p, std::uint64_t budget) {
  const Field& f = p.space().field();
  auto table = p.eval_table(budget);
  std::vector<std::complex<double>> chi(f.q());
  for (std::uint64_t a = 0; a < f.q(); ++a) chi[a] = f.char_value(static_cast<std::uint32_t>(a));
  std::complex<double> sum{0.0, 0.0};
  for (auto v : table) sum += chi[v];
  return std::abs(sum) / static_cast<double>(table.size());
}

double multilinear_bias(const PolyFun& p, std::uint32_t d, std::uint64_t budget) {
  const Space& s = p.space();
  const Field& f = s.field();
  double cost = 1.0;
  for (std::uint32_t i = 0; i < d; ++i) cost *= static_cast<double>(s.size());
  if (cost * (1u << d) > static_cast<double>(budget))
    throw BudgetExceeded("multilinear_bias: V^d outside budget");
  auto table = p.eval_table(budget);
  std::vector<std::complex<double>> chi(f.q());
  for (std::uint64_t a = 0; a < f.q(); ++a) chi[a] = f.char_value(static_cast<std::uint32_t>(a));

  std::vector<Point> dirs(d, 0);
  std::vector<Point> vertex(1u << d, 0);
  std::complex<double> sum{0.0, 0.0};
  std::uint64_t tuples = static_cast<std::uint64_t>(cost);
  for (std::uint64_t t = 0; t < tuples; ++t) {
    std::uint64_t tt = t;
    for (std::uint32_t i = 0; i < d; ++i) {
      dirs[i] = tt % s.size();
      tt /= s.size();
    }
    for (std::uint32_t omega = 1; omega < (1u << d); ++omega) {
      std::uint32_t low = omega & (~omega + 1);
      std::uint32_t i = static_cast<std::uint32_t>(std::countr_zero(omega));
      vertex[omega] = s.add(vertex[omega ^ low], dirs[i]);
    }
    std::uint32_t acc = 0;
    for (std::uint32_t omega = 0; omega < (1u << d); ++omega) {
      std::uint32_t val = table[vertex[omega]];
      bool minus = ((d - std::popcount(omega)) & 1) != 0;
      acc = minus ? f.sub(acc, val) : f.add(acc, val);
    }
    sum += chi[acc];
  }
  return std::abs(sum) / cost;
}

int bilinear_rank(const PolyFun& p) {
  const Space& s = p.space();
  const Field& f = s.field();
  const std::uint32_t n = s.dim();
  std::vector<std::uint32_t> e(n, 0);
  std::vector<Point> unit(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::fill(e.begin(), e.end(), 0);
    e[i] = 1;
    unit[i] = s.encode(e);
  }
  const std::uint32_t p0 = p.eval(0);
  std::vector<std::uint32_t> mat(n * n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) {
      std::uint32_t v = p.eval(s.add(unit[i], unit[j]));
      v = f.sub(v, p.eval(unit[i]));
      v = f.sub(v, p.eval(unit[j]));
      v = f.add(v, p0);
      mat[i * n + j] = v;
    }
  // Gaussian elimination rank over F_q
  std::uint32_t rank = 0;
  for (std::uint32_t col = 0; col < n && rank < n; ++col) {
    std::uint32_t piv = rank;
    while (piv < n && mat[piv * n + col] == 0) ++piv;
    if (piv == n) continue;
    for (std::uint32_t k = 0; k < n; ++k) std::swap(mat[piv * n + k], mat[rank * n + k]);
    std::uint32_t inv = f.inv(mat[rank * n + col]);
    for (std::uint32_t k = 0; k < n; ++k) mat[rank * n + k] = f.mul(mat[rank * n + k], inv);
    for (std::uint32_t r = 0; r < n; ++r) {
      if (r == rank || mat[r * n + col] == 0) continue;
      std::uint32_t c = mat[r * n + col];
      for (std::uint32_t k = 0; k < n; ++k)
        mat[r * n + k] = f.sub(mat[r * n + k], f.mul(c, mat[rank * n + k]));
    }
    ++rank;
  }
  return static_cast<int>(rank);
}

}  // namespace splinekit
