#include "splinekit/linforms.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "splinekit/errors.hpp"

namespace splinekit {

namespace {

std::int64_t narrow(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("rational overflow");
  return static_cast<std::int64_t>(v);
}

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  *this = reduce128(n, d);
}

Rational Rational::reduce128(__int128 n, __int128 d) {
  if (d == 0) throw std::domain_error("division by zero");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  Rational r;
  r.num = narrow(n);
  r.den = narrow(d);
  return r;
}

Rational Rational::operator+(const Rational& o) const {
  return reduce128(static_cast<__int128>(num) * o.den + static_cast<__int128>(o.num) * den,
                   static_cast<__int128>(den) * o.den);
}
Rational Rational::operator-(const Rational& o) const {
  return reduce128(static_cast<__int128>(num) * o.den - static_cast<__int128>(o.num) * den,
                   static_cast<__int128>(den) * o.den);
}
Rational Rational::operator*(const Rational& o) const {
  return reduce128(static_cast<__int128>(num) * o.num, static_cast<__int128>(den) * o.den);
}
Rational Rational::operator/(const Rational& o) const {
  if (o.num == 0) throw std::domain_error("division by zero");
  return reduce128(static_cast<__int128>(num) * o.den, static_cast<__int128>(den) * o.num);
}
std::string Rational::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

LinFormSystem::LinFormSystem(std::uint32_t arity, std::uint32_t shifts,
                             std::vector<std::vector<std::int64_t>> rows)
    : arity_(arity), shifts_(shifts), rows_(std::move(rows)) {
  if (rows_.empty()) throw std::invalid_argument("empty form system");
  for (const auto& r : rows_)
    if (r.size() != static_cast<std::size_t>(arity_) + shifts_)
      throw std::invalid_argument("form width mismatch");
}

LinFormSystem LinFormSystem::subsystem(std::span<const std::size_t> indices) const {
  std::vector<std::vector<std::int64_t>> rows;
  for (auto i : indices) rows.push_back(rows_.at(i));
  return LinFormSystem(arity_, shifts_, std::move(rows));
}

LinFormSystem LinFormSystem::cube_system(std::uint32_t m) {
  std::vector<std::vector<std::int64_t>> rows;
  for (std::uint32_t omega = 0; omega < (1u << m); ++omega) {
    std::vector<std::int64_t> row(m + 1, 0);
    row[0] = 1;
    for (std::uint32_t i = 0; i < m; ++i) row[i + 1] = (omega >> i) & 1;
    rows.push_back(std::move(row));
  }
  return LinFormSystem(m + 1, 0, std::move(rows));
}

LinFormSystem LinFormSystem::almost_cube_system(std::uint32_t m, bool with_base_shift) {
  std::vector<std::vector<std::int64_t>> rows;
  const std::uint32_t width = m + (with_base_shift ? 1 : 0);
  for (std::uint32_t omega = 1; omega < (1u << m); ++omega) {
    std::vector<std::int64_t> row(width, 0);
    for (std::uint32_t i = 0; i < m; ++i) row[i] = (omega >> i) & 1;
    if (with_base_shift) row[m] = 1;
    rows.push_back(std::move(row));
  }
  return LinFormSystem(m, with_base_shift ? 1 : 0, std::move(rows));
}

LinFormSystem LinFormSystem::parse(const std::string& text) {
  std::vector<std::vector<std::pair<char, std::pair<std::uint32_t, std::int64_t>>>> parsed;
  std::uint32_t max_v = 0, max_w = 0;
  std::stringstream ss(text);
  std::string line;
  std::vector<std::vector<std::tuple<char, std::uint32_t, std::int64_t>>> lines;
  while (std::getline(ss, line)) {
    std::string t;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::tuple<char, std::uint32_t, std::int64_t>> terms;
    std::size_t i = 0;
    while (i < t.size()) {
      std::int64_t sign = 1;
      if (t[i] == '+' || t[i] == '-') {
        sign = t[i] == '-' ? -1 : 1;
        ++i;
      }
      std::size_t j = i;
      while (j < t.size() && t[j] != '+' && t[j] != '-') ++j;
      std::string term = t.substr(i, j - i);
      i = j;
      if (term.empty()) throw std::invalid_argument("empty term in form");
      std::int64_t coeff = 1;
      char kind = 0;
      std::uint32_t index = 0;
      std::stringstream ts(term);
      std::string piece;
      while (std::getline(ts, piece, '*')) {
        if (piece.empty()) throw std::invalid_argument("empty factor in form");
        if (piece[0] == 'v' || piece[0] == 'w') {
          if (kind != 0) throw std::invalid_argument("quadratic term in a linear form");
          kind = piece[0];
          index = static_cast<std::uint32_t>(std::stoul(piece.substr(1)));
          if (index == 0) throw std::invalid_argument("variables are 1-based");
        } else {
          coeff *= std::stoll(piece);
        }
      }
      if (kind == 0) throw std::invalid_argument("constant terms are not part of a linear form");
      if (kind == 'v') max_v = std::max(max_v, index);
      if (kind == 'w') max_w = std::max(max_w, index);
      terms.emplace_back(kind, index, sign * coeff);
    }
    lines.push_back(std::move(terms));
  }
  if (lines.empty()) throw std::invalid_argument("no forms parsed");
  std::vector<std::vector<std::int64_t>> rows;
  for (const auto& terms : lines) {
    std::vector<std::int64_t> row(max_v + max_w, 0);
    for (const auto& [kind, index, coeff] : terms) {
      std::size_t pos = kind == 'v' ? index - 1 : max_v + index - 1;
      row[pos] += coeff;
    }
    rows.push_back(std::move(row));
  }
  return LinFormSystem(max_v, max_w, std::move(rows));
}

std::string LinFormSystem::emit() const {
  std::string out;
  for (const auto& row : rows_) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] == 0) continue;
      std::int64_t c = row[i];
      std::string var = i < arity_ ? "v" + std::to_string(i + 1)
                                   : "w" + std::to_string(i - arity_ + 1);
      if (line.empty()) {
        if (c == -1)
          line += "-";
        else if (c != 1)
          line += std::to_string(c) + "*";
      } else {
        line += c < 0 ? " - " : " + ";
        std::int64_t a = std::llabs(c);
        if (a != 1) line += std::to_string(a) + "*";
      }
      line += var;
    }
    if (line.empty()) line = "0*v1";
    out += line + "\n";
  }
  return out;
}

bool LinFormSystem::nondegenerate() const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    bool nonzero = std::any_of(rows_[i].begin(), rows_[i].end(),
                               [](std::int64_t c) { return c != 0; });
    if (!nonzero) return false;
    for (std::size_t j = i + 1; j < rows_.size(); ++j)
      if (rows_[i] == rows_[j]) return false;
  }
  return true;
}

namespace {

// Row reduction over Q or F_p on the system [cols | target | I] to decide
// linear span membership and extract either the combination or a separating
// functional. Vectors may be augmented by the caller for the affine case.
struct SolveOutput {
  bool in_span = false;
  std::vector<Rational> lambda;
  std::vector<Rational> witness;
};

class Scalars {
 public:
  Scalars(SpanField field, std::uint32_t p) : field_(field), p_(p) {
    if (field_ == SpanField::Fp && (p_ < 2)) throw std::invalid_argument("Fp mode needs p >= 2");
  }
  Rational from_int(std::int64_t v) const {
    if (field_ == SpanField::Rationals) return Rational(v);
    std::int64_t m = v % static_cast<std::int64_t>(p_);
    if (m < 0) m += p_;
    return Rational(m);
  }
  Rational add(const Rational& a, const Rational& b) const { return norm(a + b); }
  Rational sub(const Rational& a, const Rational& b) const { return norm(a - b); }
  Rational mul(const Rational& a, const Rational& b) const { return norm(a * b); }
  Rational div(const Rational& a, const Rational& b) const {
    if (field_ == SpanField::Rationals) return a / b;
    // modular inverse via Fermat
    std::int64_t inv = 1, base = b.num % p_, e = p_ - 2;
    while (e) {
      if (e & 1) inv = inv * base % p_;
      base = base * base % p_;
      e >>= 1;
    }
    return norm(a * Rational(inv));
  }

 private:
  Rational norm(const Rational& r) const {
    if (field_ == SpanField::Rationals) return r;
    // in Fp mode every value stays an integer residue
    std::int64_t m = r.num % static_cast<std::int64_t>(p_);
    if (m < 0) m += p_;
    return Rational(m);
  }
  SpanField field_;
  std::uint32_t p_;
};

SolveOutput span_solve(const std::vector<std::vector<Rational>>& cols,
                       const std::vector<Rational>& target, const Scalars& sc) {
  const std::size_t dim = target.size();
  const std::size_t k = cols.size();
  // working matrix: [cols | target | identity]
  const std::size_t width = k + 1 + dim;
  std::vector<std::vector<Rational>> m(dim, std::vector<Rational>(width));
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < k; ++c) m[r][c] = cols[c][r];
    m[r][k] = target[r];
    m[r][k + 1 + r] = Rational(1);
  }
  std::vector<std::int64_t> pivot_of_col(k, -1);
  std::size_t row = 0;
  for (std::size_t col = 0; col < k && row < dim; ++col) {
    std::size_t piv = row;
    while (piv < dim && m[piv][col].is_zero()) ++piv;
    if (piv == dim) continue;
    std::swap(m[piv], m[row]);
    Rational lead = m[row][col];
    for (std::size_t c = 0; c < width; ++c) m[row][c] = sc.div(m[row][c], lead);
    for (std::size_t r = 0; r < dim; ++r) {
      if (r == row || m[r][col].is_zero()) continue;
      Rational f = m[r][col];
      for (std::size_t c = 0; c < width; ++c)
        m[r][c] = sc.sub(m[r][c], sc.mul(f, m[row][c]));
    }
    pivot_of_col[col] = static_cast<std::int64_t>(row);
    ++row;
  }
  // inconsistent row: zero in all col positions, nonzero in target position
  for (std::size_t r = 0; r < dim; ++r) {
    bool zero_cols = true;
    for (std::size_t c = 0; c < k && zero_cols; ++c) zero_cols = m[r][c].is_zero();
    if (zero_cols && !m[r][k].is_zero()) {
      SolveOutput out;
      out.in_span = false;
      out.witness.assign(dim, Rational(0));
      for (std::size_t c = 0; c < dim; ++c) out.witness[c] = m[r][k + 1 + c];
      return out;
    }
  }
  SolveOutput out;
  out.in_span = true;
  out.lambda.assign(k, Rational(0));
  for (std::size_t col = 0; col < k; ++col)
    if (pivot_of_col[col] >= 0)
      out.lambda[col] = m[static_cast<std::size_t>(pivot_of_col[col])][k];
  return out;
}

std::vector<Rational> augmented(const std::vector<std::int64_t>& v, const Scalars& sc) {
  std::vector<Rational> out;
  out.reserve(v.size() + 1);
  for (auto c : v) out.push_back(sc.from_int(c));
  out.push_back(sc.from_int(1));  // affine slot
  return out;
}

}  // namespace

SpanResult in_affine_span(std::span<const std::int64_t> target,
                          std::span<const std::vector<std::int64_t>> set, SpanField field,
                          std::uint32_t p) {
  Scalars sc(field, field == SpanField::Fp ? p : 2);
  for (const auto& s : set)
    if (s.size() != target.size()) throw std::invalid_argument("form arity mismatch");
  std::vector<std::vector<Rational>> cols;
  for (const auto& s : set) cols.push_back(augmented(s, sc));
  std::vector<Rational> t = augmented({target.begin(), target.end()}, sc);
  SolveOutput sol = span_solve(cols, t, sc);
  SpanResult res;
  res.in_span = sol.in_span;
  res.lambda = std::move(sol.lambda);
  res.witness = std::move(sol.witness);
  return res;
}

bool in_linear_span(std::span<const std::int64_t> target,
                    std::span<const std::vector<std::int64_t>> set, SpanField field,
                    std::uint32_t p) {
  Scalars sc(field, field == SpanField::Fp ? p : 2);
  std::vector<std::vector<Rational>> cols;
  for (const auto& s : set) {
    if (s.size() != target.size()) throw std::invalid_argument("form arity mismatch");
    std::vector<Rational> col;
    for (auto c : s) col.push_back(sc.from_int(c));
    cols.push_back(std::move(col));
  }
  std::vector<Rational> t;
  for (auto c : target) t.push_back(sc.from_int(c));
  return span_solve(cols, t, sc).in_span;
}

namespace {

struct PartitionSearch {
  const LinFormSystem& sys;
  std::size_t pivot;
  SpanField field;
  std::uint32_t p;
  std::vector<std::size_t> order;             // processing order of I \ {pivot}
  std::vector<std::vector<std::size_t>> parts;
  int limit = 0;
  bool found = false;

  bool admissible(const std::vector<std::size_t>& part, std::size_t extra) {
    std::vector<std::vector<std::int64_t>> set;
    for (auto i : part) set.push_back(sys.row(i));
    set.push_back(sys.row(extra));
    return !in_affine_span(sys.row(pivot), set, field, p).in_span;
  }

  bool dfs(std::size_t k) {
    if (k == order.size()) return true;
    std::size_t form = order[k];
    for (auto& part : parts) {
      if (admissible(part, form)) {
        part.push_back(form);
        if (dfs(k + 1)) return true;
        part.pop_back();
      }
    }
    if (static_cast<int>(parts.size()) < limit) {
      parts.emplace_back();
      if (admissible({}, form)) {
        parts.back().push_back(form);
        if (dfs(k + 1)) return true;
      }
      parts.pop_back();
    }
    return false;
  }
};

}  // namespace

ComplexityResult cs_complexity_at(const LinFormSystem& sys, std::size_t j, SpanField field,
                                  std::uint32_t p) {
  if (j >= sys.size()) throw std::invalid_argument("form index out of range");
  if (sys.size() > 21) throw BudgetExceeded("cs complexity search limited to 20 forms");
  PartitionSearch ps{sys, j, field, p, {}, {}, 0, false};
  for (std::size_t i = 0; i < sys.size(); ++i)
    if (i != j) ps.order.push_back(i);

  // process a maximal independent-ish prefix first: greedy by linear span rank
  {
    std::vector<std::size_t> greedy;
    std::vector<std::size_t> rest = ps.order;
    std::vector<std::vector<std::int64_t>> basis;
    for (auto it = rest.begin(); it != rest.end();) {
      if (!in_linear_span(sys.row(*it), basis, field, p)) {
        basis.push_back(sys.row(*it));
        greedy.push_back(*it);
        it = rest.erase(it);
      } else {
        ++it;
      }
    }
    greedy.insert(greedy.end(), rest.begin(), rest.end());
    ps.order = std::move(greedy);
  }

  for (int d = 0; d <= static_cast<int>(ps.order.size()); ++d) {
    ps.limit = d;
    ps.parts.clear();
    if (ps.order.empty() || ps.dfs(0)) {
      ComplexityResult res;
      res.d = d;
      res.certificate.pivot = j;
      res.certificate.parts = ps.parts;
      for (const auto& part : ps.parts) {
        std::vector<std::vector<std::int64_t>> set;
        for (auto i : part) set.push_back(sys.row(i));
        auto span = in_affine_span(sys.row(j), set, field, p);
        res.certificate.part_witness.push_back(span.witness);
      }
      return res;
    }
  }
  throw std::logic_error("singleton partition must always succeed");
}

int cs_complexity(const LinFormSystem& sys, SpanField field, std::uint32_t p,
                  std::vector<ComplexityResult>* per_position) {
  int worst = 0;
  if (per_position) per_position->clear();
  for (std::size_t j = 0; j < sys.size(); ++j) {
    ComplexityResult r = cs_complexity_at(sys, j, field, p);
    worst = std::max(worst, r.d);
    if (per_position) per_position->push_back(std::move(r));
  }
  return worst;
}

bool verify_certificate(const LinFormSystem& sys, std::size_t j,
                        const PartitionCertificate& cert, SpanField field, std::uint32_t p) {
  std::vector<bool> seen(sys.size(), false);
  seen[j] = true;
  for (const auto& part : cert.parts)
    for (auto i : part) {
      if (i >= sys.size() || seen[i]) return false;
      seen[i] = true;
    }
  if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) return false;
  for (const auto& part : cert.parts) {
    std::vector<std::vector<std::int64_t>> set;
    for (auto i : part) set.push_back(sys.row(i));
    if (in_affine_span(sys.row(j), set, field, p).in_span) return false;
  }
  return true;
}

std::uint64_t pattern_count(const LinFormSystem& sys, const SubsetOracle& x,
                            std::span<const Point> shift_values, std::uint64_t budget) {
  if (shift_values.size() != sys.shifts())
    throw std::invalid_argument("shift assignment size mismatch");
  const Space& s = x.space();
  const Field& f = s.field();
  const std::uint64_t vsize = s.size();
  const std::uint32_t r = sys.arity();
  double cost = std::pow(static_cast<double>(vsize), static_cast<double>(r)) *
                static_cast<double>(sys.size());
  if (cost > static_cast<double>(budget)) throw BudgetExceeded("pattern count outside budget");

  // per form: fixed shift offset plus (variable, scalar) pairs
  struct FormPlan {
    Point offset = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> terms;  // (var, field scalar)
  };
  std::vector<FormPlan> plans;
  for (const auto& row : sys.rows()) {
    FormPlan plan;
    for (std::uint32_t i = 0; i < r; ++i) {
      std::uint32_t c = f.from_int(row[i]);
      if (c != 0) plan.terms.emplace_back(i, c);
    }
    for (std::uint32_t k = 0; k < sys.shifts(); ++k) {
      std::uint32_t c = f.from_int(row[r + k]);
      if (c != 0) plan.offset = s.add(plan.offset, s.smul(c, shift_values[k]));
    }
    plans.push_back(std::move(plan));
  }

  std::uint64_t tuples = 1;
  for (std::uint32_t i = 0; i < r; ++i) tuples *= vsize;
  std::vector<Point> v(r);
  std::uint64_t count = 0;
  for (std::uint64_t t = 0; t < tuples; ++t) {
    std::uint64_t tt = t;
    for (std::uint32_t i = 0; i < r; ++i) {
      v[i] = tt % vsize;
      tt /= vsize;
    }
    bool all_in = true;
    for (const auto& plan : plans) {
      Point val = plan.offset;
      for (const auto& [var, c] : plan.terms)
        val = s.add(val, c == 1 ? v[var] : s.smul(c, v[var]));
      if (!x.contains(val)) {
        all_in = false;
        break;
      }
    }
    if (all_in) ++count;
  }
  return count;
}

CountingCheckReport counting_check(const LinFormSystem& sys, const SubsetOracle& x,
                                   std::uint32_t m, std::uint64_t budget, unsigned workers) {
  CountingCheckReport rep;
  rep.density = x.density();
  if (sys.shifts() != 0) throw std::invalid_argument("counting check expects a shift-free system");
  if (!sys.nondegenerate()) {
    rep.applicable = false;
    rep.note = "lemma inapplicable: degenerate system (repeated or constant linear part)";
    return rep;
  }
  rep.complexity = cs_complexity(sys);
  if (rep.complexity > static_cast<int>(m)) {
    rep.applicable = false;
    rep.note = "lemma inapplicable: system complexity " + std::to_string(rep.complexity) +
               " exceeds m=" + std::to_string(m);
    return rep;
  }
  rep.applicable = true;
  UniformityReport u = uniformity(x, m, budget, 200000, 0, workers);
  rep.eta = u.eta;
  rep.count = pattern_count(sys, x, {}, budget);
  double tuples = std::pow(static_cast<double>(x.space().size()),
                           static_cast<double>(sys.arity()));
  rep.normalized = static_cast<double>(rep.count) / tuples;
  rep.expected = std::pow(rep.density, static_cast<double>(sys.size()));
  rep.deviation = std::abs(rep.normalized - rep.expected);
  rep.bound = static_cast<double>(sys.size()) * rep.eta;
  rep.pass = rep.deviation <= rep.bound + 1e-9;
  rep.note = "counting check: |count/|V|^r - delta^|I|| <= |I|*eta";
  return rep;
}

}  // namespace splinekit
