#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "splinekit/rng.hpp"
#include "splinekit/space.hpp"

namespace splinekit {

constexpr std::uint64_t kDefaultBudget = 1ull << 28;

// Polynomial function V -> F_q in reduced form: every stored exponent is
// <= q-1 and no zero coefficients are kept. The exponent tuple of a monomial
// is packed into a base-q index exactly like a point.
class PolyFun {
 public:
  explicit PolyFun(Space space) : space_(std::move(space)) {}

  const Space& space() const { return space_; }
  const std::map<std::uint64_t, std::uint32_t>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  // total degree of an exponent index; exponents are reduced on insertion
  static PolyFun monomial(const Space& s, std::span<const std::uint32_t> exps,
                          std::uint32_t coeff);
  void add_term(std::uint64_t exp_index, std::uint32_t coeff);

  std::uint32_t eval(Point x) const;
  std::vector<std::uint32_t> eval_table(std::uint64_t budget = kDefaultBudget) const;

  // max total degree of stored monomials; -1 sentinel for the zero polynomial
  int reduced_degree() const;
  bool homogeneous() const;

  PolyFun operator+(const PolyFun& o) const;
  PolyFun operator-(const PolyFun& o) const;
  PolyFun operator*(const PolyFun& o) const;
  PolyFun scaled(std::uint32_t c) const;
  bool operator==(const PolyFun& o) const {
    return space_.same(o.space_) && coeffs_ == o.coeffs_;
  }

  std::string to_string() const;
  static PolyFun parse(const Space& s, const std::string& text);

  // unique reduced polynomial agreeing with a total value table; one round of
  // univariate interpolation per coordinate
  static PolyFun interpolate(const Space& s, std::span<const std::uint32_t> table,
                             std::uint64_t budget = kDefaultBudget);

  // coefficients drawn uniformly over all reduced monomials of total degree
  // <= max_degree (may come out lower, even zero)
  static PolyFun random(const Space& s, CounterRng& rng, std::uint32_t max_degree);
  static PolyFun random_exact_degree(const Space& s, CounterRng& rng, std::uint32_t degree);
  static PolyFun random_homogeneous(const Space& s, CounterRng& rng, std::uint32_t degree);

  std::uint32_t degree_of_index(std::uint64_t exp_index) const;

 private:
  Space space_;
  std::map<std::uint64_t, std::uint32_t> coeffs_;
};

// Function from a masked subset of V into H = Z/N, stored densely.
class GroupFun {
 public:
  GroupFun(Space space, std::uint32_t modulus, std::vector<std::uint32_t> values,
           std::vector<std::uint8_t> mask = {});

  static GroupFun from_poly(const PolyFun& p, std::uint64_t budget = kDefaultBudget);

  const Space& space() const { return space_; }
  std::uint32_t modulus() const { return modulus_; }
  bool total() const { return mask_.empty(); }
  bool defined(Point x) const { return mask_.empty() || mask_[x]; }
  std::uint32_t value(Point x) const { return values_[x]; }
  std::uint64_t domain_size() const { return domain_size_; }
  const std::vector<std::uint32_t>& values() const { return values_; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }

  void set(Point x, std::uint32_t v) { values_[x] = v % modulus_; }
  GroupFun restricted(const std::vector<std::uint8_t>& mask) const;

  // x -> f(x+h) - f(x); requires a total function
  GroupFun additive_derivative(Point h) const;

  bool operator==(const GroupFun& o) const {
    return space_.same(o.space_) && modulus_ == o.modulus_ && mask_ == o.mask_ &&
           values_ == o.values_;
  }

 private:
  Space space_;
  std::uint32_t modulus_;
  std::vector<std::uint32_t> values_;
  std::vector<std::uint8_t> mask_;  // empty means total
  std::uint64_t domain_size_;
};

// d-th difference form (v_1,...,v_d) -> sum_w (-1)^{d-|w|} P(x + w.v); symmetric
// in the directions and independent of x when deg P <= d.
std::uint32_t multilinear_form(const PolyFun& p, Point x, std::span<const Point> dirs);

// |E_x e_q(P(x))|
double bias(const PolyFun& p, std::uint64_t budget = kDefaultBudget);

// |E_{x_1..x_d} e_q((x_1,...,x_d))| with base point 0
double multilinear_bias(const PolyFun& p, std::uint32_t d,
                        std::uint64_t budget = kDefaultBudget);

// rank of the polarized symmetric bilinear form B(x,y) = P(x+y)-P(x)-P(y)+P(0)
int bilinear_rank(const PolyFun& p);

struct RankWitness {
  std::vector<std::pair<PolyFun, PolyFun>> terms;  // P = sum Q_j * R_j
};

struct RankResult {
  int rank = -1;  // -1: undecided within budget
  std::optional<RankWitness> witness;
};

// minimal r with P = sum_{j<=r} Q_j R_j, deg Q_j, deg R_j < d; exhaustive over
// normalized factor pairs. Throws BudgetExceeded outside the search budget.
RankResult rank_exact_small(const PolyFun& p, std::uint32_t d,
                            std::uint64_t budget = kDefaultBudget);

struct RankBounds {
  int lower = 0;
  int upper = -1;  // -1 when no decomposition was found within budget
  std::optional<RankWitness> witness;
};

RankBounds rank_bounds(const PolyFun& p, std::uint32_t d,
                       std::uint64_t budget = kDefaultBudget);

// Definition-style family rank: bucket by degree, minimum over one projective
// representative per nonzero linear combination. Degree-1 members rejected.
int family_rank(const std::vector<PolyFun>& family,
                std::uint64_t budget = kDefaultBudget);

bool verify_rank_witness(const PolyFun& p, const RankWitness& w, std::uint32_t d);

}  // namespace splinekit
