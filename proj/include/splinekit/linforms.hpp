#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "splinekit/cube.hpp"
#include "splinekit/gowers.hpp"

namespace splinekit {

// Exact rational scalar for the span computations; desk-scale systems keep the
// numbers tiny, overflow throws rather than silently wrapping.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1);
  static Rational reduce128(__int128 n, __int128 d);

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool is_zero() const { return num == 0; }
  std::string str() const;
};

// System of integer-coefficient affine forms over variables v1..vr with
// symbolic shift slots w1..ws treated as extra formal variables.
class LinFormSystem {
 public:
  LinFormSystem(std::uint32_t arity, std::uint32_t shifts,
                std::vector<std::vector<std::int64_t>> rows);

  std::uint32_t arity() const { return arity_; }
  std::uint32_t shifts() const { return shifts_; }
  std::uint32_t width() const { return arity_ + shifts_; }
  std::size_t size() const { return rows_.size(); }
  const std::vector<std::int64_t>& row(std::size_t i) const { return rows_[i]; }
  const std::vector<std::vector<std::int64_t>>& rows() const { return rows_; }

  LinFormSystem subsystem(std::span<const std::size_t> indices) const;

  // vertices of (x | v_1..v_m): variables (x, v_1..v_m), one form per omega
  static LinFormSystem cube_system(std::uint32_t m);
  // vertices of (0 | v_1..v_m)' in the direction variables only, or with the
  // base point as a shift slot when with_base_shift is set
  static LinFormSystem almost_cube_system(std::uint32_t m, bool with_base_shift = false);

  // one form per line, e.g. "2*v1 - v3 + w1"
  static LinFormSystem parse(const std::string& text);
  std::string emit() const;

  // pairwise-distinct, nonconstant linear parts; the counting check reports
  // this as a precondition
  bool nondegenerate() const;

 private:
  std::uint32_t arity_;
  std::uint32_t shifts_;
  std::vector<std::vector<std::int64_t>> rows_;
};

enum class SpanField { Rationals, Fp };

struct SpanResult {
  bool in_span = false;
  // affine combination on the linear parts when in_span
  std::vector<Rational> lambda;
  // separating functional c over (coeffs, 1)-augmented vectors otherwise:
  // c . (s_i, 1) = 0 for every set member while c . (target, 1) != 0
  std::vector<Rational> witness;
};

// target = sum lambda_i set_i with sum lambda_i = 1, over Q or F_p.
SpanResult in_affine_span(std::span<const std::int64_t> target,
                          std::span<const std::vector<std::int64_t>> set, SpanField field,
                          std::uint32_t p = 0);

// plain linear span membership (no affine constraint)
bool in_linear_span(std::span<const std::int64_t> target,
                    std::span<const std::vector<std::int64_t>> set, SpanField field,
                    std::uint32_t p = 0);

struct PartitionCertificate {
  std::size_t pivot = 0;
  std::vector<std::vector<std::size_t>> parts;       // disjoint cover of I \ {pivot}
  std::vector<std::vector<Rational>> part_witness;   // separating functional per part
};

struct ComplexityResult {
  int d = -1;
  PartitionCertificate certificate;
};

ComplexityResult cs_complexity_at(const LinFormSystem& sys, std::size_t j,
                                  SpanField field = SpanField::Rationals, std::uint32_t p = 0);
// max over j of cs_complexity_at; per-position results via out parameter
int cs_complexity(const LinFormSystem& sys, SpanField field = SpanField::Rationals,
                  std::uint32_t p = 0, std::vector<ComplexityResult>* per_position = nullptr);

bool verify_certificate(const LinFormSystem& sys, std::size_t j,
                        const PartitionCertificate& cert, SpanField field = SpanField::Rationals,
                        std::uint32_t p = 0);

// exact count of variable tuples with every form value in X; shift slots take
// fixed point values
std::uint64_t pattern_count(const LinFormSystem& sys, const SubsetOracle& x,
                            std::span<const Point> shift_values,
                            std::uint64_t budget = kDefaultBudget);

struct CountingCheckReport {
  bool applicable = false;
  std::string note;
  int complexity = -1;
  double density = 0.0;
  double eta = 0.0;
  std::uint64_t count = 0;
  double normalized = 0.0;  // count / |V|^r
  double expected = 0.0;    // density^{|I|}
  double deviation = 0.0;
  double bound = 0.0;  // |I| * eta
  bool pass = false;
};

// Lemma 3.1(1) instance check: deviation <= |I| * eta once the complexity and
// nondegeneracy preconditions hold; otherwise declared inapplicable.
CountingCheckReport counting_check(const LinFormSystem& sys, const SubsetOracle& x,
                                   std::uint32_t m, std::uint64_t budget = kDefaultBudget,
                                   unsigned workers = 0);

}  // namespace splinekit
