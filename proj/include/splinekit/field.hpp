#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace splinekit {

// F_q = F_{p^l} with an explicit irreducible modulus for l > 1. Elements are
// indices in [0, q): the base-p digits of an index are the coefficients of the
// residue-class representative, least significant digit = constant term.
class Field {
 public:
  // Prime field when l == 1 (modulus must be empty). For l > 1 the modulus is
  // the degree-l coefficient list, low to high; it is normalized to monic and
  // rejected if reducible over F_p.
  static std::shared_ptr<const Field> make(std::uint32_t p, std::uint32_t l = 1,
                                           std::vector<std::uint32_t> modulus = {});

  // "3", "2^3/1011" (modulus digits high to low), or "2^3/1,1,0,1" (low to high).
  static std::shared_ptr<const Field> parse(const std::string& spec);
  std::string spec_string() const;

  std::uint32_t p() const { return p_; }
  std::uint32_t l() const { return l_; }
  std::uint64_t q() const { return q_; }
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }
  std::uint32_t neg(std::uint32_t a) const;
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;

  // Integer scalars act through the prime subfield.
  std::uint32_t from_int(std::int64_t v) const;

  // tr(a) = sum of a^{p^i}, i < l; lands in F_p, returned as a value in [0, p).
  std::uint32_t trace(std::uint32_t a) const;

  // e_q(a) = exp(2 pi i tr(a) / p), the nontrivial additive character.
  std::complex<double> char_value(std::uint32_t a) const;

  bool same(const Field& other) const {
    return p_ == other.p_ && l_ == other.l_ && modulus_ == other.modulus_;
  }

 private:
  Field() = default;
  void build_tables();
  std::uint32_t mul_schoolbook(std::uint32_t a, std::uint32_t b) const;

  std::uint32_t p_ = 0;
  std::uint32_t l_ = 1;
  std::uint64_t q_ = 0;
  std::vector<std::uint32_t> modulus_;  // empty for prime fields
  std::vector<std::uint32_t> exp_;      // generator powers, size q-1
  std::vector<std::uint32_t> log_;      // inverse of exp_, log_[0] unused
  std::vector<std::uint32_t> add_;      // q*q table when q <= 256
};

using FieldPtr = std::shared_ptr<const Field>;

}  // namespace splinekit
