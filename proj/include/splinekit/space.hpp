#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "splinekit/field.hpp"

namespace splinekit {

using Point = std::uint64_t;  // index in [0, q^n); base-q digits are coordinates

// V = F_q^n. Cheap to copy (shared internals); immutable after construction.
class Space {
 public:
  Space(FieldPtr field, std::uint32_t n);

  const Field& field() const { return *impl_->field; }
  FieldPtr field_ptr() const { return impl_->field; }
  std::uint32_t dim() const { return impl_->n; }
  std::uint64_t size() const { return impl_->size; }

  std::uint32_t coord(Point x, std::uint32_t i) const {
    return static_cast<std::uint32_t>(x / impl_->stride[i] % impl_->field->q());
  }
  Point encode(std::span<const std::uint32_t> coords) const;
  void decode(Point x, std::span<std::uint32_t> out) const;

  Point add(Point x, Point y) const {
    const Impl& im = *impl_;
    if (!im.add_table.empty()) return im.add_table[x * im.size + y];
    return add_slow(x, y);
  }
  Point neg(Point x) const {
    const Impl& im = *impl_;
    if (!im.neg_table.empty()) return im.neg_table[x];
    return neg_slow(x);
  }
  Point sub(Point x, Point y) const { return add(x, neg(y)); }
  // scalar multiple c * x, c a field element index
  Point smul(std::uint32_t c, Point x) const;

  // u + sum over set bits i of omega of dirs[i]
  Point combine(Point u, std::uint32_t omega, std::span<const Point> dirs) const {
    Point r = u;
    for (std::uint32_t i = 0; i < dirs.size(); ++i)
      if (omega >> i & 1) r = add(r, dirs[i]);
    return r;
  }

  bool same(const Space& other) const {
    return impl_->n == other.impl_->n && impl_->field->same(*other.impl_->field);
  }

 private:
  Point add_slow(Point x, Point y) const;
  Point neg_slow(Point x) const;

  struct Impl {
    FieldPtr field;
    std::uint32_t n;
    std::uint64_t size;
    std::vector<std::uint64_t> stride;     // q^i
    std::vector<std::uint32_t> add_table;  // size*size, built for small spaces
    std::vector<std::uint32_t> neg_table;
    std::vector<std::uint32_t> smul_table;  // q*size
  };
  std::shared_ptr<const Impl> impl_;
};

}  // namespace splinekit
