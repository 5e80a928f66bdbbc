#include "splinekit/space.hpp"

#include <stdexcept>

namespace splinekit {

namespace {
constexpr std::uint64_t kTableLimit = 2048;  // cache point tables up to 2048^2 entries
}

Space::Space(FieldPtr field, std::uint32_t n) {
  if (!field) throw std::invalid_argument("null field");
  if (n < 1) throw std::invalid_argument("dimension must be >= 1");
  auto impl = std::make_shared<Impl>();
  impl->field = std::move(field);
  impl->n = n;
  const std::uint64_t q = impl->field->q();
  impl->stride.resize(n);
  std::uint64_t s = 1;
  for (std::uint32_t i = 0; i < n; ++i) {
    impl->stride[i] = s;
    if (s > (1ull << 62) / q) throw std::invalid_argument("space too large");
    s *= q;
  }
  impl->size = s;
  if (impl->size <= kTableLimit) {
    const Field& f = *impl->field;
    const std::uint64_t sz = impl->size;
    impl->neg_table.resize(sz);
    for (std::uint64_t x = 0; x < sz; ++x) {
      std::uint64_t r = 0, xx = x;
      for (std::uint32_t i = 0; i < n; ++i) {
        r += static_cast<std::uint64_t>(f.neg(static_cast<std::uint32_t>(xx % q))) * impl->stride[i];
        xx /= q;
      }
      impl->neg_table[x] = static_cast<std::uint32_t>(r);
    }
    impl->add_table.resize(sz * sz);
    for (std::uint64_t x = 0; x < sz; ++x)
      for (std::uint64_t y = 0; y < sz; ++y) {
        std::uint64_t r = 0, xx = x, yy = y;
        for (std::uint32_t i = 0; i < n; ++i) {
          r += static_cast<std::uint64_t>(
                   f.add(static_cast<std::uint32_t>(xx % q), static_cast<std::uint32_t>(yy % q))) *
               impl->stride[i];
          xx /= q;
          yy /= q;
        }
        impl->add_table[x * sz + y] = static_cast<std::uint32_t>(r);
      }
    impl->smul_table.resize(q * sz);
    for (std::uint64_t c = 0; c < q; ++c)
      for (std::uint64_t x = 0; x < sz; ++x) {
        std::uint64_t r = 0, xx = x;
        for (std::uint32_t i = 0; i < n; ++i) {
          r += static_cast<std::uint64_t>(
                   f.mul(static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(xx % q))) *
               impl->stride[i];
          xx /= q;
        }
        impl->smul_table[c * sz + x] = static_cast<std::uint32_t>(r);
      }
  }
  impl_ = std::move(impl);
}

Point Space::encode(std::span<const std::uint32_t> coords) const {
  if (coords.size() != impl_->n) throw std::invalid_argument("coordinate count mismatch");
  Point r = 0;
  for (std::uint32_t i = 0; i < impl_->n; ++i) {
    if (coords[i] >= impl_->field->q()) throw std::invalid_argument("coordinate out of range");
    r += coords[i] * impl_->stride[i];
  }
  return r;
}

void Space::decode(Point x, std::span<std::uint32_t> out) const {
  const std::uint64_t q = impl_->field->q();
  for (std::uint32_t i = 0; i < impl_->n; ++i) {
    out[i] = static_cast<std::uint32_t>(x % q);
    x /= q;
  }
}

Point Space::add_slow(Point x, Point y) const {
  const std::uint64_t q = impl_->field->q();
  const Field& f = *impl_->field;
  Point r = 0;
  for (std::uint32_t i = 0; i < impl_->n; ++i) {
    r += static_cast<std::uint64_t>(
             f.add(static_cast<std::uint32_t>(x % q), static_cast<std::uint32_t>(y % q))) *
         impl_->stride[i];
    x /= q;
    y /= q;
  }
  return r;
}

Point Space::neg_slow(Point x) const {
  const std::uint64_t q = impl_->field->q();
  const Field& f = *impl_->field;
  Point r = 0;
  for (std::uint32_t i = 0; i < impl_->n; ++i) {
    r += static_cast<std::uint64_t>(f.neg(static_cast<std::uint32_t>(x % q))) * impl_->stride[i];
    x /= q;
  }
  return r;
}

Point Space::smul(std::uint32_t c, Point x) const {
  const Impl& im = *impl_;
  if (!im.smul_table.empty()) return im.smul_table[static_cast<std::uint64_t>(c) * im.size + x];
  const std::uint64_t q = im.field->q();
  Point r = 0;
  for (std::uint32_t i = 0; i < im.n; ++i) {
    r += static_cast<std::uint64_t>(im.field->mul(c, static_cast<std::uint32_t>(x % q))) *
         im.stride[i];
    x /= q;
  }
  return r;
}

}  // namespace splinekit
