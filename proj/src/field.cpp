#include "splinekit/field.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace splinekit {

namespace {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

using Poly = std::vector<std::uint32_t>;  // coefficients over F_p, low to high

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint32_t mod_inv(std::uint32_t a, std::uint32_t p) {
  std::uint32_t r = 1;
  std::uint32_t e = p - 2;  // Fermat
  std::uint64_t base = a % p;
  while (e) {
    if (e & 1) r = static_cast<std::uint32_t>(r * base % p);
    base = base * base % p;
    e >>= 1;
  }
  return r;
}

// a mod b over F_p, b monic after scaling
Poly poly_mod(Poly a, const Poly& b, std::uint32_t p) {
  trim(a);
  while (a.size() >= b.size()) {
    std::uint32_t c = a.back();
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) {
      std::uint64_t t = static_cast<std::uint64_t>(c) * b[i] % p;
      a[i + shift] = static_cast<std::uint32_t>((a[i + shift] + p - t) % p);
    }
    trim(a);
  }
  return a;
}

bool is_irreducible(const Poly& m, std::uint32_t p) {
  // trial division by every monic polynomial of degree 1..deg/2
  const std::size_t deg = m.size() - 1;
  for (std::size_t d = 1; 2 * d <= deg; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t lower = 0; lower < count; ++lower) {
      Poly div(d + 1, 0);
      std::uint64_t t = lower;
      for (std::size_t i = 0; i < d; ++i) {
        div[i] = static_cast<std::uint32_t>(t % p);
        t /= p;
      }
      div[d] = 1;
      if (poly_mod(m, div, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace

std::shared_ptr<const Field> Field::make(std::uint32_t p, std::uint32_t l,
                                         std::vector<std::uint32_t> modulus) {
  if (!is_prime(p)) throw std::invalid_argument("field characteristic must be prime");
  if (l < 1) throw std::invalid_argument("extension degree must be >= 1");
  auto f = std::shared_ptr<Field>(new Field());
  f->p_ = p;
  f->l_ = l;
  f->q_ = 1;
  for (std::uint32_t i = 0; i < l; ++i) {
    f->q_ *= p;
    if (f->q_ > (1ull << 32)) throw std::invalid_argument("field too large (q > 2^32)");
  }
  if (l == 1) {
    if (!modulus.empty()) throw std::invalid_argument("prime field takes no modulus");
  } else {
    if (modulus.empty()) throw std::invalid_argument("extension field requires a modulus");
    for (auto& c : modulus) c %= p;
    trim(modulus);
    if (modulus.size() != static_cast<std::size_t>(l) + 1)
      throw std::invalid_argument("modulus degree must equal the extension degree");
    if (modulus.back() != 1) {  // normalize to monic
      std::uint32_t s = mod_inv(modulus.back(), p);
      for (auto& c : modulus) c = static_cast<std::uint32_t>(static_cast<std::uint64_t>(c) * s % p);
    }
    if (!is_irreducible(modulus, p)) throw std::invalid_argument("reducible modulus");
    f->modulus_ = std::move(modulus);
  }
  f->build_tables();
  return f;
}

std::uint32_t Field::add(std::uint32_t a, std::uint32_t b) const {
  if (!add_.empty()) return add_[a * q_ + b];
  std::uint32_t r = 0, mult = 1;
  for (std::uint32_t i = 0; i < l_; ++i) {
    std::uint32_t da = a % p_, db = b % p_;
    a /= p_;
    b /= p_;
    r += ((da + db) % p_) * mult;
    mult *= p_;
  }
  return r;
}

std::uint32_t Field::neg(std::uint32_t a) const {
  std::uint32_t r = 0, mult = 1;
  for (std::uint32_t i = 0; i < l_; ++i) {
    std::uint32_t d = a % p_;
    a /= p_;
    r += (d == 0 ? 0 : p_ - d) * mult;
    mult *= p_;
  }
  return r;
}

std::uint32_t Field::mul_schoolbook(std::uint32_t a, std::uint32_t b) const {
  if (l_ == 1) return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p_);
  Poly pa, pb;
  for (std::uint32_t x = a; x; x /= p_) pa.push_back(x % p_);
  for (std::uint32_t x = b; x; x /= p_) pb.push_back(x % p_);
  if (pa.empty() || pb.empty()) return 0;
  Poly prod(pa.size() + pb.size() - 1, 0);
  for (std::size_t i = 0; i < pa.size(); ++i)
    for (std::size_t j = 0; j < pb.size(); ++j)
      prod[i + j] = static_cast<std::uint32_t>(
          (prod[i + j] + static_cast<std::uint64_t>(pa[i]) * pb[j]) % p_);
  Poly red = poly_mod(std::move(prod), modulus_, p_);
  std::uint32_t r = 0, mult = 1;
  for (std::size_t i = 0; i < red.size(); ++i) {
    r += red[i] * mult;
    mult *= p_;
  }
  return r;
}

std::uint32_t Field::mul(std::uint32_t a, std::uint32_t b) const {
  if (a == 0 || b == 0) return 0;
  if (!exp_.empty()) {
    std::uint64_t s = log_[a] + log_[b];
    if (s >= q_ - 1) s -= q_ - 1;
    return exp_[s];
  }
  return mul_schoolbook(a, b);
}

std::uint32_t Field::inv(std::uint32_t a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  if (!exp_.empty()) {
    std::uint64_t e = (q_ - 1 - log_[a]) % (q_ - 1);
    return exp_[e];
  }
  return pow(a, q_ - 2);
}

std::uint32_t Field::pow(std::uint32_t a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  if (!exp_.empty()) return exp_[static_cast<std::uint64_t>(log_[a]) * (e % (q_ - 1)) % (q_ - 1)];
  std::uint32_t r = 1;
  while (e) {
    if (e & 1) r = mul_schoolbook(r, a);
    a = mul_schoolbook(a, a);
    e >>= 1;
  }
  return r;
}

std::uint32_t Field::from_int(std::int64_t v) const {
  std::int64_t m = v % static_cast<std::int64_t>(p_);
  if (m < 0) m += p_;
  return static_cast<std::uint32_t>(m);
}

std::uint32_t Field::trace(std::uint32_t a) const {
  std::uint32_t acc = a, frob = a;
  for (std::uint32_t i = 1; i < l_; ++i) {
    frob = pow(frob, p_);
    acc = add(acc, frob);
  }
  // the trace lies in the prime subfield, i.e. only the constant digit is set
  return acc % p_;
}

std::complex<double> Field::char_value(std::uint32_t a) const {
  const double angle = 2.0 * std::numbers::pi * trace(a) / p_;
  return {std::cos(angle), std::sin(angle)};
}

void Field::build_tables() {
  if (q_ <= 256) {
    add_.resize(q_ * q_);
    std::vector<std::uint32_t> tmp;
    for (std::uint64_t a = 0; a < q_; ++a)
      for (std::uint64_t b = 0; b < q_; ++b) {
        std::uint32_t r = 0, mult = 1, x = static_cast<std::uint32_t>(a),
                      y = static_cast<std::uint32_t>(b);
        for (std::uint32_t i = 0; i < l_; ++i) {
          r += ((x % p_ + y % p_) % p_) * mult;
          x /= p_;
          y /= p_;
          mult *= p_;
        }
        add_[a * q_ + b] = r;
      }
  }
  if (q_ > (1ull << 16) || q_ == 2) return;  // schoolbook path; F_2 needs no tables
  // find a multiplicative generator
  std::vector<std::uint64_t> prime_factors;
  std::uint64_t m = q_ - 1;
  for (std::uint64_t d = 2; d * d <= m; ++d)
    if (m % d == 0) {
      prime_factors.push_back(d);
      while (m % d == 0) m /= d;
    }
  if (m > 1) prime_factors.push_back(m);
  std::uint32_t gen = 0;
  for (std::uint32_t g = 1; g < q_; ++g) {
    bool ok = true;
    for (auto r : prime_factors) {
      std::uint32_t acc = 1, base = g;
      std::uint64_t e = (q_ - 1) / r;
      while (e) {
        if (e & 1) acc = mul_schoolbook(acc, base);
        base = mul_schoolbook(base, base);
        e >>= 1;
      }
      if (acc == 1) {
        ok = false;
        break;
      }
    }
    if (ok) {
      gen = g;
      break;
    }
  }
  exp_.resize(q_ - 1);
  log_.assign(q_, 0);
  std::uint32_t cur = 1;
  for (std::uint64_t i = 0; i < q_ - 1; ++i) {
    exp_[i] = cur;
    log_[cur] = static_cast<std::uint32_t>(i);
    cur = mul_schoolbook(cur, gen);
  }
}

std::shared_ptr<const Field> Field::parse(const std::string& spec) {
  auto caret = spec.find('^');
  if (caret == std::string::npos) {
    std::uint64_t p = std::stoull(spec);
    return make(static_cast<std::uint32_t>(p));
  }
  std::uint32_t p = static_cast<std::uint32_t>(std::stoul(spec.substr(0, caret)));
  auto slash = spec.find('/', caret);
  if (slash == std::string::npos)
    throw std::invalid_argument("extension field spec needs /modulus");
  std::uint32_t l = static_cast<std::uint32_t>(std::stoul(spec.substr(caret + 1, slash - caret - 1)));
  std::string mod = spec.substr(slash + 1);
  std::vector<std::uint32_t> coeffs;
  if (mod.find(',') != std::string::npos) {  // low-to-high comma list
    std::stringstream ss(mod);
    std::string tok;
    while (std::getline(ss, tok, ',')) coeffs.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
  } else {  // digit string, high to low
    for (auto it = mod.rbegin(); it != mod.rend(); ++it) {
      if (*it < '0' || *it > '9') throw std::invalid_argument("bad modulus digit");
      coeffs.push_back(static_cast<std::uint32_t>(*it - '0'));
    }
  }
  return make(p, l, std::move(coeffs));
}

std::string Field::spec_string() const {
  if (l_ == 1) return std::to_string(p_);
  std::string s = std::to_string(p_) + "^" + std::to_string(l_) + "/";
  for (auto it = modulus_.rbegin(); it != modulus_.rend(); ++it) s += static_cast<char>('0' + *it);
  return s;
}

}  // namespace splinekit
