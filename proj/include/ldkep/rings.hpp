#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldkep/bytes.hpp"
#include "ldkep/magma.hpp"
#include "ldkep/poly.hpp"
#include "ldkep/rng.hpp"

namespace ldkep {

/// Ring endomorphism applied entrywise to matrices.
struct EndoSpec {
  enum class Kind { identity, frobenius, eval };
  Kind kind = Kind::identity;
  /// Frobenius exponent j in x -> x^(p^j).
  std::uint32_t power = 1;
  /// Evaluation point for X (truncated polynomials) or t (rational functions).
  std::uint32_t point = 0;

  static EndoSpec identity() { return {}; }
  static EndoSpec frobenius(std::uint32_t j = 1) { return {Kind::frobenius, j, 0}; }
  static EndoSpec eval_at(std::uint32_t r) { return {Kind::eval, 1, r}; }

  std::string to_string() const {
    switch (kind) {
      case Kind::identity:
        return "identity";
      case Kind::frobenius:
        return "frobenius^" + std::to_string(power);
      case Kind::eval:
        return "eval@" + std::to_string(point);
    }
    return "?";
  }

  friend bool operator==(const EndoSpec&, const EndoSpec&) = default;
};

/// Fixed-capacity coefficient vector for rings of size p^N with N <= 64.
struct Coeffs {
  static constexpr std::size_t kCapacity = 64;
  std::array<std::uint8_t, kCapacity> c{};
  friend bool operator==(const Coeffs&, const Coeffs&) = default;
};

namespace detail {

inline void check_coeff_ring(std::uint32_t p, std::uint32_t n) {
  if (!poly::is_prime(p)) throw std::invalid_argument("characteristic must be prime");
  if (p > 251) throw std::invalid_argument("characteristic must be below 256");
  if (n < 1 || n > Coeffs::kCapacity) throw std::invalid_argument("degree must be in 1..64");
}

inline poly::Poly to_poly(const Coeffs& a, std::uint32_t n) {
  poly::Poly r(a.c.begin(), a.c.begin() + n);
  poly::trim(r);
  return r;
}

inline Coeffs from_poly(const poly::Poly& a) {
  Coeffs r;
  if (a.size() > Coeffs::kCapacity) throw std::logic_error("polynomial exceeds capacity");
  for (std::size_t i = 0; i < a.size(); ++i) r.c[i] = static_cast<std::uint8_t>(a[i]);
  return r;
}

/// Shared additive structure, sampling and encoding of coefficient rings.
class CoeffRingBase {
 public:
  CoeffRingBase(std::uint32_t p, std::uint32_t n) : p_(p), n_(n) { check_coeff_ring(p, n); }

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return n_; }

  Coeffs zero() const { return {}; }
  Coeffs one() const { return from_int(1); }
  Coeffs from_int(std::int64_t v) const {
    Coeffs r;
    const std::int64_t p = p_;
    r.c[0] = static_cast<std::uint8_t>(((v % p) + p) % p);
    return r;
  }
  bool is_zero(const Coeffs& a) const { return a == Coeffs{}; }
  bool equal(const Coeffs& a, const Coeffs& b) const { return a == b; }

  Coeffs add(const Coeffs& a, const Coeffs& b) const {
    Coeffs r;
    for (std::uint32_t i = 0; i < n_; ++i) r.c[i] = static_cast<std::uint8_t>((a.c[i] + b.c[i]) % p_);
    return r;
  }
  Coeffs neg(const Coeffs& a) const {
    Coeffs r;
    for (std::uint32_t i = 0; i < n_; ++i) r.c[i] = static_cast<std::uint8_t>(a.c[i] ? p_ - a.c[i] : 0);
    return r;
  }
  Coeffs sub(const Coeffs& a, const Coeffs& b) const { return add(a, neg(b)); }

  Coeffs random(Rng& rng) const {
    Coeffs r;
    for (std::uint32_t i = 0; i < n_; ++i) r.c[i] = static_cast<std::uint8_t>(rng.below(p_));
    return r;
  }

  /// N bytes, coefficient of X^i at byte i.
  void encode(const Coeffs& a, Bytes& out) const {
    for (std::uint32_t i = 0; i < n_; ++i) out.push_back(a.c[i]);
  }
  Coeffs decode(ByteReader& in) const {
    Coeffs r;
    for (std::uint32_t i = 0; i < n_; ++i) {
      r.c[i] = in.u8();
      if (r.c[i] >= p_) throw DecodeError("coefficient out of range");
    }
    return r;
  }

  std::string format(const Coeffs& a) const {
    std::string s;
    for (std::uint32_t i = n_; i-- > 0;) {
      if (!a.c[i]) continue;
      if (!s.empty()) s += "+";
      if (a.c[i] != 1 || i == 0) s += std::to_string(a.c[i]);
      if (i > 0) s += i == 1 ? "X" : "X^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
  }

 protected:
  /// Schoolbook product, 2N-1 coefficients, reduced mod p. At most 64 terms
  /// below 2^16 each, so the 32-bit accumulators cannot overflow.
  std::array<std::uint32_t, 2 * Coeffs::kCapacity> raw_mul(const Coeffs& a, const Coeffs& b) const {
    std::array<std::uint32_t, 2 * Coeffs::kCapacity> acc{};
    for (std::uint32_t i = 0; i < n_; ++i) {
      if (!a.c[i]) continue;
      for (std::uint32_t j = 0; j < n_; ++j) acc[i + j] += std::uint32_t{a.c[i]} * b.c[j];
    }
    for (std::uint32_t i = 0; i + 1 < 2 * n_; ++i) acc[i] %= p_;
    return acc;
  }

  std::uint32_t p_;
  std::uint32_t n_;
};

}  // namespace detail

/// F_{p^N} as F_p[X]/(g) for the least monic irreducible g of degree N.
/// Characteristic 2 with N <= 63 multiplies on packed bit vectors.
class FiniteField : public detail::CoeffRingBase {
 public:
  using Element = Coeffs;
  static constexpr bool is_field = true;

  FiniteField(std::uint32_t p, std::uint32_t n)
      : CoeffRingBase(p, n), modulus_(poly::least_irreducible(n, p)) {
    if (p == 2 && n <= 63) {
      for (std::uint32_t i = 0; i < n; ++i)
        if (modulus_[i]) low_mask_ |= std::uint64_t{1} << i;
    }
  }

  const poly::Poly& modulus() const { return modulus_; }
  std::string name() const {
    return "F_" + std::to_string(p_) + "^" + std::to_string(n_);
  }

  Coeffs mul(const Coeffs& a, const Coeffs& b) const {
    if (p_ == 2 && n_ <= 63) return unpack(mul2(pack(a), pack(b)));
    auto acc = raw_mul(a, b);
    // reduce with the monic modulus from the top down
    for (std::uint32_t i = 2 * n_ - 2; i >= n_; --i) {
      const std::uint32_t c = acc[i] % p_;
      acc[i] = 0;
      if (c) {
        for (std::uint32_t j = 0; j < n_; ++j)
          acc[i - n_ + j] = (acc[i - n_ + j] + (p_ - c) * modulus_[j]) % p_;
      }
    }
    Coeffs r;
    for (std::uint32_t i = 0; i < n_; ++i) r.c[i] = static_cast<std::uint8_t>(acc[i] % p_);
    return r;
  }

  bool is_unit(const Coeffs& a) const { return !is_zero(a); }

  /// x -> x^p.
  Coeffs frobenius(const Coeffs& a) const {
    Coeffs r = one();
    Coeffs base = a;
    for (std::uint32_t e = p_; e; e >>= 1) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
    }
    return r;
  }

  Coeffs frobenius_pow(const Coeffs& a, std::uint32_t j) const {
    Coeffs r = a;
    for (std::uint32_t i = 0; i < j % n_; ++i) r = frobenius(r);
    return r;
  }

  /// a^(p^N - 2), using p^N - 2 = (p - 2) + sum_{i >= 1} (p - 1) p^i.
  Coeffs inv(const Coeffs& a) const {
    if (is_zero(a)) throw std::domain_error("zero has no inverse");
    Coeffs r = pow(a, p_ - 2);
    Coeffs ai = a;
    for (std::uint32_t i = 1; i < n_; ++i) {
      ai = frobenius(ai);
      r = mul(r, pow(ai, p_ - 1));
    }
    return r;
  }

  Coeffs pow(const Coeffs& a, std::uint64_t e) const {
    Coeffs r = one();
    Coeffs base = a;
    for (; e; e >>= 1) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
    }
    return r;
  }

  Coeffs apply_endo(const EndoSpec& f, const Coeffs& a) const {
    switch (f.kind) {
      case EndoSpec::Kind::identity:
        return a;
      case EndoSpec::Kind::frobenius:
        return frobenius_pow(a, f.power);
      case EndoSpec::Kind::eval:
        break;
    }
    throw std::invalid_argument("finite fields support identity and Frobenius endomorphisms");
  }

  bool is_projector(const EndoSpec& f) const {
    if (f.kind == EndoSpec::Kind::identity) return true;
    if (f.kind == EndoSpec::Kind::frobenius) return f.power % n_ == 0;
    throw std::invalid_argument("finite fields support identity and Frobenius endomorphisms");
  }

  /// Order of the Frobenius automorphism.
  std::uint32_t frobenius_order() const { return n_; }

  std::vector<Coeffs> all_elements() const {
    std::vector<Coeffs> out;
    Coeffs a;
    while (true) {
      out.push_back(a);
      std::uint32_t i = 0;
      while (i < n_ && a.c[i] == p_ - 1) a.c[i++] = 0;
      if (i == n_) break;
      ++a.c[i];
    }
    return out;
  }

 private:
  static std::uint64_t pack(const Coeffs& a) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < 64; ++i) v |= std::uint64_t{a.c[i]} << i;
    return v;
  }
  Coeffs unpack(std::uint64_t v) const {
    Coeffs r;
    for (std::uint32_t i = 0; i < n_; ++i) r.c[i] = static_cast<std::uint8_t>((v >> i) & 1);
    return r;
  }
  std::uint64_t mul2(std::uint64_t a, std::uint64_t b) const {
    unsigned __int128 acc = 0;
    for (std::uint32_t i = 0; i < n_; ++i)
      if ((b >> i) & 1) acc ^= static_cast<unsigned __int128>(a) << i;
    for (std::uint32_t i = 2 * n_ - 2; i >= n_; --i)
      if ((acc >> i) & 1) {
        acc ^= static_cast<unsigned __int128>(1) << i;
        acc ^= static_cast<unsigned __int128>(low_mask_) << (i - n_);
      }
    return static_cast<std::uint64_t>(acc);
  }

  poly::Poly modulus_;
  std::uint64_t low_mask_ = 0;
};

/// F_p[X]/(X^N - 1). Not a field for N > 1; units are the polynomials coprime
/// to X^N - 1.
class TruncatedPolyRing : public detail::CoeffRingBase {
 public:
  using Element = Coeffs;
  static constexpr bool is_field = false;

  TruncatedPolyRing(std::uint32_t p, std::uint32_t n) : CoeffRingBase(p, n) {
    cyclo_.assign(n + 1, 0);
    cyclo_[0] = p - 1;
    cyclo_[n] = 1;
  }

  std::string name() const {
    return "F_" + std::to_string(p_) + "[X]/(X^" + std::to_string(n_) + "-1)";
  }

  /// Cyclic convolution.
  Coeffs mul(const Coeffs& a, const Coeffs& b) const {
    auto acc = raw_mul(a, b);
    Coeffs r;
    for (std::uint32_t i = 0; i < n_; ++i) {
      const std::uint32_t hi = i + n_ < 2 * n_ - 1 ? acc[i + n_] : 0;
      r.c[i] = static_cast<std::uint8_t>((acc[i] + hi) % p_);
    }
    return r;
  }

  bool is_unit(const Coeffs& a) const {
    return poly::deg(poly::gcd(detail::to_poly(a, n_), cyclo_, p_)) == 0;
  }

  Coeffs inv(const Coeffs& a) const {
    auto eg = poly::ext_gcd(detail::to_poly(a, n_), cyclo_, p_);
    if (poly::deg(eg.g) != 0) throw std::domain_error("not a unit in the truncated polynomial ring");
    return detail::from_poly(poly::mod(eg.s, cyclo_, p_));
  }

  /// True iff X -> r is a well-defined ring map, i.e. r^N = 1 in F_p.
  bool valid_eval_point(std::uint32_t r) const {
    return r % p_ != 0 && poly::mod_pow(r, n_, p_) == 1;
  }

  Coeffs apply_endo(const EndoSpec& f, const Coeffs& a) const {
    switch (f.kind) {
      case EndoSpec::Kind::identity:
        return a;
      case EndoSpec::Kind::eval: {
        if (!valid_eval_point(f.point)) throw std::invalid_argument("evaluation point must satisfy r^N = 1");
        return from_int(poly::eval(detail::to_poly(a, n_), f.point % p_, p_));
      }
      case EndoSpec::Kind::frobenius:
        break;
    }
    throw std::invalid_argument("truncated polynomial rings support identity and evaluation endomorphisms");
  }

  bool is_projector(const EndoSpec& f) const {
    if (f.kind == EndoSpec::Kind::frobenius)
      throw std::invalid_argument("truncated polynomial rings support identity and evaluation endomorphisms");
    return true;
  }

  std::vector<Coeffs> all_elements() const {
    std::vector<Coeffs> out;
    Coeffs a;
    while (true) {
      out.push_back(a);
      std::uint32_t i = 0;
      while (i < n_ && a.c[i] == p_ - 1) a.c[i++] = 0;
      if (i == n_) break;
      ++a.c[i];
    }
    return out;
  }

 private:
  poly::Poly cyclo_;
};

/// Reduced fraction num/den over F_q with den monic. Zero is 0/1.
struct RatFn {
  poly::Poly num;
  poly::Poly den{1};
  friend bool operator==(const RatFn&, const RatFn&) = default;
};

/// The rational function field F_q(t) in one variable.
class RationalFunctionField {
 public:
  using Element = RatFn;
  static constexpr bool is_field = true;

  explicit RationalFunctionField(std::uint32_t q) : q_(q) {
    if (!poly::is_prime(q)) throw std::invalid_argument("characteristic must be prime");
    if (q > 251) throw std::invalid_argument("characteristic must be below 256");
  }

  std::uint32_t characteristic() const { return q_; }
  std::string name() const { return "F_" + std::to_string(q_) + "(t)"; }

  RatFn make(poly::Poly num, poly::Poly den) const {
    poly::trim(num);
    poly::trim(den);
    if (den.empty()) throw std::domain_error("zero denominator");
    if (num.empty()) return RatFn{};
    poly::Poly g = poly::gcd(num, den, q_);
    if (poly::deg(g) > 0) {
      num = poly::divmod(num, g, q_).first;
      den = poly::divmod(den, g, q_).first;
    }
    const std::uint32_t li = poly::mod_inv(den.back(), q_);
    return RatFn{poly::scale(num, li, q_), poly::scale(den, li, q_)};
  }

  RatFn zero() const { return RatFn{}; }
  RatFn one() const { return from_int(1); }
  RatFn from_int(std::int64_t v) const {
    const std::int64_t q = q_;
    return RatFn{poly::constant(static_cast<std::uint32_t>(((v % q) + q) % q), q_), {1}};
  }
  bool is_zero(const RatFn& a) const { return a.num.empty(); }
  bool equal(const RatFn& a, const RatFn& b) const { return a == b; }

  RatFn add(const RatFn& a, const RatFn& b) const {
    if (a.den == b.den) return make(poly::add(a.num, b.num, q_), a.den);
    return make(poly::add(poly::mul(a.num, b.den, q_), poly::mul(b.num, a.den, q_), q_),
                poly::mul(a.den, b.den, q_));
  }
  RatFn neg(const RatFn& a) const { return RatFn{poly::neg(a.num, q_), a.den}; }
  RatFn sub(const RatFn& a, const RatFn& b) const { return add(a, neg(b)); }
  RatFn mul(const RatFn& a, const RatFn& b) const {
    if (a.num.empty() || b.num.empty()) return RatFn{};
    return make(poly::mul(a.num, b.num, q_), poly::mul(a.den, b.den, q_));
  }
  bool is_unit(const RatFn& a) const { return !a.num.empty(); }
  RatFn inv(const RatFn& a) const {
    if (a.num.empty()) throw std::domain_error("zero has no inverse");
    return make(a.den, a.num);
  }

  /// Numerator of degree <= 2 with uniform coefficients over a monic
  /// denominator t + c or 1.
  RatFn random(Rng& rng) const {
    poly::Poly num(3);
    for (auto& c : num) c = static_cast<std::uint32_t>(rng.below(q_));
    poly::Poly den = rng.coin() ? poly::Poly{static_cast<std::uint32_t>(rng.below(q_)), 1} : poly::Poly{1};
    return make(num, den);
  }

  /// t -> c. Rejects fractions whose denominator vanishes at c.
  RatFn apply_endo(const EndoSpec& f, const RatFn& a) const {
    switch (f.kind) {
      case EndoSpec::Kind::identity:
        return a;
      case EndoSpec::Kind::eval: {
        const std::uint32_t d = poly::eval(a.den, f.point % q_, q_);
        if (d == 0) throw OperationRejected("denominator vanishes at the evaluation point");
        const std::uint32_t n = poly::eval(a.num, f.point % q_, q_);
        return RatFn{poly::constant(static_cast<std::uint32_t>(std::uint64_t{n} * poly::mod_inv(d, q_) % q_), q_), {1}};
      }
      case EndoSpec::Kind::frobenius:
        break;
    }
    throw std::invalid_argument("rational function fields support identity and evaluation endomorphisms");
  }

  bool is_projector(const EndoSpec& f) const {
    if (f.kind == EndoSpec::Kind::frobenius)
      throw std::invalid_argument("rational function fields support identity and evaluation endomorphisms");
    return true;
  }

  /// u16 length and one byte per coefficient, numerator then denominator.
  void encode(const RatFn& a, Bytes& out) const {
    for (const auto* part : {&a.num, &a.den}) {
      put_u16(out, static_cast<std::uint16_t>(part->size()));
      for (auto c : *part) out.push_back(static_cast<std::uint8_t>(c));
    }
  }
  RatFn decode(ByteReader& in) const {
    poly::Poly parts[2];
    for (auto& part : parts) {
      part.resize(in.u16());
      for (auto& c : part) {
        c = in.u8();
        if (c >= q_) throw DecodeError("coefficient out of range");
      }
    }
    RatFn r{parts[0], parts[1]};
    if (r.den.empty()) throw DecodeError("zero denominator");
    if (!(make(r.num, r.den) == r)) throw DecodeError("rational function not in lowest terms");
    return r;
  }

  std::string format(const RatFn& a) const {
    auto fmt = [&](const poly::Poly& p) {
      std::string s;
      for (std::size_t i = p.size(); i-- > 0;) {
        if (!p[i]) continue;
        if (!s.empty()) s += "+";
        if (p[i] != 1 || i == 0) s += std::to_string(p[i]);
        if (i > 0) s += i == 1 ? "t" : "t^" + std::to_string(i);
      }
      return s.empty() ? std::string("0") : s;
    };
    if (a.den == poly::Poly{1}) return fmt(a.num);
    return "(" + fmt(a.num) + ")/(" + fmt(a.den) + ")";
  }

 private:
  std::uint32_t q_;
};

}  // namespace ldkep
