#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ldkep {

/// Dense univariate polynomials over a prime field F_p, lowest degree first.
/// The zero polynomial is the empty vector; results are always trimmed.
namespace poly {

using Poly = std::vector<std::uint32_t>;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::uint32_t mod_pow(std::uint64_t a, std::uint64_t e, std::uint32_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = r * a % p;
    a = a * a % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

/// Inverse of a nonzero residue modulo the prime p.
inline std::uint32_t mod_inv(std::uint32_t a, std::uint32_t p) {
  if (a % p == 0) throw std::domain_error("zero has no inverse");
  return mod_pow(a, p - 2, p);
}

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int deg(const Poly& a) { return static_cast<int>(a.size()) - 1; }

inline Poly constant(std::uint32_t c, std::uint32_t p) {
  c %= p;
  return c ? Poly{c} : Poly{};
}

inline Poly add(const Poly& a, const Poly& b, std::uint32_t p) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::uint32_t x = i < a.size() ? a[i] : 0, y = i < b.size() ? b[i] : 0;
    r[i] = (x + y) % p;
  }
  trim(r);
  return r;
}

inline Poly neg(const Poly& a, std::uint32_t p) {
  Poly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] ? p - a[i] : 0;
  return r;
}

inline Poly sub(const Poly& a, const Poly& b, std::uint32_t p) { return add(a, neg(b, p), p); }

inline Poly scale(const Poly& a, std::uint32_t c, std::uint32_t p) {
  Poly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(a[i]) * c % p);
  trim(r);
  return r;
}

inline Poly mul(const Poly& a, const Poly& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  std::vector<std::uint64_t> acc(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] = (acc[i + j] + std::uint64_t{a[i]} * b[j]) % p;
  }
  Poly r(acc.begin(), acc.end());
  trim(r);
  return r;
}

/// Quotient and remainder of a by nonzero b.
inline std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b, std::uint32_t p) {
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  Poly r = a;
  trim(r);
  if (r.size() < b.size()) return {{}, r};
  Poly q(r.size() - b.size() + 1, 0);
  const std::uint32_t lead_inv = mod_inv(b.back(), p);
  for (int i = deg(r) - deg(b); i >= 0; --i) {
    const std::uint32_t c =
        static_cast<std::uint32_t>(std::uint64_t{r[i + b.size() - 1]} * lead_inv % p);
    q[i] = c;
    if (!c) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<std::uint32_t>((r[i + j] + std::uint64_t{p - c} * b[j]) % p);
  }
  trim(q);
  trim(r);
  return {q, r};
}

inline Poly mod(const Poly& a, const Poly& b, std::uint32_t p) { return divmod(a, b, p).second; }

inline Poly monic(const Poly& a, std::uint32_t p) {
  if (a.empty()) return a;
  return scale(a, mod_inv(a.back(), p), p);
}

inline Poly gcd(Poly a, Poly b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a, p);
}

/// (g, s, t) with s a + t b = g = gcd(a, b), g monic.
struct ExtGcd {
  Poly g, s, t;
};

inline ExtGcd ext_gcd(const Poly& a, const Poly& b, std::uint32_t p) {
  Poly r0 = a, r1 = b, s0 = {1}, s1 = {}, t0 = {}, t1 = {1};
  trim(r0);
  trim(r1);
  while (!r1.empty()) {
    auto [q, r] = divmod(r0, r1, p);
    Poly s2 = sub(s0, mul(q, s1, p), p);
    Poly t2 = sub(t0, mul(q, t1, p), p);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.empty()) return {r0, s0, t0};
  const std::uint32_t li = mod_inv(r0.back(), p);
  return {scale(r0, li, p), scale(s0, li, p), scale(t0, li, p)};
}

inline std::uint32_t eval(const Poly& a, std::uint32_t x, std::uint32_t p) {
  std::uint64_t r = 0;
  for (std::size_t i = a.size(); i-- > 0;) r = (r * x + a[i]) % p;
  return static_cast<std::uint32_t>(r);
}

/// base^e mod m.
inline Poly pow_mod(Poly base, std::uint64_t e, const Poly& m, std::uint32_t p) {
  Poly r = mod({1}, m, p);
  base = mod(base, m, p);
  while (e) {
    if (e & 1) r = mod(mul(r, base, p), m, p);
    base = mod(mul(base, base, p), m, p);
    e >>= 1;
  }
  return r;
}

/// X^(p^j) mod m, by j successive p-th powers.
inline Poly x_pow_p_pow(std::uint32_t j, const Poly& m, std::uint32_t p) {
  Poly r = mod({0, 1}, m, p);
  for (std::uint32_t i = 0; i < j; ++i) r = pow_mod(r, p, m, p);
  return r;
}

/// Rabin's irreducibility test for a monic polynomial of degree n >= 1.
inline bool is_irreducible(const Poly& g, std::uint32_t p) {
  const int n = deg(g);
  if (n < 1) return false;
  if (n == 1) return true;
  const Poly x = {0, 1};
  if (sub(x_pow_p_pow(static_cast<std::uint32_t>(n), g, p), mod(x, g, p), p) != Poly{}) return false;
  for (int q = 2; q <= n; ++q) {
    if (n % q != 0 || !is_prime(static_cast<std::uint64_t>(q))) continue;
    Poly h = sub(x_pow_p_pow(static_cast<std::uint32_t>(n / q), g, p), x, p);
    if (deg(gcd(g, h, p)) != 0) return false;
  }
  return true;
}

/// Least monic irreducible of degree n, ordering candidates by the integer
/// c_0 + c_1 p + ... + c_{n-1} p^{n-1} of their lower coefficients.
inline Poly least_irreducible(std::uint32_t n, std::uint32_t p) {
  if (n < 1) throw std::invalid_argument("irreducible degree must be >= 1");
  Poly g(n + 1, 0);
  g[n] = 1;
  while (true) {
    if (is_irreducible(g, p)) return g;
    std::uint32_t i = 0;
    while (i < n && g[i] == p - 1) g[i++] = 0;
    if (i == n) throw std::logic_error("no irreducible polynomial found");
    ++g[i];
  }
}

}  // namespace poly
}  // namespace ldkep
