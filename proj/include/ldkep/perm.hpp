#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldkep/bytes.hpp"
#include "ldkep/rng.hpp"

namespace ldkep {

/// Finitely supported permutation of {1, 2, ...}. Points beyond the stored
/// range are fixed; the stored range is trimmed so that equal permutations
/// have identical representations.
///
/// Products compose left to right: (pi * rho)(i) = rho(pi(i)).
class Perm {
 public:
  Perm() = default;

  /// images[i-1] = pi(i).
  static Perm from_images(std::vector<std::uint32_t> images) {
    std::vector<bool> seen(images.size() + 1, false);
    for (auto v : images) {
      if (v < 1 || v > images.size() || seen[v])
        throw std::invalid_argument("Perm: images are not a bijection");
      seen[v] = true;
    }
    if (images.size() > 0xffff) throw std::length_error("Perm: support too large");
    Perm p;
    p.img_ = std::move(images);
    p.trim();
    return p;
  }

  static Perm identity() { return Perm(); }

  static Perm transposition(std::uint32_t i, std::uint32_t j) {
    if (i < 1 || j < 1) throw std::invalid_argument("Perm: points are 1-based");
    std::vector<std::uint32_t> img(std::max(i, j));
    std::iota(img.begin(), img.end(), 1u);
    std::swap(img[i - 1], img[j - 1]);
    return from_images(std::move(img));
  }

  /// Cycle notation, e.g. {{1, 2, 3}, {5, 6}}.
  static Perm from_cycles(std::initializer_list<std::initializer_list<std::uint32_t>> cycles) {
    std::uint32_t n = 0;
    for (const auto& c : cycles)
      for (auto v : c) n = std::max(n, v);
    std::vector<std::uint32_t> img(n);
    std::iota(img.begin(), img.end(), 1u);
    for (const auto& c : cycles) {
      std::vector<std::uint32_t> cyc(c);
      for (std::size_t i = 0; i < cyc.size(); ++i) img[cyc[i] - 1] = cyc[(i + 1) % cyc.size()];
    }
    return from_images(std::move(img));
  }

  /// Largest moved point (0 for the identity).
  std::uint32_t degree() const { return static_cast<std::uint32_t>(img_.size()); }
  bool is_identity() const { return img_.empty(); }

  std::uint32_t operator()(std::uint32_t i) const { return i <= img_.size() ? img_[i - 1] : i; }

  /// Image vector padded to length n (n >= degree()).
  std::vector<std::uint32_t> images(std::uint32_t n) const {
    std::vector<std::uint32_t> out(std::max(n, degree()));
    for (std::uint32_t i = 1; i <= out.size(); ++i) out[i - 1] = (*this)(i);
    return out;
  }

  Perm inverse() const {
    Perm r;
    r.img_.resize(img_.size());
    for (std::uint32_t i = 1; i <= img_.size(); ++i) r.img_[img_[i - 1] - 1] = i;
    return r;
  }

  friend Perm operator*(const Perm& a, const Perm& b) {
    const std::uint32_t n = std::max(a.degree(), b.degree());
    Perm r;
    r.img_.resize(n);
    for (std::uint32_t i = 1; i <= n; ++i) r.img_[i - 1] = b(a(i));
    r.trim();
    return r;
  }

  friend bool operator==(const Perm&, const Perm&) = default;

  /// True iff every point outside [lo+1, hi] is fixed and [lo+1, hi] is mapped
  /// into itself.
  bool supported_in(std::uint32_t lo, std::uint32_t hi) const {
    for (std::uint32_t i = 1; i <= img_.size(); ++i) {
      const bool inside = i > lo && i <= hi;
      if (!inside && img_[i - 1] != i) return false;
      if (inside && (img_[i - 1] <= lo || img_[i - 1] > hi)) return false;
    }
    return true;
  }

  std::string to_string() const {
    std::string s;
    std::vector<bool> done(img_.size() + 1, false);
    for (std::uint32_t i = 1; i <= img_.size(); ++i) {
      if (done[i] || img_[i - 1] == i) continue;
      s += "(";
      for (std::uint32_t j = i; !done[j]; j = img_[j - 1]) {
        done[j] = true;
        if (s.back() != '(') s += " ";
        s += std::to_string(j);
      }
      s += ")";
    }
    return s.empty() ? "()" : s;
  }

  void encode(Bytes& out) const {
    put_u16(out, static_cast<std::uint16_t>(img_.size()));
    for (auto v : img_) put_u16(out, static_cast<std::uint16_t>(v));
  }

  static Perm decode(ByteReader& in) {
    const std::uint16_t n = in.u16();
    std::vector<std::uint32_t> img(n);
    for (auto& v : img) v = in.u16();
    Perm p;
    try {
      p = from_images(std::move(img));
    } catch (const std::invalid_argument&) {
      throw DecodeError("permutation encoding is not a bijection");
    }
    if (p.degree() != n) throw DecodeError("permutation encoding is not trimmed");
    return p;
  }

 private:
  void trim() {
    while (!img_.empty() && img_.back() == img_.size()) img_.pop_back();
  }

  std::vector<std::uint32_t> img_;
};

/// Fixes 1..p and sends p+i to pi(i)+p.
inline Perm perm_shift(const Perm& pi, std::uint32_t p) {
  if (p == 0 || pi.is_identity()) return pi;
  std::vector<std::uint32_t> img(pi.degree() + p);
  for (std::uint32_t i = 1; i <= p; ++i) img[i - 1] = i;
  for (std::uint32_t i = 1; i <= pi.degree(); ++i) img[p + i - 1] = pi(i) + p;
  return Perm::from_images(std::move(img));
}

/// Block permutation sending 1..p to q+1..q+p and p+1..p+q to 1..q.
inline Perm perm_tau(std::uint32_t p, std::uint32_t q) {
  if (p < 1 || q < 1) throw std::invalid_argument("perm_tau: p and q must be positive");
  std::vector<std::uint32_t> img(p + q);
  for (std::uint32_t i = 1; i <= p; ++i) img[i - 1] = q + i;
  for (std::uint32_t i = p + 1; i <= p + q; ++i) img[i - 1] = i - p;
  return Perm::from_images(std::move(img));
}

inline Perm perm_pow(const Perm& x, int e) {
  Perm base = e < 0 ? x.inverse() : x;
  Perm r;
  for (int i = 0; i < (e < 0 ? -e : e); ++i) r = r * base;
  return r;
}

/// tau_{p,p}^{eps_k} d^p(tau_{p,p}^{eps_{k-1}}) ... d^{(k-1)p}(tau_{p,p}^{eps_1}),
/// computed as the literal product.
inline Perm perm_tau_eps(std::uint32_t p, const std::vector<int>& eps) {
  if (eps.empty()) throw std::invalid_argument("perm_tau_eps: empty sign vector");
  const std::size_t k = eps.size();
  const Perm tau = perm_tau(p, p);
  Perm r;
  for (std::size_t j = 0; j < k; ++j) {
    const int e = eps[k - 1 - j];
    if (e != 1 && e != -1) throw std::invalid_argument("perm_tau_eps: signs must be +-1");
    r = r * perm_shift(perm_pow(tau, e), static_cast<std::uint32_t>(j * p));
  }
  return r;
}

/// Uniform permutation of {1..n} (Fisher-Yates).
inline Perm random_perm(std::uint32_t n, Rng& rng) {
  std::vector<std::uint32_t> img(n);
  std::iota(img.begin(), img.end(), 1u);
  for (std::uint32_t i = n; i > 1; --i) std::swap(img[i - 1], img[rng.below(i)]);
  return Perm::from_images(std::move(img));
}

/// Uniform permutation of {lo+1..lo+len}, fixing everything else.
inline Perm random_block_perm(std::uint32_t lo, std::uint32_t len, Rng& rng) {
  return perm_shift(random_perm(len, rng), lo);
}

/// Image of a signed generator word under sigma_i -> (i, i+1).
inline Perm perm_of_word(const std::vector<std::int32_t>& letters) {
  std::uint32_t n = 0;
  for (auto l : letters) n = std::max<std::uint32_t>(n, static_cast<std::uint32_t>(std::abs(l)) + 1);
  std::vector<std::uint32_t> img(n);
  std::iota(img.begin(), img.end(), 1u);
  // left-to-right product: track where each point currently sits
  std::vector<std::uint32_t> where(n);  // where[pos] = original point at position pos
  std::iota(where.begin(), where.end(), 1u);
  for (auto l : letters) {
    const auto i = static_cast<std::uint32_t>(std::abs(l));
    std::swap(where[i - 1], where[i]);
  }
  for (std::uint32_t pos = 1; pos <= n; ++pos) img[where[pos - 1] - 1] = pos;
  return Perm::from_images(std::move(img));
}

}  // namespace ldkep
