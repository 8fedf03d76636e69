#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldkep/bytes.hpp"
#include "ldkep/magma.hpp"
#include "ldkep/perm.hpp"
#include "ldkep/perm_platform.hpp"
#include "ldkep/rng.hpp"

namespace ldkep {

/// Word in the Artin generators of B_infinity: letter i > 0 is sigma_i,
/// letter -i is sigma_i^-1. Products are freely reduced.
class BraidWord {
 public:
  BraidWord() = default;
  BraidWord(std::initializer_list<std::int32_t> letters) : BraidWord(std::vector<std::int32_t>(letters)) {}
  explicit BraidWord(std::vector<std::int32_t> letters) {
    for (auto l : letters) {
      if (l == 0) throw std::invalid_argument("braid letters must be nonzero");
      push(l);
    }
  }

  const std::vector<std::int32_t>& letters() const { return w_; }
  std::size_t length() const { return w_.size(); }
  bool empty() const { return w_.empty(); }

  /// 1 + largest generator index (1 for the empty word).
  std::uint32_t strands() const {
    std::uint32_t m = 0;
    for (auto l : w_) m = std::max<std::uint32_t>(m, static_cast<std::uint32_t>(std::abs(l)));
    return m + 1;
  }

  BraidWord inverse() const {
    BraidWord r;
    r.w_.reserve(w_.size());
    for (auto it = w_.rbegin(); it != w_.rend(); ++it) r.w_.push_back(-*it);
    return r;
  }

  friend BraidWord operator*(const BraidWord& a, const BraidWord& b) {
    BraidWord r = a;
    r.w_.reserve(a.w_.size() + b.w_.size());
    for (auto l : b.w_) r.push(l);
    return r;
  }

  BraidWord pow(int e) const {
    BraidWord base = e < 0 ? inverse() : *this;
    BraidWord r;
    for (int i = 0; i < std::abs(e); ++i) r = r * base;
    return r;
  }

  /// Literal equality of reduced words; braid equality is braid_eq.
  bool same_word(const BraidWord& o) const { return w_ == o.w_; }

  std::string to_string() const {
    if (w_.empty()) return "e";
    std::string s;
    for (auto l : w_) {
      if (!s.empty()) s += " ";
      s += "s" + std::to_string(std::abs(l));
      if (l < 0) s += "^-1";
    }
    return s;
  }

 private:
  void push(std::int32_t l) {
    if (!w_.empty() && w_.back() == -l)
      w_.pop_back();
    else
      w_.push_back(l);
  }

  std::vector<std::int32_t> w_;
};

/// Every index raised by p: sigma_i -> sigma_{i+p}.
inline BraidWord braid_shift(const BraidWord& w, std::uint32_t p) {
  std::vector<std::int32_t> out;
  out.reserve(w.length());
  const auto sp = static_cast<std::int32_t>(p);
  for (auto l : w.letters()) out.push_back(l > 0 ? l + sp : l - sp);
  return BraidWord(std::move(out));
}

/// delta_n = sigma_{n-1} ... sigma_2 sigma_1.
inline BraidWord braid_delta(std::uint32_t n) {
  if (n < 2) throw std::invalid_argument("braid_delta needs n >= 2");
  std::vector<std::int32_t> w;
  for (auto i = static_cast<std::int32_t>(n) - 1; i >= 1; --i) w.push_back(i);
  return BraidWord(std::move(w));
}

/// tau_{p,q} = delta_{p+1} d(delta_{p+1}) ... d^{q-1}(delta_{p+1}).
inline BraidWord braid_tau(std::uint32_t p, std::uint32_t q) {
  if (p < 1 || q < 1) throw std::invalid_argument("braid_tau needs p, q >= 1");
  BraidWord r;
  const BraidWord d = braid_delta(p + 1);
  for (std::uint32_t j = 0; j < q; ++j) r = r * braid_shift(d, j);
  return r;
}

/// tau_{p,p}^{eps_k} d^p(tau_{p,p}^{eps_{k-1}}) ... d^{(k-1)p}(tau_{p,p}^{eps_1}).
inline BraidWord braid_tau_eps(std::uint32_t p, const std::vector<int>& eps) {
  if (eps.empty()) throw std::invalid_argument("braid_tau_eps: empty sign vector");
  const BraidWord tau = braid_tau(p, p);
  const std::size_t k = eps.size();
  BraidWord r;
  for (std::size_t j = 0; j < k; ++j) {
    const int e = eps[k - 1 - j];
    if (e != 1 && e != -1) throw std::invalid_argument("braid_tau_eps: signs must be +-1");
    r = r * braid_shift(tau.pow(e), static_cast<std::uint32_t>(j * p));
  }
  return r;
}

/// Positive half twist Delta_n = delta_2 delta_3 ... delta_n.
inline BraidWord half_twist(std::uint32_t n) {
  BraidWord r;
  for (std::uint32_t k = 2; k <= n; ++k) r = r * braid_delta(k);
  return r;
}

inline Perm perm_of_braid(const BraidWord& w) { return perm_of_word(w.letters()); }

namespace detail {

/// Positive permutation braid on n strands, stored as its permutation of
/// {0..n-1} (left-to-right composition) together with the inverse.
struct Simple {
  std::vector<std::uint16_t> img, inv;

  static Simple identity(std::uint32_t n) {
    Simple s;
    s.img.resize(n);
    s.inv.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) s.img[i] = s.inv[i] = static_cast<std::uint16_t>(i);
    return s;
  }
  static Simple from_img(std::vector<std::uint16_t> img) {
    Simple s;
    s.inv.resize(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) s.inv[img[i]] = static_cast<std::uint16_t>(i);
    s.img = std::move(img);
    return s;
  }
  static Simple delta(std::uint32_t n) {
    std::vector<std::uint16_t> img(n);
    for (std::uint32_t i = 0; i < n; ++i) img[i] = static_cast<std::uint16_t>(n - 1 - i);
    return from_img(std::move(img));
  }

  std::uint32_t n() const { return static_cast<std::uint32_t>(img.size()); }
  bool is_identity() const {
    for (std::size_t i = 0; i < img.size(); ++i)
      if (img[i] != i) return false;
    return true;
  }
  bool is_delta() const {
    for (std::size_t i = 0; i < img.size(); ++i)
      if (img[i] != img.size() - 1 - i) return false;
    return true;
  }

  /// i in F: the braid ends with sigma_i.
  bool ends_with(std::uint32_t i) const { return inv[i - 1] > inv[i]; }
  /// i in S: the braid starts with sigma_i.
  bool starts_with(std::uint32_t i) const { return img[i - 1] > img[i]; }

  /// this * sigma_i (requires i not in F).
  void append(std::uint32_t i) {
    const auto a = inv[i - 1], b = inv[i];
    img[a] = static_cast<std::uint16_t>(i);
    img[b] = static_cast<std::uint16_t>(i - 1);
    std::swap(inv[i - 1], inv[i]);
  }
  /// sigma_i^-1 * this (requires i in S).
  void drop_front(std::uint32_t i) {
    std::swap(img[i - 1], img[i]);
    inv[img[i - 1]] = static_cast<std::uint16_t>(i - 1);
    inv[img[i]] = static_cast<std::uint16_t>(i);
  }

  /// Delta X Delta^-1: x -> n-1-pi(n-1-x).
  Simple flipped() const {
    const auto m = n();
    std::vector<std::uint16_t> out(m);
    for (std::uint32_t x = 0; x < m; ++x) out[x] = static_cast<std::uint16_t>(m - 1 - img[m - 1 - x]);
    return from_img(std::move(out));
  }

  /// Right complement X^-1 Delta: x -> n-1-pi^-1(x).
  Simple complement() const {
    const auto m = n();
    std::vector<std::uint16_t> out(m);
    for (std::uint32_t x = 0; x < m; ++x) out[x] = static_cast<std::uint16_t>(m - 1 - inv[x]);
    return from_img(std::move(out));
  }

  /// A positive word representing this permutation braid.
  std::vector<std::int32_t> word() const {
    Simple cur = *this;
    std::vector<std::int32_t> rev;
    const auto m = n();
    bool progress = true;
    while (progress) {
      progress = false;
      for (std::uint32_t i = 1; i < m; ++i)
        if (cur.ends_with(i)) {
          // strip the trailing sigma_i: swap values i-1, i back
          const auto a = cur.inv[i - 1], b = cur.inv[i];
          cur.img[a] = static_cast<std::uint16_t>(i);
          cur.img[b] = static_cast<std::uint16_t>(i - 1);
          std::swap(cur.inv[i - 1], cur.inv[i]);
          rev.push_back(static_cast<std::int32_t>(i));
          progress = true;
          break;
        }
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
  }

  /// Largest moved point (0-based) plus one; 0 for the identity.
  std::uint32_t support() const {
    for (std::uint32_t x = n(); x-- > 0;)
      if (img[x] != x) return x + 1;
    return 0;
  }

  friend bool operator==(const Simple&, const Simple&) = default;
};

/// Moves generators from the front of b to the end of a until (a, b) is
/// left-weighted. Returns true if anything moved.
inline bool left_weight(Simple& a, Simple& b) {
  bool changed = false;
  const auto m = a.n();
  for (std::uint32_t i = 1; i < m;) {
    if (b.starts_with(i) && !a.ends_with(i)) {
      a.append(i);
      b.drop_front(i);
      changed = true;
      i = i > 1 ? i - 1 : 1;  // only descents i-1, i, i+1 can change
    } else {
      ++i;
    }
  }
  return changed;
}

}  // namespace detail

/// Left normal form Delta^inf A_1 ... A_k in B_n.
struct GarsideNF {
  std::uint32_t n = 1;
  std::int32_t inf = 0;
  std::vector<Perm> factors;

  friend bool operator==(const GarsideNF&, const GarsideNF&) = default;

  bool is_identity() const { return inf == 0 && factors.empty(); }

  BraidWord to_word() const {
    BraidWord r;
    if (inf != 0) r = half_twist(n).pow(inf);
    for (const auto& f : factors) {
      std::vector<std::uint16_t> img(n);
      for (std::uint32_t x = 0; x < n; ++x) img[x] = static_cast<std::uint16_t>(f(x + 1) - 1);
      r = r * BraidWord(detail::Simple::from_img(std::move(img)).word());
    }
    return r;
  }

  void encode(Bytes& out) const {
    put_u16(out, static_cast<std::uint16_t>(n));
    put_i32(out, inf);
    put_u16(out, static_cast<std::uint16_t>(factors.size()));
    for (const auto& f : factors) f.encode(out);
  }

  static GarsideNF decode(ByteReader& in) {
    GarsideNF nf;
    nf.n = in.u16();
    nf.inf = in.i32();
    const std::uint16_t k = in.u16();
    for (std::uint16_t i = 0; i < k; ++i) {
      nf.factors.push_back(Perm::decode(in));
      if (nf.factors.back().degree() > nf.n) throw DecodeError("braid factor exceeds strand count");
    }
    return nf;
  }
};

namespace detail {

struct RawNF {
  std::uint32_t n;
  std::int32_t inf;
  std::vector<Simple> factors;
};

/// Factors are stored up to a shared power of tau (conjugation by Delta), so
/// moving Delta^{+-1} to the front costs one flag toggle. Left-weighting
/// commutes with tau, so stored pairs are processed directly.
class NfBuilder {
 public:
  explicit NfBuilder(std::uint32_t n) : n_(n) {}

  void push_letter(std::int32_t l) {
    const auto i = static_cast<std::uint32_t>(std::abs(l));
    Simple x = Simple::identity(n_);
    if (l > 0) {
      x.append(i);
    } else {
      // sigma_i^-1 = Delta^-1 X with X = Delta sigma_i^-1 = sigma_{n-i}^-1 Delta
      --inf_;
      flip_ = !flip_;
      x = Simple::delta(n_);
      x.drop_front(n_ - i);
    }
    if (flip_) x = x.flipped();
    fs_.push_back(std::move(x));
    propagate(fs_.size() - 1);
  }

  RawNF finish() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t j = fs_.size(); j-- > 1;) {
        if (j >= fs_.size()) continue;
        if (left_weight(fs_[j - 1], fs_[j])) {
          changed = true;
          absorb_delta(j - 1);
        }
      }
    }
    while (!fs_.empty() && fs_.back().is_identity()) fs_.pop_back();
    RawNF nf{n_, inf_, {}};
    for (auto& f : fs_) nf.factors.push_back(flip_ ? f.flipped() : std::move(f));
    fs_.clear();
    return nf;
  }

 private:
  // Restores left-weightedness after fs_[last] was appended.
  void propagate(std::size_t last) {
    std::size_t j = last;  // fs_[j] just changed; fix pairs to its left
    while (true) {
      if (j < fs_.size() && fs_[j].is_identity() && j + 1 == fs_.size()) fs_.pop_back();
      if (absorb_delta(j)) {
        // prefix changed by tau only; its pairs stay left-weighted
      }
      if (j == 0 || j > fs_.size()) return;
      if (j == fs_.size()) {
        --j;
        continue;
      }
      if (!left_weight(fs_[j - 1], fs_[j])) {
        if (fs_[j].is_identity() && j + 1 == fs_.size()) fs_.pop_back();
        return;
      }
      if (fs_[j].is_identity() && j + 1 == fs_.size()) fs_.pop_back();
      --j;
    }
  }

  // A_1 .. A_{j-1} Delta B .. = Delta t(A_1) .. t(A_{j-1}) B ..
  bool absorb_delta(std::size_t j) {
    if (j >= fs_.size() || !fs_[j].is_delta()) return false;
    fs_.erase(fs_.begin() + static_cast<std::ptrdiff_t>(j));
    ++inf_;
    flip_ = !flip_;
    for (std::size_t t = j; t < fs_.size(); ++t) fs_[t] = fs_[t].flipped();
    return true;
  }

  std::uint32_t n_;
  std::int32_t inf_ = 0;
  bool flip_ = false;
  std::vector<Simple> fs_;
};

inline RawNF raw_normal_form(const std::vector<std::int32_t>& letters, std::uint32_t n) {
  if (n < 1) throw std::invalid_argument("strand count must be positive");
  for (auto l : letters)
    if (static_cast<std::uint32_t>(std::abs(l)) >= n)
      throw std::invalid_argument("braid letter index exceeds strand bound");
  NfBuilder b(n);
  for (auto l : letters) b.push_letter(l);
  return b.finish();
}

inline GarsideNF publish(const RawNF& raw) {
  GarsideNF nf{raw.n, raw.inf, {}};
  for (const auto& s : raw.factors) {
    std::vector<std::uint32_t> img(raw.n);
    for (std::uint32_t x = 0; x < raw.n; ++x) img[x] = s.img[x] + 1u;
    nf.factors.push_back(Perm::from_images(std::move(img)));
  }
  return nf;
}

}  // namespace detail

/// Left normal form in B_n.
inline GarsideNF normal_form(const BraidWord& w, std::uint32_t n) {
  return detail::publish(detail::raw_normal_form(w.letters(), n));
}

/// Normal form in B_n for the least n containing the braid. Independent of
/// the word chosen to represent it, so suitable for hashing and transport.
inline GarsideNF canonical_form(const BraidWord& w) {
  const std::uint32_t n = w.strands();
  detail::RawNF raw = detail::raw_normal_form(w.letters(), n);
  const auto s = static_cast<std::size_t>(raw.inf < 0 ? -raw.inf : 0);
  if (raw.inf > 0 || s > raw.factors.size()) return detail::publish(raw);
  // left fraction A^-1 B with A = dX_s t(dX_{s-1}) ... t^{s-1}(dX_1), B = X_{s+1} ... X_k
  std::vector<detail::Simple> a_factors;
  for (std::size_t j = s; j-- > 0;) {
    detail::Simple c = raw.factors[j].complement();
    if ((s - 1 - j) % 2) c = c.flipped();
    a_factors.push_back(std::move(c));
  }
  std::uint32_t n_min = 1;
  for (const auto& f : a_factors) n_min = std::max(n_min, f.support());
  for (std::size_t j = s; j < raw.factors.size(); ++j) n_min = std::max(n_min, raw.factors[j].support());
  if (n_min == n) return detail::publish(raw);
  std::vector<std::int32_t> a_word, b_word;
  for (const auto& f : a_factors) {
    auto w = f.word();
    a_word.insert(a_word.end(), w.begin(), w.end());
  }
  for (std::size_t j = s; j < raw.factors.size(); ++j) {
    auto w = raw.factors[j].word();
    b_word.insert(b_word.end(), w.begin(), w.end());
  }
  std::vector<std::int32_t> word;
  for (auto it = a_word.rbegin(); it != a_word.rend(); ++it) word.push_back(-*it);
  word.insert(word.end(), b_word.begin(), b_word.end());
  return detail::publish(detail::raw_normal_form(word, n_min));
}

inline Bytes encode_braid(const BraidWord& w) {
  Bytes out;
  canonical_form(w).encode(out);
  return out;
}

inline bool braid_eq(const BraidWord& u, const BraidWord& v) {
  const BraidWord q = u * v.inverse();
  if (q.empty()) return true;
  return normal_form(q, q.strands()).is_identity();
}

/// Commutator test [x, y] = 1.
inline bool braid_commute(const BraidWord& x, const BraidWord& y) { return braid_eq(x * y, y * x); }

/// True iff a only uses sigma_1..sigma_{2p-1} and a d^p(a) a = d^p(a) a d^p(a).
inline bool validate_gsc_element(std::uint32_t p, const BraidWord& a) {
  if (p < 1) return false;
  if (a.strands() > 2 * p) return false;
  const BraidWord sa = braid_shift(a, p);
  return braid_eq(a * sa * a, sa * a * sa);
}

struct BraidOp {
  std::uint32_t p = 1;
  BraidWord a;
  std::optional<GscParts<BraidWord>> parts;
};

/// Braids under generalized shifted conjugacy x * y = d^p(x^-1) a d^p(y) x.
/// Elements are words; normal forms are computed only for equality and
/// encoding. Random elements are freely reduced words of a fixed length in
/// sigma_1..sigma_{strands-1}.
class BraidPlatform : public OpRegistry<BraidOp> {
 public:
  using Element = BraidWord;

  BraidPlatform(std::uint32_t strands, std::uint32_t word_length)
      : strands_(strands), length_(word_length) {
    if (strands < 2) throw std::invalid_argument("braid platform needs at least 2 strands");
  }

  std::uint32_t strands() const { return strands_; }
  std::uint32_t word_length() const { return length_; }

  /// Optional parts must multiply out to a.
  OpId add_gsc(std::uint32_t p, const BraidWord& a, std::optional<GscParts<BraidWord>> parts = {}) {
    if (!validate_gsc_element(p, a))
      throw std::invalid_argument("parameter fails a d^p(a) a = d^p(a) a d^p(a) or exceeds B_2p");
    if (parts && !braid_eq(parts->left * braid_tau(p, p).pow(parts->sign) * parts->right, a))
      throw std::invalid_argument("parts do not multiply out to the parameter");
    return add_op(BraidOp{p, a, std::move(parts)});
  }

  /// Pool member of a partial multi-LD system; only the support is checked.
  OpId add_pool_gsc(std::uint32_t p, const BraidWord& a, GscParts<BraidWord> parts) {
    if (p < 1 || a.strands() > 2 * p) throw std::invalid_argument("parameter exceeds B_2p");
    return add_op(BraidOp{p, a, std::move(parts)});
  }

  const BraidOp& describe(OpId id) const { return op(id); }

  BraidWord apply(OpId id, const BraidWord& x, const BraidWord& y) const {
    const BraidOp& o = op(id);
    return braid_shift(x.inverse(), o.p) * o.a * braid_shift(y, o.p) * x;
  }

  bool equal(const BraidWord& x, const BraidWord& y) const { return braid_eq(x, y); }
  void encode(const BraidWord& x, Bytes& out) const { canonical_form(x).encode(out); }
  BraidWord decode(ByteReader& in) const { return GarsideNF::decode(in).to_word(); }

  BraidWord random_element(Rng& rng) const { return random_word(strands_, length_, rng); }

  /// Freely reduced word of exactly `length` letters in sigma_1..sigma_{n-1}.
  static BraidWord random_word(std::uint32_t n, std::uint32_t length, Rng& rng,
                               std::uint32_t first_index = 1) {
    if (n <= first_index) return BraidWord();
    const std::uint32_t gens = n - first_index;
    std::vector<std::int32_t> w;
    while (w.size() < length) {
      auto l = static_cast<std::int32_t>(first_index + rng.below(gens));
      if (rng.coin()) l = -l;
      if (!w.empty() && w.back() == -l) continue;
      w.push_back(l);
    }
    return BraidWord(std::move(w));
  }

 private:
  std::uint32_t strands_;
  std::uint32_t length_;
};

enum class PropVariant { a, b, c, d };

/// Commutator conditions for generalized shifted conjugacy with parameters
/// a_i = a_i' tau_{p,p}^{+-1} a_i'' (parts given as (a_i', a_i'')):
///  (a) [a', a''] = 1 (one operation is LD)
///  (b) [a_i', a_j'] = [a_i', a_j''] = 1 for all i, j (multi-LD)
///  (c) [a1', a1''] = [a2', a2''] = [a1', a2''] = [a2', a1''] = [a1', a2'] = 1 (bi-LD)
///  (d) [a1', a2''] = [a2', a1''] = [a1', a2'] = 1 (mutual LD)
inline bool check_prop_abc(PropVariant v, std::uint32_t p,
                           const std::vector<std::pair<BraidWord, BraidWord>>& parts) {
  for (const auto& [x, y] : parts)
    if (x.strands() > p || y.strands() > p) throw std::invalid_argument("parts must lie in B_p");
  auto need = [&](std::size_t count) {
    if (parts.size() != count) throw std::invalid_argument("wrong number of parts for this variant");
  };
  switch (v) {
    case PropVariant::a:
      need(1);
      return braid_commute(parts[0].first, parts[0].second);
    case PropVariant::b:
      if (parts.empty()) throw std::invalid_argument("no parts");
      for (const auto& pi : parts)
        for (const auto& pj : parts)
          if (!braid_commute(pi.first, pj.first) || !braid_commute(pi.first, pj.second)) return false;
      return true;
    case PropVariant::c:
      need(2);
      return braid_commute(parts[0].first, parts[0].second) &&
             braid_commute(parts[1].first, parts[1].second) &&
             braid_commute(parts[0].first, parts[1].second) &&
             braid_commute(parts[1].first, parts[0].second) &&
             braid_commute(parts[0].first, parts[1].first);
    case PropVariant::d:
      need(2);
      return braid_commute(parts[0].first, parts[1].second) &&
             braid_commute(parts[1].first, parts[0].second) &&
             braid_commute(parts[0].first, parts[1].first);
  }
  return false;
}

/// Pools of generalized shifted conjugacy operations on braids: O_A uses
/// alpha1 tau^{+-1} alpha2 with alpha1 in B_q1, alpha2 in B_q2; O_B uses
/// beta1 tau^{+-1} beta2 with beta1 in d^q2(B_{p-q2}), beta2 in d^q1(B_{p-q1}).
/// Parts are random freely reduced words of length part_length.
inline PartialMldPools build_braid_partial_mld(BraidPlatform& platform, std::uint32_t p,
                                               std::uint32_t q1, std::uint32_t q2,
                                               std::uint32_t part_length, std::size_t size_a,
                                               std::size_t size_b, Rng& rng,
                                               std::size_t verify_samples = 8) {
  check_partial_mld_shape(p, q1, q2);
  const BraidWord tau = braid_tau(p, p);
  PartialMldPools pools;
  for (std::size_t i = 0; i < size_a; ++i) {
    GscParts<BraidWord> parts{BraidPlatform::random_word(q1, part_length, rng), rng.coin() ? 1 : -1,
                              BraidPlatform::random_word(q2, part_length, rng)};
    const BraidWord a = parts.left * tau.pow(parts.sign) * parts.right;
    pools.pool_a.push_back(platform.add_pool_gsc(p, a, parts));
  }
  for (std::size_t i = 0; i < size_b; ++i) {
    GscParts<BraidWord> parts{BraidPlatform::random_word(p, part_length, rng, q2 + 1), rng.coin() ? 1 : -1,
                              BraidPlatform::random_word(p, part_length, rng, q1 + 1)};
    const BraidWord b = parts.left * tau.pow(parts.sign) * parts.right;
    pools.pool_b.push_back(platform.add_pool_gsc(p, b, parts));
  }
  if (verify_samples > 0) {
    Rng check = rng.derive("verify");
    auto triples = sample_triples<BraidWord>(verify_samples, check, [&](Rng& r) {
      return BraidPlatform::random_word(platform.strands(), 4, r);
    });
    auto report = check_mutual_distributivity(platform, std::span<const OpId>(pools.pool_a),
                                              std::span<const OpId>(pools.pool_b),
                                              std::span<const Triple<BraidWord>>(triples));
    if (!report.ok()) throw std::logic_error("built pools are not mutually left distributive");
  }
  return pools;
}

}  // namespace ldkep
