#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldkep/braid.hpp"
#include "ldkep/bytes.hpp"
#include "ldkep/magma.hpp"
#include "ldkep/matrix.hpp"
#include "ldkep/perm_platform.hpp"
#include "ldkep/rng.hpp"

namespace ldkep {

/// Public data of one exchange: the platform with its registered operations,
/// the pools O_A and O_B, and the generators s_1..s_m of S_A and t_1..t_n
/// of S_B.
template <ProtocolPlatform P>
struct PublicParams {
  using Element = typename P::Element;

  std::shared_ptr<const P> platform;
  std::vector<OpId> pool_a, pool_b;
  std::vector<Element> s, t;
  std::uint64_t seed = 0;
  std::map<std::string, std::int64_t> meta;

  std::size_t m() const { return s.size(); }
  std::size_t n() const { return t.size(); }

  void validate() const {
    if (!platform) throw std::invalid_argument("params without platform");
    if (s.empty() || t.empty()) throw std::invalid_argument("m and n must be at least 1");
    if (pool_a.empty() || pool_b.empty()) throw std::invalid_argument("empty operation pool");
    for (OpId id : pool_a)
      if (id.platform != platform->tag()) throw std::invalid_argument("pool O_A op from another platform");
    for (OpId id : pool_b)
      if (id.platform != platform->tag()) throw std::invalid_argument("pool O_B op from another platform");
  }

  /// SHA-256 over m, n and the generator encodings.
  Digest hash() const {
    Bytes out;
    put_u32(out, static_cast<std::uint32_t>(m()));
    put_u32(out, static_cast<std::uint32_t>(n()));
    for (const auto& x : s) platform->encode(x, out);
    for (const auto& x : t) platform->encode(x, out);
    return sha256(out);
  }
};

/// Draws m + n generators from the platform's element distribution.
template <ProtocolPlatform P>
PublicParams<P> make_params(std::shared_ptr<const P> platform, std::vector<OpId> pool_a,
                            std::vector<OpId> pool_b, std::size_t m, std::size_t n, Rng& rng) {
  PublicParams<P> params;
  params.platform = std::move(platform);
  params.pool_a = std::move(pool_a);
  params.pool_b = std::move(pool_b);
  for (std::size_t i = 0; i < m; ++i) params.s.push_back(params.platform->random_element(rng));
  for (std::size_t i = 0; i < n; ++i) params.t.push_back(params.platform->random_element(rng));
  params.validate();
  return params;
}

template <class E>
struct AliceSecret {
  TreeWord a0_tree;
  IterHom<E> hom;
};

template <class E>
struct BobSecret {
  std::vector<TreeWord> b_trees;
  std::vector<OpId> ops;
  std::vector<E> b;  // evaluated trees

  IterHom<E> hom() const { return IterHom<E>{b, ops}; }
};

template <class E>
struct MsgA {
  std::vector<E> t_img;  // alpha(t_i)
  E p0;                  // alpha(a0)
};

template <class E>
struct MsgB {
  std::vector<E> s_img;  // beta(s_j)
};

inline OpId pick_op(std::span<const OpId> pool, Rng& rng) { return pool[rng.below(pool.size())]; }

template <ProtocolPlatform P>
AliceSecret<typename P::Element> alice_keygen(const PublicParams<P>& params, std::size_t k_a,
                                              std::size_t l_a, Rng& rng) {
  if (k_a < 1) throw std::invalid_argument("iteration depth must be at least 1");
  AliceSecret<typename P::Element> sk;
  sk.a0_tree = random_tree(l_a, params.m(), params.pool_a, rng);
  for (std::size_t i = 0; i < k_a; ++i) {
    sk.hom.xs.push_back(params.platform->random_element(rng));
    sk.hom.ops.push_back(pick_op(params.pool_a, rng));
  }
  return sk;
}

template <ProtocolPlatform P>
BobSecret<typename P::Element> bob_keygen(const PublicParams<P>& params, std::size_t k_b,
                                          std::size_t l_b, Rng& rng) {
  if (k_b < 1) throw std::invalid_argument("iteration depth must be at least 1");
  BobSecret<typename P::Element> sk;
  for (std::size_t j = 0; j < k_b; ++j) {
    sk.b_trees.push_back(random_tree(l_b, params.n(), params.pool_b, rng));
    sk.ops.push_back(pick_op(params.pool_b, rng));
  }
  for (const auto& tree : sk.b_trees)
    sk.b.push_back(eval_tree(*params.platform, tree, std::span<const typename P::Element>(params.t)));
  return sk;
}

template <ProtocolPlatform P>
MsgA<typename P::Element> alice_message(const PublicParams<P>& params,
                                        const AliceSecret<typename P::Element>& sk) {
  using E = typename P::Element;
  MsgA<E> msg;
  for (const auto& t : params.t) msg.t_img.push_back(iter_apply(*params.platform, sk.hom, t));
  const E a0 = eval_tree(*params.platform, sk.a0_tree, std::span<const E>(params.s));
  msg.p0 = iter_apply(*params.platform, sk.hom, a0);
  return msg;
}

template <ProtocolPlatform P>
MsgB<typename P::Element> bob_message(const PublicParams<P>& params,
                                      const BobSecret<typename P::Element>& sk) {
  MsgB<typename P::Element> msg;
  const auto h = sk.hom();
  for (const auto& s : params.s) msg.s_img.push_back(iter_apply(*params.platform, h, s));
  return msg;
}

/// K_A = alpha(beta(a0)) with beta(a0) = T_A(beta(s_1), ..., beta(s_m)).
template <ProtocolPlatform P>
typename P::Element alice_shared(const PublicParams<P>& params, const AliceSecret<typename P::Element>& sk,
                                 const MsgB<typename P::Element>& msg) {
  using E = typename P::Element;
  if (msg.s_img.size() != params.m()) throw std::invalid_argument("MsgB length does not match m");
  const E beta_a0 = eval_tree(*params.platform, sk.a0_tree, std::span<const E>(msg.s_img));
  return iter_apply(*params.platform, sk.hom, beta_a0);
}

/// K_B = alpha(b_k) *_{B_k} ( ... (alpha(b_1) *_{B_1} p0) ... ).
template <ProtocolPlatform P>
typename P::Element bob_shared(const PublicParams<P>& params, const BobSecret<typename P::Element>& sk,
                               const MsgA<typename P::Element>& msg) {
  using E = typename P::Element;
  if (msg.t_img.size() != params.n()) throw std::invalid_argument("MsgA length does not match n");
  E acc = msg.p0;
  for (std::size_t j = 0; j < sk.b_trees.size(); ++j) {
    const E alpha_bj = eval_tree(*params.platform, sk.b_trees[j], std::span<const E>(msg.t_img));
    acc = params.platform->apply(sk.ops[j], alpha_bj, acc);
  }
  return acc;
}

/// SHA-256 of the canonical encoding.
template <Platform P>
Digest derive_key_bytes(const P& platform, const typename P::Element& k) {
  return sha256(encode_element(platform, k));
}

template <ProtocolPlatform P>
Bytes encode_msg_a(const PublicParams<P>& params, const MsgA<typename P::Element>& msg) {
  Bytes out;
  for (const auto& x : msg.t_img) params.platform->encode(x, out);
  params.platform->encode(msg.p0, out);
  return out;
}

template <ProtocolPlatform P>
Bytes encode_msg_b(const PublicParams<P>& params, const MsgB<typename P::Element>& msg) {
  Bytes out;
  for (const auto& x : msg.s_img) params.platform->encode(x, out);
  return out;
}

template <ProtocolPlatform P>
MsgA<typename P::Element> decode_msg_a(const PublicParams<P>& params, std::span<const std::uint8_t> data) {
  ByteReader in(data);
  MsgA<typename P::Element> msg;
  for (std::size_t i = 0; i < params.n(); ++i) msg.t_img.push_back(params.platform->decode(in));
  msg.p0 = params.platform->decode(in);
  if (!in.done()) throw DecodeError("trailing bytes after MsgA");
  return msg;
}

template <ProtocolPlatform P>
MsgB<typename P::Element> decode_msg_b(const PublicParams<P>& params, std::span<const std::uint8_t> data) {
  ByteReader in(data);
  MsgB<typename P::Element> msg;
  for (std::size_t i = 0; i < params.m(); ++i) msg.s_img.push_back(params.platform->decode(in));
  if (!in.done()) throw DecodeError("trailing bytes after MsgB");
  return msg;
}

/// Inclusive ranges for the secret sizes; each session draws its own.
struct SessionShape {
  std::size_t k_a_min = 1, k_a_max = 1;
  std::size_t k_b_min = 1, k_b_max = 1;
  std::size_t l_a_min = 0, l_a_max = 0;
  std::size_t l_b_min = 0, l_b_max = 0;

  static SessionShape fixed(std::size_t k, std::size_t l) { return {k, k, k, k, l, l, l, l}; }
  static SessionShape ranged(std::size_t k_lo, std::size_t k_hi, std::size_t l_lo, std::size_t l_hi) {
    return {k_lo, k_hi, k_lo, k_hi, l_lo, l_hi, l_lo, l_hi};
  }
};

template <class E>
struct Transcript {
  MsgA<E> msg_a;
  MsgB<E> msg_b;
  E key_a, key_b;
  Digest key_bytes{};
  std::uint64_t seed = 0;
  std::size_t k_a = 0, k_b = 0, l_a = 0, l_b = 0;
  std::size_t retries = 0;
  std::map<std::string, double> timings_ms;
  AliceSecret<E> alice;  // kept for white-box checks; never serialized
  BobSecret<E> bob;
};

inline std::size_t draw_in(std::size_t lo, std::size_t hi, Rng& rng) {
  if (hi < lo) throw std::invalid_argument("empty size range");
  return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
}

constexpr int kKeygenAttempts = 100;

/// Runs all four steps with secrets drawn from the "alice" and "bob" streams
/// of `seed`. Secrets that make an operation reject its operands are redrawn,
/// at most kKeygenAttempts times. Throws std::logic_error if K_A != K_B.
template <ProtocolPlatform P>
Transcript<typename P::Element> run_session(const PublicParams<P>& params, const SessionShape& shape,
                                            std::uint64_t seed) {
  using Clock = std::chrono::steady_clock;
  auto ms_since = [](Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  };
  const Rng root(seed);
  Rng shape_rng = root.derive("shape");
  Rng alice_rng = root.derive("alice");
  Rng bob_rng = root.derive("bob");

  Transcript<typename P::Element> tr;
  tr.seed = seed;
  tr.k_a = draw_in(shape.k_a_min, shape.k_a_max, shape_rng);
  tr.k_b = draw_in(shape.k_b_min, shape.k_b_max, shape_rng);
  tr.l_a = draw_in(shape.l_a_min, shape.l_a_max, shape_rng);
  tr.l_b = draw_in(shape.l_b_min, shape.l_b_max, shape_rng);

  for (int attempt = 0;; ++attempt) {
    if (attempt == kKeygenAttempts) throw OperationRejected("key generation retry budget exhausted");
    try {
      auto t0 = Clock::now();
      tr.alice = alice_keygen(params, tr.k_a, tr.l_a, alice_rng);
      tr.bob = bob_keygen(params, tr.k_b, tr.l_b, bob_rng);
      tr.timings_ms["keygen"] = ms_since(t0);
      t0 = Clock::now();
      tr.msg_a = alice_message(params, tr.alice);
      tr.msg_b = bob_message(params, tr.bob);
      tr.timings_ms["messages"] = ms_since(t0);
      t0 = Clock::now();
      tr.key_a = alice_shared(params, tr.alice, tr.msg_b);
      tr.key_b = bob_shared(params, tr.bob, tr.msg_a);
      tr.timings_ms["shared"] = ms_since(t0);
      break;
    } catch (const OperationRejected&) {
      ++tr.retries;
    }
  }
  if (!params.platform->equal(tr.key_a, tr.key_b)) throw std::logic_error("shared keys differ");
  tr.key_bytes = derive_key_bytes(*params.platform, tr.key_a);
  return tr;
}

/// Protocol 1: the same engine with |O_A| = |O_B| = 1.
template <ProtocolPlatform P>
PublicParams<P> protocol1_params(std::shared_ptr<const P> platform, OpId op, std::size_t m, std::size_t n,
                                 Rng& rng) {
  return make_params(std::move(platform), {op}, {op}, m, n, rng);
}

// ---------------------------------------------------------------------------
// Closed forms for Bob's public key

/// Group operations and shift for the generalized shifted conjugacy formula.
template <class E>
struct GscAlgebra;

template <>
struct GscAlgebra<Perm> {
  static Perm mul(const Perm& a, const Perm& b) { return a * b; }
  static Perm inv(const Perm& a) { return a.inverse(); }
  static Perm shift(const Perm& a, std::uint32_t p) { return perm_shift(a, p); }
  static Perm one() { return Perm(); }
  static Perm tau_eps(std::uint32_t p, const std::vector<int>& eps) { return perm_tau_eps(p, eps); }
};

template <>
struct GscAlgebra<BraidWord> {
  static BraidWord mul(const BraidWord& a, const BraidWord& b) { return a * b; }
  static BraidWord inv(const BraidWord& a) { return a.inverse(); }
  static BraidWord shift(const BraidWord& a, std::uint32_t p) { return braid_shift(a, p); }
  static BraidWord one() { return BraidWord(); }
  static BraidWord tau_eps(std::uint32_t p, const std::vector<int>& eps) { return braid_tau_eps(p, eps); }
};

/// The parts of Bob's operations needed by the shifted-conjugacy formula.
template <class E>
struct GscSecrets {
  std::uint32_t p = 0;
  std::vector<E> b;                    // b_1..b_k
  std::vector<GscParts<E>> parts;      // beta_j = beta'_j tau^{eps_j} beta''_j
};

template <class E>
struct GscAggregates {
  E b_tilde, beta1_tilde, beta2_tilde, tau;
};

/// b~ = d^{(k-1)p}(b_1) ... d^p(b_{k-1}) b_k, beta~' = beta'_k ... beta'_1,
/// beta~'' = beta''_k d^p(beta''_{k-1}) ... d^{(k-1)p}(beta''_1), tau(p, eps).
template <class E>
GscAggregates<E> gsc_aggregates(const GscSecrets<E>& sec) {
  using A = GscAlgebra<E>;
  const std::size_t k = sec.b.size();
  if (k == 0 || sec.parts.size() != k) throw std::invalid_argument("secret vectors differ in length");
  GscAggregates<E> g{A::one(), A::one(), A::one(), A::one()};
  std::vector<int> eps;
  for (std::size_t j = 0; j < k; ++j) {
    const auto off = static_cast<std::uint32_t>((k - 1 - j) * sec.p);
    g.b_tilde = A::mul(g.b_tilde, A::shift(sec.b[j], off));
    g.beta1_tilde = A::mul(sec.parts[j].left, g.beta1_tilde);
    g.beta2_tilde = A::mul(A::shift(sec.parts[j].right, off), g.beta2_tilde);
    eps.push_back(sec.parts[j].sign);
  }
  g.tau = A::tau_eps(sec.p, eps);
  return g;
}

/// s' = d^p(b~^-1) beta~' d^p(beta~'') tau(p, eps) d^{kp}(s) b~.
template <class E>
E closed_form_gsc(const GscSecrets<E>& sec, const E& s) {
  using A = GscAlgebra<E>;
  const auto g = gsc_aggregates(sec);
  const auto k = static_cast<std::uint32_t>(sec.b.size());
  E r = A::shift(A::inv(g.b_tilde), sec.p);
  r = A::mul(r, g.beta1_tilde);
  r = A::mul(r, A::shift(g.beta2_tilde, sec.p));
  r = A::mul(r, g.tau);
  r = A::mul(r, A::shift(s, k * sec.p));
  return A::mul(r, g.b_tilde);
}

/// Collects b_j and the parts of Bob's operations from a permutation or
/// braid platform; every operation must be a pool member with parts.
template <class Plat>
GscSecrets<typename Plat::Element> gsc_secrets(const Plat& platform, const BobSecret<typename Plat::Element>& sk) {
  GscSecrets<typename Plat::Element> sec;
  sec.b = sk.b;
  for (std::size_t j = 0; j < sk.ops.size(); ++j) {
    const auto& d = platform.describe(sk.ops[j]);
    if (!d.parts) throw std::invalid_argument("operation has no recorded parts");
    if (j == 0) sec.p = d.p;
    if (d.p != sec.p) throw std::invalid_argument("operations use different shifts");
    sec.parts.push_back(*d.parts);
  }
  return sec;
}

/// f^k(x), applied one step at a time.
template <class Ring>
Mat<typename Ring::Element> endo_power(const MatrixAlgebra<Ring>& alg, const EndoSpec& f,
                                       Mat<typename Ring::Element> x, std::size_t k) {
  for (std::size_t i = 0; i < k; ++i) x = alg.apply_endo(f, x);
  return x;
}

/// f-conjugacy: s' = f(b~^-1) f^k(s) b~ with b~ = f^{k-1}(b_1) ... f(b_{k-1}) b_k.
template <class Ring>
Mat<typename Ring::Element> closed_form_fconj(const MatrixAlgebra<Ring>& alg, const EndoSpec& f,
                                              const std::vector<Mat<typename Ring::Element>>& b,
                                              const Mat<typename Ring::Element>& s) {
  const std::size_t k = b.size();
  if (k == 0) throw std::invalid_argument("empty secret");
  auto bt = alg.identity();
  for (std::size_t j = 0; j < k; ++j) bt = alg.mul(bt, endo_power(alg, f, b[j], k - 1 - j));
  const auto head = alg.apply_endo(f, alg.inverse(bt));
  return alg.mul(alg.mul(head, endo_power(alg, f, s, k)), bt);
}

/// f-symmetric conjugacy, k odd:  f(b_k b_{k-1}^-1 ... b_2^-1 b_1) f(s^-1) f(b_1 b_2^-1 ... b_{k-1}^-1) b_k,
///                          k even: f(b_k b_{k-1}^-1 ... b_2 b_1^-1) f(s) f(b_1^-1 b_2 ... b_{k-1}^-1) b_k.
template <class Ring>
Mat<typename Ring::Element> closed_form_fsymm(const MatrixAlgebra<Ring>& alg, const EndoSpec& f,
                                              const std::vector<Mat<typename Ring::Element>>& b,
                                              const Mat<typename Ring::Element>& s) {
  const std::size_t k = b.size();
  if (k == 0) throw std::invalid_argument("empty secret");
  auto signed_b = [&](std::size_t j, bool positive) { return positive ? b[j - 1] : alg.inverse(b[j - 1]); };
  auto left = alg.identity();
  for (std::size_t j = k; j >= 1; --j) left = alg.mul(left, signed_b(j, (k - j) % 2 == 0));
  auto right = alg.identity();
  for (std::size_t j = 1; j < k; ++j) right = alg.mul(right, signed_b(j, (j + k) % 2 == 0));
  const auto mid = k % 2 ? alg.inverse(s) : s;
  auto r = alg.mul(alg.apply_endo(f, left), alg.apply_endo(f, mid));
  r = alg.mul(r, alg.apply_endo(f, right));
  return alg.mul(r, b[k - 1]);
}

/// Bob's public key from his raw secrets, for the platforms with a closed
/// form: generalized shifted conjugacy on permutations and braids, and
/// f-(symmetric) conjugacy on matrices (all of Bob's operations equal).
inline Perm closed_form_bob_public(const PermPlatform& platform, const BobSecret<Perm>& sk, const Perm& s) {
  return closed_form_gsc(gsc_secrets(platform, sk), s);
}

inline BraidWord closed_form_bob_public(const BraidPlatform& platform, const BobSecret<BraidWord>& sk,
                                        const BraidWord& s) {
  return closed_form_gsc(gsc_secrets(platform, sk), s);
}

template <class Ring>
Mat<typename Ring::Element> closed_form_bob_public(const MatrixPlatform<Ring>& platform,
                                                   const BobSecret<Mat<typename Ring::Element>>& sk,
                                                   const Mat<typename Ring::Element>& s) {
  if (sk.ops.empty()) throw std::invalid_argument("empty secret");
  const MatOp& o = platform.describe(sk.ops.front());
  for (OpId id : sk.ops) {
    const MatOp& d = platform.describe(id);
    if (d.kind != o.kind || !(d.f == o.f)) throw std::invalid_argument("closed form needs a single operation");
  }
  if (o.kind == MatOpKind::fconj) return closed_form_fconj(platform.algebra(), o.f, sk.b, s);
  return closed_form_fsymm(platform.algebra(), o.f, sk.b, s);
}

}  // namespace ldkep
