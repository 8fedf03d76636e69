#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldkep/group.hpp"
#include "ldkep/magma.hpp"
#include "ldkep/perm.hpp"

namespace ldkep {

struct PermGroup {
  using Element = Perm;
  Perm mul(const Perm& x, const Perm& y) const { return x * y; }
  Perm inv(const Perm& x) const { return x.inverse(); }
  Perm identity() const { return Perm(); }
  bool equal(const Perm& x, const Perm& y) const { return x == y; }
};

/// Decomposition a = left * tau_{p,p}^sign * right of a generalized shifted
/// conjugacy parameter.
template <class E>
struct GscParts {
  E left;
  int sign = 1;
  E right;
};

enum class ConjKind { conjugacy, symmetric, shifted };

struct PermOp {
  ConjKind kind = ConjKind::conjugacy;
  std::uint32_t p = 0;
  Perm a;
  std::optional<GscParts<Perm>> parts;
};

/// Permutation platform: conjugacy, symmetric conjugacy and generalized
/// shifted conjugacy x * y = d^p(x^-1) a d^p(y) x on finitely supported
/// permutations. Random elements are uniform in S_degree.
class PermPlatform : public OpRegistry<PermOp> {
 public:
  using Element = Perm;

  explicit PermPlatform(std::uint32_t degree) : degree_(degree) {}

  std::uint32_t degree() const { return degree_; }

  OpId add_conj() { return add_op(PermOp{ConjKind::conjugacy, 0, {}, {}}); }
  OpId add_symm_conj() { return add_op(PermOp{ConjKind::symmetric, 0, {}, {}}); }

  /// Registers x * y = d^p(x^-1) a d^p(y) x after checking that a lives in
  /// S_{2p} and satisfies a d^p(a) a = d^p(a) a d^p(a).
  /// Optional parts must multiply out to a.
  OpId add_gsc(std::uint32_t p, const Perm& a, std::optional<GscParts<Perm>> parts = {}) {
    check_support(p, a);
    const Perm sa = perm_shift(a, p);
    if (a * sa * a != sa * a * sa)
      throw std::invalid_argument("parameter fails a d^p(a) a = d^p(a) a d^p(a)");
    if (parts && parts->left * perm_pow(perm_tau(p, p), parts->sign) * parts->right != a)
      throw std::invalid_argument("parts do not multiply out to the parameter");
    return add_op(PermOp{ConjKind::shifted, p, a, std::move(parts)});
  }

  /// Pool member of a partial multi-LD system. Such an operation need not be
  /// LD on its own, so only the support is checked here; the pool builder
  /// verifies the mutual laws.
  OpId add_pool_gsc(std::uint32_t p, const Perm& a, GscParts<Perm> parts) {
    check_support(p, a);
    return add_op(PermOp{ConjKind::shifted, p, a, std::move(parts)});
  }

  Perm apply(OpId id, const Perm& x, const Perm& y) const {
    const PermOp& o = op(id);
    switch (o.kind) {
      case ConjKind::conjugacy:
        return conj(PermGroup{}, x, y);
      case ConjKind::symmetric:
        return symm_conj(PermGroup{}, x, y);
      case ConjKind::shifted:
        return perm_shift(x.inverse(), o.p) * o.a * perm_shift(y, o.p) * x;
    }
    throw std::logic_error("unknown operation kind");
  }

  const PermOp& describe(OpId id) const { return op(id); }

  bool equal(const Perm& x, const Perm& y) const { return x == y; }
  void encode(const Perm& x, Bytes& out) const { x.encode(out); }
  Perm decode(ByteReader& in) const { return Perm::decode(in); }
  Perm random_element(Rng& rng) const { return random_perm(degree_, rng); }

 private:
  static void check_support(std::uint32_t p, const Perm& a) {
    if (p < 1) throw std::invalid_argument("shifted conjugacy needs p >= 1");
    if (!a.supported_in(0, 2 * p)) throw std::invalid_argument("parameter not supported on 1..2p");
  }

  std::uint32_t degree_;
};

/// All permutations of {1..n} in lexicographic image order.
inline std::vector<Perm> all_perms(std::uint32_t n) {
  std::vector<std::uint32_t> img(n);
  for (std::uint32_t i = 0; i < n; ++i) img[i] = i + 1;
  std::vector<Perm> out;
  do {
    out.push_back(Perm::from_images(img));
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

struct PartialMldPools {
  std::vector<OpId> pool_a;
  std::vector<OpId> pool_b;
};

/// The commutation conditions only need 0 < q1 <= q2 < p; the block sizes
/// q1, p - q2 >= 3 are a security recommendation, relaxable for toy attacks.
/// q1 == q2 is admitted since the published challenge parameters use it.
inline void check_partial_mld_shape(std::uint32_t p, std::uint32_t q1, std::uint32_t q2,
                                    bool recommended = true) {
  if (!(0 < q1 && q1 <= q2 && q2 < p))
    throw std::invalid_argument("partial multi-LD shape needs 0 < q1 <= q2 < p");
  if (recommended && !(1 < q1 && q1 >= 3 && p - q2 >= 3))
    throw std::invalid_argument("partial multi-LD shape needs q1 >= 3 and p - q2 >= 3");
}

/// Pools of generalized shifted conjugacy operations on permutations:
/// O_A uses alpha = alpha1 tau^{+-1} alpha2 with alpha1 in S_q1, alpha2 in S_q2;
/// O_B uses beta = beta1 tau^{+-1} beta2 with beta1 in d^q2(S_{p-q2}),
/// beta2 in d^q1(S_{p-q1}). Every (O_A, O_B) pair is sample-checked for
/// mutual left distributivity on `verify_samples` triples.
inline PartialMldPools build_sym_partial_mld(PermPlatform& platform, std::uint32_t p,
                                             std::uint32_t q1, std::uint32_t q2,
                                             std::size_t size_a, std::size_t size_b, Rng& rng,
                                             std::size_t verify_samples = 64, bool recommended = true) {
  check_partial_mld_shape(p, q1, q2, recommended);
  const Perm tau = perm_tau(p, p);
  PartialMldPools pools;
  for (std::size_t i = 0; i < size_a; ++i) {
    GscParts<Perm> parts{random_block_perm(0, q1, rng), rng.coin() ? 1 : -1,
                         random_block_perm(0, q2, rng)};
    const Perm a = parts.left * perm_pow(tau, parts.sign) * parts.right;
    pools.pool_a.push_back(platform.add_pool_gsc(p, a, parts));
  }
  for (std::size_t i = 0; i < size_b; ++i) {
    GscParts<Perm> parts{random_block_perm(q2, p - q2, rng), rng.coin() ? 1 : -1,
                         random_block_perm(q1, p - q1, rng)};
    const Perm b = parts.left * perm_pow(tau, parts.sign) * parts.right;
    pools.pool_b.push_back(platform.add_pool_gsc(p, b, parts));
  }
  if (verify_samples > 0) {
    Rng check = rng.derive("verify");
    const std::uint32_t deg = std::max(platform.degree(), 3 * p);
    auto triples = sample_triples<Perm>(verify_samples, check,
                                        [&](Rng& r) { return random_perm(deg, r); });
    auto report = check_mutual_distributivity(platform, std::span<const OpId>(pools.pool_a),
                                              std::span<const OpId>(pools.pool_b),
                                              std::span<const Triple<Perm>>(triples));
    if (!report.ok()) throw std::logic_error("built pools are not mutually left distributive");
  }
  return pools;
}

}  // namespace ldkep
