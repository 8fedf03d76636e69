#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ldkep/magma.hpp"
#include "ldkep/matrix.hpp"
#include "ldkep/perm_platform.hpp"
#include "ldkep/protocol.hpp"
#include "ldkep/reach.hpp"

namespace ldkep {

// ---------------------------------------------------------------------------
// Search budgets

struct SearchBudget {
  std::uint64_t max_candidates = 5'000'000;
  std::size_t max_depth = 3;     // iteration depth k'
  std::size_t max_internal = 3;  // tree size for membership search
  std::size_t max_closure = 200'000;
};

struct SearchStats {
  std::uint64_t explored = 0;
  bool budget_hit = false;
};

namespace detail {

inline bool spend(const SearchBudget& budget, SearchStats& stats) {
  if (stats.explored >= budget.max_candidates) {
    stats.budget_hit = true;
    return false;
  }
  ++stats.explored;
  return true;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Submagma membership search

/// Breadth-first closure of <gens> under a pool, by internal-node count. Each
/// element keeps the first tree found for it, which therefore has the fewest
/// internal nodes.
template <Platform P>
class SubmagmaIndex {
 public:
  using E = typename P::Element;

  SubmagmaIndex(const P& platform, std::vector<E> gens, std::vector<OpId> pool, std::size_t max_internal,
                std::size_t max_size, const E* stop_at = nullptr)
      : platform_(&platform), gens_(std::move(gens)), pool_(std::move(pool)) {
    levels_.emplace_back();
    for (std::uint32_t i = 0; i < gens_.size(); ++i)
      if (insert(gens_[i], TreeWord::leaf(i), 0) && stop_at && platform.equal(gens_[i], *stop_at)) return;
    for (std::size_t n = 1; n <= max_internal; ++n) {
      levels_.emplace_back();
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = n - 1 - i;
        for (std::size_t li = 0; li < levels_[i].size(); ++li)
          for (std::size_t ri = 0; ri < levels_[j].size(); ++ri)
            for (OpId op : pool_) {
              const std::size_t lx = levels_[i][li], rx = levels_[j][ri];
              E v;
              try {
                v = platform.apply(op, values_[lx], values_[rx]);
              } catch (const OperationRejected&) {
                continue;
              }
              const bool fresh = insert(v, TreeWord::node(op, trees_[lx], trees_[rx]), n);
              if (fresh && stop_at && platform.equal(values_.back(), *stop_at)) return;
              if (values_.size() >= max_size) {
                truncated_ = true;
                return;
              }
            }
      }
      if (levels_.back().empty()) break;
    }
  }

  std::optional<TreeWord> find(const E& x) const {
    auto it = index_.find(encode_element(*platform_, x));
    if (it == index_.end()) return std::nullopt;
    return trees_[it->second];
  }

  bool contains(const E& x) const { return index_.count(encode_element(*platform_, x)) > 0; }
  const std::vector<E>& elements() const { return values_; }
  const std::vector<TreeWord>& trees() const { return trees_; }
  bool truncated() const { return truncated_; }

 private:
  bool insert(const E& v, TreeWord tree, std::size_t level) {
    auto [it, fresh] = index_.emplace(encode_element(*platform_, v), values_.size());
    if (!fresh) return false;
    values_.push_back(v);
    trees_.push_back(std::move(tree));
    levels_[level].push_back(values_.size() - 1);
    return true;
  }

  const P* platform_;
  std::vector<E> gens_;
  std::vector<OpId> pool_;
  std::map<Bytes, std::size_t> index_;
  std::vector<E> values_;
  std::vector<TreeWord> trees_;
  std::vector<std::vector<std::size_t>> levels_;
  bool truncated_ = false;
};

/// O-MSP: a tree over `gens` with operations from `pool` evaluating to target.
template <Platform P>
std::optional<TreeWord> brute_force_msp(const P& platform, const typename P::Element& target,
                                        const std::vector<typename P::Element>& gens,
                                        const std::vector<OpId>& pool, std::size_t max_internal,
                                        std::size_t max_size = 200'000) {
  SubmagmaIndex<P> idx(platform, gens, pool, max_internal, max_size, &target);
  return idx.find(target);
}

// ---------------------------------------------------------------------------
// Iterated LD problems

/// Pairs (x_i, y_i) with y_i = phi(x_i) for an unknown iterated left
/// multiplication with factors from `domain` and operations from `pool`.
template <class E>
struct SimItLdpInstance {
  std::vector<std::pair<E, E>> pairs;
  std::vector<OpId> pool;
  std::vector<E> domain;
  std::size_t max_depth = 3;
};

namespace detail {

/// Depth-first enumeration of (x, op) vectors of length k, in lexicographic
/// order of (domain index, pool index) per step; `accept` sees every vector
/// whose images match all targets.
template <Platform P, class Accept>
bool iter_hom_dfs(const P& platform, const SimItLdpInstance<typename P::Element>& inst, std::size_t k,
                  IterHom<typename P::Element>& hom, std::vector<typename P::Element>& images,
                  const SearchBudget& budget, SearchStats& stats, Accept& accept) {
  using E = typename P::Element;
  if (hom.depth() == k) {
    for (std::size_t i = 0; i < images.size(); ++i)
      if (!platform.equal(images[i], inst.pairs[i].second)) return false;
    return accept(hom);
  }
  for (const E& x : inst.domain)
    for (OpId op : inst.pool) {
      if (!spend(budget, stats)) return false;
      std::vector<E> next;
      next.reserve(images.size());
      bool ok = true;
      for (const E& y : images) {
        try {
          next.push_back(platform.apply(op, x, y));
        } catch (const OperationRejected&) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      hom.xs.push_back(x);
      hom.ops.push_back(op);
      std::swap(images, next);
      if (iter_hom_dfs(platform, inst, k, hom, images, budget, stats, accept)) return true;
      std::swap(images, next);
      hom.xs.pop_back();
      hom.ops.pop_back();
      if (stats.budget_hit) return false;
    }
  return false;
}

template <Platform P, class Accept>
std::optional<IterHom<typename P::Element>> search_iter_hom(const P& platform,
                                                            const SimItLdpInstance<typename P::Element>& inst,
                                                            const SearchBudget& budget, SearchStats& stats,
                                                            Accept accept) {
  using E = typename P::Element;
  if (inst.domain.empty() || inst.pool.empty()) throw std::invalid_argument("empty search domain");
  for (std::size_t k = 1; k <= inst.max_depth; ++k) {
    IterHom<E> hom;
    std::vector<E> images;
    for (const auto& pr : inst.pairs) images.push_back(pr.first);
    if (iter_hom_dfs(platform, inst, k, hom, images, budget, stats, accept)) return hom;
    if (stats.budget_hit) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace detail

/// First (k', b', o') in enumeration order with phi(x_i) = y_i for all pairs.
template <Platform P>
std::optional<IterHom<typename P::Element>> brute_force_sim_it_ldp(const P& platform,
                                                                   const SimItLdpInstance<typename P::Element>& inst,
                                                                   const SearchBudget& budget, SearchStats& stats) {
  return detail::search_iter_hom(platform, inst, budget, stats, [](const auto&) { return true; });
}

template <class E>
struct ModPseudoKey {
  E a0;
  IterHom<E> hom;
};

/// Modified problem: additionally some a0 in `a0_domain` with phi(a0) = p0.
template <Platform P>
std::optional<ModPseudoKey<typename P::Element>> brute_force_mod_sim_it_ldp(
    const P& platform, const SimItLdpInstance<typename P::Element>& inst, const typename P::Element& p0,
    const std::vector<typename P::Element>& a0_domain, const SearchBudget& budget, SearchStats& stats) {
  using E = typename P::Element;
  std::optional<E> a0;
  auto accept = [&](const IterHom<E>& hom) {
    for (const E& cand : a0_domain) {
      try {
        if (platform.equal(iter_apply(platform, hom, cand), p0)) {
          a0 = cand;
          return true;
        }
      } catch (const OperationRejected&) {
      }
    }
    return false;
  };
  auto hom = detail::search_iter_hom(platform, inst, budget, stats, accept);
  if (!hom) return std::nullopt;
  return ModPseudoKey<E>{*a0, *hom};
}

// ---------------------------------------------------------------------------
// Key reconstruction routes

enum class AttackRoute { bob, alice_msp, alice_homsp, alice_mod };

inline const char* route_name(AttackRoute r) {
  switch (r) {
    case AttackRoute::bob:
      return "bob";
    case AttackRoute::alice_msp:
      return "alice-3.4";
    case AttackRoute::alice_homsp:
      return "alice-3.5";
    case AttackRoute::alice_mod:
      return "alice-3.6";
  }
  return "?";
}

inline AttackRoute parse_route(const std::string& s) {
  for (auto r : {AttackRoute::bob, AttackRoute::alice_msp, AttackRoute::alice_homsp, AttackRoute::alice_mod})
    if (s == route_name(r)) return r;
  throw std::invalid_argument("unknown attack route: " + s);
}

template <class E>
struct AttackResult {
  std::optional<Digest> key;
  std::optional<E> key_element;
  SearchStats stats;
  std::size_t k_a = 0, k_b = 0;  // pseudo iteration depths found
  bool used_a0 = false;          // whether a pseudo a0 was searched for
  std::string failure;
};

/// Exhaustive attacker view of a finite platform: the whole carrier, and the
/// submagmas S_A, S_B enumerated up to the tree-size budget.
template <ProtocolPlatform P>
struct AttackContext {
  using E = typename P::Element;
  const PublicParams<P>* params;
  std::vector<E> carrier;
  SearchBudget budget;

  SubmagmaIndex<P> s_a() const {
    return SubmagmaIndex<P>(*params->platform, params->s, params->pool_a, budget.max_internal, budget.max_closure);
  }
  SubmagmaIndex<P> s_b() const {
    return SubmagmaIndex<P>(*params->platform, params->t, params->pool_b, budget.max_internal, budget.max_closure);
  }
};

namespace detail {

template <class E>
SimItLdpInstance<E> instance_from(const std::vector<E>& xs, const std::vector<E>& ys, std::vector<OpId> pool,
                                  std::vector<E> domain, std::size_t max_depth) {
  SimItLdpInstance<E> inst;
  for (std::size_t i = 0; i < xs.size(); ++i) inst.pairs.emplace_back(xs[i], ys[i]);
  inst.pool = std::move(pool);
  inst.domain = std::move(domain);
  inst.max_depth = max_depth;
  return inst;
}

template <ProtocolPlatform P>
typename P::Element fold_with_p0(const P& platform, const std::vector<typename P::Element>& alpha_b,
                                 const std::vector<OpId>& ops, typename P::Element acc) {
  for (std::size_t j = 0; j < alpha_b.size(); ++j) acc = platform.apply(ops[j], alpha_b[j], acc);
  return acc;
}

}  // namespace detail

/// Attack on Bob's key: generalized HomSP for (S_A, S_B) gives b' in S_B^k'
/// with phi_b'(s_i) = s'_i, O_B-MSP expresses each b'_j over t, and the fold
/// of alpha(b'_j) = T_j(t') over p0 yields the key.
template <ProtocolPlatform P>
AttackResult<typename P::Element> break_p2_bob(const AttackContext<P>& ctx, const MsgA<typename P::Element>& ma,
                                               const MsgB<typename P::Element>& mb) {
  using E = typename P::Element;
  const auto& params = *ctx.params;
  const P& plat = *params.platform;
  AttackResult<E> res;
  const auto sb = ctx.s_b();
  auto inst = detail::instance_from(params.s, mb.s_img, params.pool_b, sb.elements(), ctx.budget.max_depth);
  auto hom = brute_force_sim_it_ldp(plat, inst, ctx.budget, res.stats);
  if (!hom) {
    res.failure = "generalized HomSP for (S_A, S_B) not solved";
    return res;
  }
  BobSecret<E> pseudo;
  for (std::size_t j = 0; j < hom->depth(); ++j) {
    auto tree = brute_force_msp(plat, hom->xs[j], params.t, params.pool_b, ctx.budget.max_internal,
                                ctx.budget.max_closure);
    if (!tree) {
      res.failure = "O_B-MSP not solved";
      return res;
    }
    pseudo.b_trees.push_back(*tree);
    pseudo.ops.push_back(hom->ops[j]);
  }
  res.k_b = hom->depth();
  const E k = bob_shared(params, pseudo, ma);
  res.key_element = k;
  res.key = derive_key_bytes(plat, k);
  return res;
}

/// Attack on Alice's key by one of the three remaining routes.
///  alice-3.4: generalized modHomSP for (S_B, S_A) gives (a0' in S_A, a');
///             O_A-MSP expresses a0' over s; K = phi_a'(T(s')).
///  alice-3.5: HomSP for S_B gives a'; generalized HomSP for (S_A, S_B) gives
///             b' in S_B; K = fold of phi_a'(b'_j) over p0. No pseudo a0.
///  alice-3.6: generalized modHomSP gives (a0', a'); HomSP for S_A gives any
///             b' in L; K = phi_a'(phi_b'(a0')).
template <ProtocolPlatform P>
AttackResult<typename P::Element> break_p2_alice(const AttackContext<P>& ctx, AttackRoute route,
                                                 const MsgA<typename P::Element>& ma,
                                                 const MsgB<typename P::Element>& mb) {
  using E = typename P::Element;
  const auto& params = *ctx.params;
  const P& plat = *params.platform;
  const auto& B = ctx.budget;
  AttackResult<E> res;
  auto alice_inst = detail::instance_from(params.t, ma.t_img, params.pool_a, ctx.carrier, B.max_depth);

  if (route == AttackRoute::alice_msp || route == AttackRoute::alice_mod) {
    const auto sa = ctx.s_a();
    auto pk = brute_force_mod_sim_it_ldp(plat, alice_inst, ma.p0, sa.elements(), B, res.stats);
    res.used_a0 = true;
    if (!pk) {
      res.failure = "generalized modHomSP for (S_B, S_A) not solved";
      return res;
    }
    res.k_a = pk->hom.depth();
    if (route == AttackRoute::alice_msp) {
      auto tree = brute_force_msp(plat, pk->a0, params.s, params.pool_a, B.max_internal, B.max_closure);
      if (!tree) {
        res.failure = "O_A-MSP not solved";
        return res;
      }
      AliceSecret<E> pseudo;
      pseudo.a0_tree = *tree;
      pseudo.hom = pk->hom;
      res.key_element = alice_shared(params, pseudo, mb);
    } else {
      auto bob_inst = detail::instance_from(params.s, mb.s_img, params.pool_b, ctx.carrier, B.max_depth);
      auto hb = brute_force_sim_it_ldp(plat, bob_inst, B, res.stats);
      if (!hb) {
        res.failure = "HomSP for S_A not solved";
        return res;
      }
      res.k_b = hb->depth();
      res.key_element = iter_apply(plat, pk->hom, iter_apply(plat, *hb, pk->a0));
    }
  } else if (route == AttackRoute::alice_homsp) {
    auto ha = brute_force_sim_it_ldp(plat, alice_inst, B, res.stats);
    if (!ha) {
      res.failure = "HomSP for S_B not solved";
      return res;
    }
    res.k_a = ha->depth();
    const auto sb = ctx.s_b();
    auto bob_inst = detail::instance_from(params.s, mb.s_img, params.pool_b, sb.elements(), B.max_depth);
    auto hb = brute_force_sim_it_ldp(plat, bob_inst, B, res.stats);
    if (!hb) {
      res.failure = "generalized HomSP for (S_A, S_B) not solved";
      return res;
    }
    res.k_b = hb->depth();
    std::vector<E> alpha_b;
    for (const E& b : hb->xs) alpha_b.push_back(iter_apply(plat, *ha, b));
    res.key_element = detail::fold_with_p0(plat, alpha_b, hb->ops, ma.p0);
  } else {
    throw std::invalid_argument("route bob is handled by break_p2_bob");
  }
  res.key = derive_key_bytes(plat, *res.key_element);
  return res;
}

template <ProtocolPlatform P>
AttackResult<typename P::Element> run_attack(const AttackContext<P>& ctx, AttackRoute route,
                                             const MsgA<typename P::Element>& ma,
                                             const MsgB<typename P::Element>& mb) {
  if (route == AttackRoute::bob) return break_p2_bob(ctx, ma, mb);
  return break_p2_alice(ctx, route, ma, mb);
}

// ---------------------------------------------------------------------------
// Special decomposition problem to SCCP, symmetric quotient

/// Permutations fixing every point outside the blocks (lo, hi] and mapping
/// each block into itself.
struct BlockSubgroup {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> blocks;

  bool contains(const Perm& x) const {
    std::vector<std::uint32_t> owner(x.degree() + 1, 0);
    for (std::size_t b = 0; b < blocks.size(); ++b)
      for (std::uint32_t i = blocks[b].first + 1; i <= std::min(blocks[b].second, x.degree()); ++i)
        owner[i] = static_cast<std::uint32_t>(b + 1);
    for (std::uint32_t i = 1; i <= x.degree(); ++i) {
      const std::uint32_t xi = x(i);
      if (owner[i] == 0) {
        if (xi != i) return false;
      } else if (xi > x.degree() || owner[xi] != owner[i]) {
        return false;
      }
    }
    return true;
  }
};

/// Find h in H, c in K with c x c^-1 = h y.
struct SccpInstance {
  Perm x, y;
  BlockSubgroup h, k;
  std::uint32_t n = 0;  // ambient S_N
  std::uint32_t depth = 0;
};

struct SccpSolution {
  Perm h, c;
};

inline std::uint32_t sccp_ambient_degree(std::uint32_t p, std::uint32_t k, const Perm& s_prime) {
  std::uint32_t n = (k + 1) * p;
  while (n < s_prime.degree()) n += p;
  return n;
}

/// x = tau_{p,N-p}^-1 s', y = tau_{p,N-p}^-1 tau(p, eps) d^{kp}(s),
/// H = d^{N-p+q2}(S_{p-q2}) * prod_j d^{(j-1)p+q1}(S_{p-q1}), K = S_{N-p}.
inline SccpInstance sdp_to_sccp(std::uint32_t p, std::uint32_t q1, std::uint32_t q2, std::uint32_t k,
                                std::uint32_t n, const Perm& s, const Perm& s_prime, const std::vector<int>& eps) {
  if (p == 0 || k == 0) throw std::invalid_argument("sdp_to_sccp needs p, k >= 1");
  if (n % p != 0) throw std::invalid_argument("sdp_to_sccp needs p | N");
  if (n < (k + 1) * p) throw std::invalid_argument("sdp_to_sccp needs N >= (k+1)p");
  if (!(q1 <= q2 && q2 < p)) throw std::invalid_argument("sdp_to_sccp needs q1 <= q2 < p");
  if (eps.size() != k) throw std::invalid_argument("sign vector length differs from k");
  if (s_prime.degree() > n || s.degree() + k * p > n) throw std::invalid_argument("elements exceed S_N");
  const Perm tinv = perm_tau(p, n - p).inverse();
  SccpInstance inst;
  inst.n = n;
  inst.depth = k;
  inst.x = tinv * s_prime;
  inst.y = tinv * perm_tau_eps(p, eps) * perm_shift(s, k * p);
  inst.h.blocks.emplace_back(n - p + q2, n);
  for (std::uint32_t j = 1; j <= k; ++j) inst.h.blocks.emplace_back((j - 1) * p + q1, j * p);
  inst.k.blocks.emplace_back(0, n - p);
  return inst;
}

/// White-box identity b~ s~' b~^-1 = beta~ s~ with beta~ = d^{N-p}(beta~') beta~''.
inline bool sccp_white_box(const SccpInstance& inst, std::uint32_t p, const GscAggregates<Perm>& g) {
  const Perm beta = perm_shift(g.beta1_tilde, inst.n - p) * g.beta2_tilde;
  return g.b_tilde * inst.x * g.b_tilde.inverse() == beta * inst.y;
}

/// Enumerates c in K = S_{N-p} in lexicographic order; up to `limit`
/// solutions (0 = all).
inline std::vector<SccpSolution> sccp_solutions(const SccpInstance& inst, std::size_t limit,
                                                const SearchBudget& budget, SearchStats& stats) {
  if (inst.k.blocks.size() != 1 || inst.k.blocks[0].first != 0)
    throw std::invalid_argument("K must be a standard S_r");
  const std::uint32_t r = inst.k.blocks[0].second;
  if (r > 10) throw std::invalid_argument("K too large to enumerate");
  std::vector<SccpSolution> out;
  const Perm yinv = inst.y.inverse();
  for (const Perm& c : all_perms(r)) {
    if (!detail::spend(budget, stats)) break;
    const Perm h = c * inst.x * c.inverse() * yinv;
    if (inst.h.contains(h)) {
      out.push_back({h, c});
      if (limit && out.size() >= limit) break;
    }
  }
  return out;
}

inline std::optional<SccpSolution> brute_force_sccp(const SccpInstance& inst, const SearchBudget& budget,
                                                    SearchStats& stats) {
  auto sols = sccp_solutions(inst, 1, budget, stats);
  if (sols.empty()) return std::nullopt;
  return sols.front();
}

/// Attack on Bob's key in the symmetric quotient (m = 1): for each depth
/// guess k', solve the SCCP instance for every conjugator c, then look for
/// b' in S_B^k' with d^{(k'-1)p}(b'_1) ... b'_k' = c and ops o' reproducing
/// s'. The pseudo-key feeds the Bob route reconstruction.
inline AttackResult<Perm> sccp_attack(const AttackContext<PermPlatform>& ctx, const MsgA<Perm>& ma,
                                      const MsgB<Perm>& mb, std::uint32_t p, std::uint32_t q1, std::uint32_t q2) {
  const auto& params = *ctx.params;
  const PermPlatform& plat = *params.platform;
  AttackResult<Perm> res;
  if (params.m() != 1) throw std::invalid_argument("SCCP attack expects m = 1");
  const Perm& s = params.s[0];
  const Perm& sp = mb.s_img[0];
  const auto sb = ctx.s_b();
  const auto& dom = sb.elements();
  for (std::uint32_t k = 1; k <= ctx.budget.max_depth; ++k) {
    const std::uint32_t n = sccp_ambient_degree(p, k, sp);
    if (n - p > 10) break;
    const auto inst = sdp_to_sccp(p, q1, q2, k, n, s, sp, std::vector<int>(k, 1));
    const auto sols = sccp_solutions(inst, 0, ctx.budget, res.stats);
    if (res.stats.budget_hit) break;
    if (sols.empty()) continue;

    // b'_1 .. b'_{k-1} from the domain, b'_k = X^-1 c
    std::vector<std::size_t> idx(k - 1, 0);
    while (true) {
      Perm x;
      for (std::uint32_t j = 0; j + 1 < k; ++j) x = x * perm_shift(dom[idx[j]], (k - 1 - j) * p);
      for (const auto& sol : sols) {
        const Perm last = x.inverse() * sol.c;
        auto last_tree = sb.find(last);
        if (!last_tree) continue;
        std::vector<Perm> bs;
        std::vector<TreeWord> trees;
        for (std::uint32_t j = 0; j + 1 < k; ++j) {
          bs.push_back(dom[idx[j]]);
          trees.push_back(sb.trees()[idx[j]]);
        }
        bs.push_back(last);
        trees.push_back(*last_tree);
        // ops o' in O_B^k, lexicographic
        std::vector<std::size_t> oi(k, 0);
        while (true) {
          if (!detail::spend(ctx.budget, res.stats)) return res;
          IterHom<Perm> hom;
          for (std::uint32_t j = 0; j < k; ++j) {
            hom.xs.push_back(bs[j]);
            hom.ops.push_back(params.pool_b[oi[j]]);
          }
          if (iter_apply(plat, hom, s) == sp) {
            BobSecret<Perm> pseudo;
            pseudo.b_trees = trees;
            pseudo.ops = hom.ops;
            res.k_b = k;
            res.key_element = bob_shared(params, pseudo, ma);
            res.key = derive_key_bytes(plat, *res.key_element);
            return res;
          }
          std::size_t t = 0;
          while (t < k && oi[t] + 1 == params.pool_b.size()) oi[t++] = 0;
          if (t == k) break;
          ++oi[t];
        }
      }
      std::size_t t = 0;
      while (t + 1 < k && idx[t] + 1 == dom.size()) idx[t++] = 0;
      if (t + 1 >= k) break;
      ++idx[t];
    }
  }
  res.failure = "no SCCP solution decomposes into S_B";
  return res;
}

// ---------------------------------------------------------------------------
// f-conjugacy and f-symmetric conjugacy instance generators

template <class E>
struct SimCpInstance {
  std::size_t k = 0;
  std::vector<std::pair<E, E>> pairs;  // (x, y): find c with x = c^-1 y c
};

template <class E>
struct FconjCpFamilies {
  std::vector<SimCpInstance<E>> left;   // (s'_i s'_j^-1, f^k(s_i s_j^-1))
  std::vector<SimCpInstance<E>> right;  // (s'_j^-1 s'_i, f^k(s_j^-1 s_i))
};

/// For k = 1..u_b, the two simultaneous CP families over pairs i < j.
template <class Ring>
FconjCpFamilies<Mat<typename Ring::Element>> fconj_cp_instances(
    const PublicParams<MatrixPlatform<Ring>>& params, const MsgB<Mat<typename Ring::Element>>& mb,
    std::size_t u_b) {
  using E = Mat<typename Ring::Element>;
  if (params.m() < 2) throw std::invalid_argument("f-conjugacy needs m >= 2");
  const auto& plat = *params.platform;
  const MatOp& o = plat.describe(params.pool_b.front());
  if (o.kind != MatOpKind::fconj) throw std::invalid_argument("not an f-conjugacy platform");
  const auto& alg = plat.algebra();
  FconjCpFamilies<E> out;
  for (std::size_t k = 1; k <= u_b; ++k) {
    SimCpInstance<E> l{k, {}}, r{k, {}};
    for (std::size_t i = 0; i < params.m(); ++i)
      for (std::size_t j = i + 1; j < params.m(); ++j) {
        const E& si = params.s[i];
        const E& sj = params.s[j];
        const E& pi = mb.s_img[i];
        const E& pj = mb.s_img[j];
        l.pairs.emplace_back(alg.mul(pi, alg.inverse(pj)), endo_power(alg, o.f, alg.mul(si, alg.inverse(sj)), k));
        r.pairs.emplace_back(alg.mul(alg.inverse(pj), pi), endo_power(alg, o.f, alg.mul(alg.inverse(sj), si), k));
      }
    out.left.push_back(std::move(l));
    out.right.push_back(std::move(r));
  }
  return out;
}

template <class Ring>
bool solves_sim_cp(const MatrixAlgebra<Ring>& alg, const SimCpInstance<Mat<typename Ring::Element>>& inst,
                   const Mat<typename Ring::Element>& c) {
  const auto cinv = alg.inverse(c);
  for (const auto& [x, y] : inst.pairs)
    if (!(x == alg.mul(alg.mul(cinv, y), c))) return false;
  return true;
}

/// b~ = f^{k-1}(b_1) ... f(b_{k-1}) b_k.
template <class Ring>
Mat<typename Ring::Element> fconj_b_tilde(const MatrixAlgebra<Ring>& alg, const EndoSpec& f,
                                          const std::vector<Mat<typename Ring::Element>>& b) {
  auto bt = alg.identity();
  for (std::size_t j = 0; j < b.size(); ++j) bt = alg.mul(bt, endo_power(alg, f, b[j], b.size() - 1 - j));
  return bt;
}

/// lhs = f(x_k x_{k-1}^-1 ... x_1^{+-1}), rhs = f(x_1^{+-1} ... x_{k-1}^-1) x_k,
/// so that phi(y) = lhs f(y)^{e} rhs with e = (-1)^k.
template <class E>
struct FsymmAggregates {
  E lhs, rhs;
  int exponent = 1;
};

template <class Ring>
FsymmAggregates<Mat<typename Ring::Element>> fsymm_aggregates(const MatrixAlgebra<Ring>& alg, const EndoSpec& f,
                                                              const std::vector<Mat<typename Ring::Element>>& x) {
  const std::size_t k = x.size();
  if (k == 0) throw std::invalid_argument("empty secret");
  auto signed_x = [&](std::size_t j, bool positive) { return positive ? x[j - 1] : alg.inverse(x[j - 1]); };
  auto left = alg.identity();
  for (std::size_t j = k; j >= 1; --j) left = alg.mul(left, signed_x(j, (k - j) % 2 == 0));
  auto right = alg.identity();
  for (std::size_t j = 1; j < k; ++j) right = alg.mul(right, signed_x(j, (j + k) % 2 == 0));
  return {alg.apply_endo(f, left), alg.mul(alg.apply_endo(f, right), x[k - 1]), k % 2 ? -1 : 1};
}

template <class E>
struct FsymmRecovery {
  E printed;  // the published combination
  E derived;  // the combination that follows from the aggregates
};

/// Shared-key recovery from the four aggregates and f(a0), for a projector f. The published
/// combination a_lhs b_rhs f(a0)^{eA eB} f(b_rhs) a_rhs is evaluated as
/// printed (eps = 1 for odd depth, -1 for even). The derived one is
///   eA = +1: a_lhs b_lhs f(a0)^{eB} f(b_rhs) a_rhs,
///   eA = -1: a_lhs f(b_rhs)^-1 f(a0)^{-eB} b_lhs^-1 a_rhs,
/// with e = (-1)^k as in fsymm_aggregates.
template <class Ring>
FsymmRecovery<Mat<typename Ring::Element>> fsymm_key_recovery(
    const MatrixAlgebra<Ring>& alg, const EndoSpec& f, const FsymmAggregates<Mat<typename Ring::Element>>& a,
    const FsymmAggregates<Mat<typename Ring::Element>>& b, const Mat<typename Ring::Element>& f_a0) {
  auto pw = [&](const auto& m, int e) { return e > 0 ? m : alg.inverse(m); };
  const int eps_a = -a.exponent, eps_b = -b.exponent;  // 1 iff depth odd
  FsymmRecovery<Mat<typename Ring::Element>> out;
  out.printed = alg.mul(alg.mul(alg.mul(alg.mul(a.lhs, b.rhs), pw(f_a0, eps_a * eps_b)), alg.apply_endo(f, b.rhs)),
                        a.rhs);
  const auto fbr = alg.apply_endo(f, b.rhs);
  if (a.exponent > 0) {
    out.derived = alg.mul(alg.mul(alg.mul(alg.mul(a.lhs, b.lhs), pw(f_a0, b.exponent)), fbr), a.rhs);
  } else {
    out.derived =
        alg.mul(alg.mul(alg.mul(alg.mul(a.lhs, alg.inverse(fbr)), pw(f_a0, -b.exponent)), alg.inverse(b.lhs)),
                a.rhs);
  }
  return out;
}

}  // namespace ldkep
