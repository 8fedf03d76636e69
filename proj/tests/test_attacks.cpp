#include <gtest/gtest.h>

#include "ldkep/attacks.hpp"
#include "ldkep/laver.hpp"

namespace ldkep {
namespace {

struct LaverCase {
  std::shared_ptr<LaverPlatform> plat = std::make_shared<LaverPlatform>(3);
  PublicParams<LaverPlatform> params;
  AttackContext<LaverPlatform> ctx;

  explicit LaverCase(std::uint64_t seed) {
    Rng rng(seed);
    params = protocol1_params<LaverPlatform>(plat, plat->star(), 2, 2, rng);
    ctx.params = &params;
    ctx.carrier = plat->all_elements();
  }
};

struct S4Case {
  std::shared_ptr<PermPlatform> plat = std::make_shared<PermPlatform>(4);
  PublicParams<PermPlatform> params;
  AttackContext<PermPlatform> ctx;

  explicit S4Case(std::uint64_t seed) {
    Rng rng(seed);
    const OpId op = plat->add_conj();
    params = protocol1_params<PermPlatform>(plat, op, 2, 2, rng);
    ctx.params = &params;
    ctx.carrier = all_perms(4);
  }
};

constexpr AttackRoute kRoutes[] = {AttackRoute::bob, AttackRoute::alice_msp, AttackRoute::alice_homsp,
                                   AttackRoute::alice_mod};

TEST(Attacks, AllRoutesRecoverLaverKeys) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    LaverCase c(seed);
    const auto tr = run_session(c.params, SessionShape::fixed(2, 2), seed);
    for (AttackRoute r : kRoutes) {
      const auto res = run_attack(c.ctx, r, tr.msg_a, tr.msg_b);
      ASSERT_TRUE(res.key) << route_name(r) << " seed " << seed << ": " << res.failure;
      EXPECT_EQ(*res.key, tr.key_bytes) << route_name(r) << " seed " << seed;
    }
  }
}

TEST(Attacks, AllRoutesRecoverConjugacyKeys) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    S4Case c(seed);
    const auto tr = run_session(c.params, SessionShape::fixed(1, 2), seed);
    for (AttackRoute r : kRoutes) {
      const auto res = run_attack(c.ctx, r, tr.msg_a, tr.msg_b);
      ASSERT_TRUE(res.key) << route_name(r) << " seed " << seed << ": " << res.failure;
      EXPECT_EQ(*res.key, tr.key_bytes) << route_name(r) << " seed " << seed;
    }
  }
}

TEST(Attacks, HomspRouteNeedsNoPseudoA0) {
  LaverCase c(3);
  const auto tr = run_session(c.params, SessionShape::fixed(2, 2), 3);
  const auto res = run_attack(c.ctx, AttackRoute::alice_homsp, tr.msg_a, tr.msg_b);
  ASSERT_TRUE(res.key);
  EXPECT_FALSE(res.used_a0);
  EXPECT_EQ(*res.key, tr.key_bytes);
  EXPECT_TRUE(run_attack(c.ctx, AttackRoute::alice_mod, tr.msg_a, tr.msg_b).used_a0);
}

TEST(Attacks, RouteNames) {
  for (AttackRoute r : kRoutes) EXPECT_EQ(parse_route(route_name(r)), r);
  EXPECT_THROW(parse_route("carol"), std::invalid_argument);
}

TEST(Attacks, BudgetExhaustionIsReported) {
  LaverCase c(2);
  c.ctx.budget.max_candidates = 0;
  const auto tr = run_session(c.params, SessionShape::fixed(2, 2), 2);
  const auto res = run_attack(c.ctx, AttackRoute::bob, tr.msg_a, tr.msg_b);
  EXPECT_FALSE(res.key);
  EXPECT_TRUE(res.stats.budget_hit);
  EXPECT_FALSE(res.failure.empty());
}

// ---------------------------------------------------------------------------
// MSP and iterated LD problems

TEST(Msp, GeneratorIsALeaf) {
  LaverPlatform lav(3);
  const std::vector<std::uint16_t> gens{3, 5};
  const auto tree = brute_force_msp(lav, std::uint16_t{5}, gens, {lav.star()}, 2);
  ASSERT_TRUE(tree);
  EXPECT_EQ(*tree, TreeWord::leaf(1));
}

TEST(Msp, TreesEvaluateToTarget) {
  LaverPlatform lav(3);
  const std::vector<std::uint16_t> gens{3, 6};
  SubmagmaIndex<LaverPlatform> idx(lav, gens, {lav.star()}, 4, 1000);
  ASSERT_FALSE(idx.elements().empty());
  for (std::size_t i = 0; i < idx.elements().size(); ++i)
    EXPECT_EQ(eval_tree(lav, idx.trees()[i], std::span<const std::uint16_t>(gens)), idx.elements()[i]);
  // the submagma is closed: products of members are members once the closure stops growing
  SubmagmaIndex<LaverPlatform> big(lav, gens, {lav.star()}, 8, 1000);
  for (auto x : big.elements())
    for (auto y : big.elements()) EXPECT_TRUE(big.contains(lav.apply(lav.star(), x, y)));
}

TEST(Msp, UnreachableTargetIsNotFound) {
  // 8 * y = y in L_3, so <8> = {8}
  LaverPlatform lav(3);
  EXPECT_FALSE(brute_force_msp(lav, std::uint16_t{1}, {std::uint16_t{8}}, {lav.star()}, 3));
}

TEST(SimItLdp, RecoversDepthOneFactorOnTrivialPairs) {
  LaverPlatform lav(3);
  SimItLdpInstance<std::uint16_t> inst;
  for (std::uint16_t y = 1; y <= 8; ++y) inst.pairs.emplace_back(y, lav.apply(lav.star(), 5, y));
  inst.pool = {lav.star()};
  inst.domain = lav.all_elements();
  SearchStats stats;
  const auto hom = brute_force_sim_it_ldp(lav, inst, SearchBudget{}, stats);
  ASSERT_TRUE(hom);
  EXPECT_EQ(hom->depth(), 1u);
  EXPECT_EQ(hom->xs[0], 5);  // left multiplication by x on all of L_3 determines x
}

TEST(SimItLdp, SolutionReproducesAllPairs) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    S4Case c(seed);
    const auto& plat = *c.plat;
    IterHom<Perm> secret;
    for (int j = 0; j < 2; ++j) {
      secret.xs.push_back(plat.random_element(rng));
      secret.ops.push_back(c.params.pool_a[0]);
    }
    SimItLdpInstance<Perm> inst;
    for (const auto& s : c.params.s) inst.pairs.emplace_back(s, iter_apply(plat, secret, s));
    inst.pool = c.params.pool_a;
    inst.domain = all_perms(4);
    SearchStats stats;
    const auto hom = brute_force_sim_it_ldp(plat, inst, SearchBudget{}, stats);
    ASSERT_TRUE(hom);
    EXPECT_LE(hom->depth(), 2u);
    for (const auto& [x, y] : inst.pairs) EXPECT_EQ(iter_apply(plat, *hom, x), y);
  }
}

TEST(SimItLdp, EmptyDomainRejected) {
  LaverPlatform lav(3);
  SimItLdpInstance<std::uint16_t> inst;
  inst.pool = {lav.star()};
  SearchStats stats;
  EXPECT_THROW(brute_force_sim_it_ldp(lav, inst, SearchBudget{}, stats), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// SCCP reduction

struct GscCase {
  std::shared_ptr<PermPlatform> plat;
  PublicParams<PermPlatform> params;
  std::uint32_t p, q1, q2;
};

/// Generators of S_B live in S_{N-kp} so that b~ lies in S_{N-p}.
GscCase gsc_case(std::uint32_t p, std::uint32_t q1, std::uint32_t q2, std::uint32_t n_gens, std::size_t pool,
                 std::uint64_t seed, bool recommended) {
  GscCase c{std::make_shared<PermPlatform>(n_gens), {}, p, q1, q2};
  Rng rng(seed);
  const auto pools = build_sym_partial_mld(*c.plat, p, q1, q2, pool, pool, rng, 16, recommended);
  c.params = make_params<PermPlatform>(c.plat, pools.pool_a, pools.pool_b, 1, 2, rng);
  return c;
}

TEST(Sccp, WhiteBoxIdentity) {
  constexpr std::uint32_t p = 8, q1 = 3, q2 = 5, k = 2, n = 24;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto c = gsc_case(p, q1, q2, n - k * p, 4, seed, true);
    Rng rb(seed + 100);
    const auto bob = bob_keygen(c.params, k, 0, rb);
    const auto sp = bob_message(c.params, bob).s_img[0];
    ASSERT_LE(sp.degree(), n);
    const auto sec = gsc_secrets(*c.plat, bob);
    std::vector<int> eps;
    for (const auto& part : sec.parts) eps.push_back(part.sign);
    const auto inst = sdp_to_sccp(p, q1, q2, k, n, c.params.s[0], sp, eps);
    const auto g = gsc_aggregates(sec);
    EXPECT_TRUE(sccp_white_box(inst, p, g)) << "seed " << seed;
    EXPECT_TRUE(inst.k.contains(g.b_tilde));
    EXPECT_TRUE(inst.h.contains(perm_shift(g.beta1_tilde, n - p) * g.beta2_tilde));
  }
}

TEST(Sccp, ReductionPreconditions) {
  const Perm s = Perm::transposition(1, 2);
  EXPECT_THROW(sdp_to_sccp(4, 2, 2, 1, 10, s, s, {1}), std::invalid_argument);  // p does not divide N
  EXPECT_THROW(sdp_to_sccp(4, 2, 2, 2, 8, s, s, {1, 1}), std::invalid_argument);
  EXPECT_THROW(sdp_to_sccp(4, 3, 2, 1, 8, s, s, {1}), std::invalid_argument);
  EXPECT_THROW(sdp_to_sccp(4, 2, 2, 1, 8, s, s, {1, 1}), std::invalid_argument);
  EXPECT_EQ(sccp_ambient_degree(4, 1, s), 8u);
  EXPECT_EQ(sccp_ambient_degree(4, 1, Perm::transposition(1, 11)), 12u);
}

TEST(Sccp, BlockSubgroupMembership) {
  BlockSubgroup h{{{2, 4}, {6, 8}}};
  EXPECT_TRUE(h.contains(Perm()));
  EXPECT_TRUE(h.contains(Perm::from_cycles({{3, 4}, {7, 8}})));
  EXPECT_FALSE(h.contains(Perm::transposition(2, 3)));
  EXPECT_FALSE(h.contains(Perm::transposition(4, 7)));
  EXPECT_FALSE(h.contains(Perm::transposition(5, 9)));
}

TEST(Sccp, BruteForceSolvesAndReconstructsKey) {
  constexpr std::uint32_t p = 4, q = 2, k = 1;
  int solved = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto c = gsc_case(p, q, q, 8 - k * p, 3, seed, false);
    Rng ra(seed + 200), rb(seed + 300);
    const auto alice = alice_keygen(c.params, 1, 0, ra);
    const auto bob = bob_keygen(c.params, k, 0, rb);
    const auto ma = alice_message(c.params, alice);
    const auto mb = bob_message(c.params, bob);
    const auto key = derive_key_bytes(*c.plat, bob_shared(c.params, bob, ma));

    const std::uint32_t n = sccp_ambient_degree(p, k, mb.s_img[0]);
    const auto inst = sdp_to_sccp(p, q, q, k, n, c.params.s[0], mb.s_img[0], {1});
    SearchStats stats;
    const auto sol = brute_force_sccp(inst, SearchBudget{}, stats);
    ASSERT_TRUE(sol) << "seed " << seed;
    EXPECT_EQ(sol->c * inst.x * sol->c.inverse(), sol->h * inst.y);
    EXPECT_TRUE(inst.h.contains(sol->h));

    AttackContext<PermPlatform> ctx{&c.params, {}, SearchBudget{}};
    ctx.budget.max_depth = 1;
    const auto res = sccp_attack(ctx, ma, mb, p, q, q);
    if (res.key) {
      EXPECT_EQ(*res.key, key) << "seed " << seed;
      ++solved;
    }
  }
  EXPECT_EQ(solved, 10);
}

TEST(Sccp, TrivialAndImpossibleInstances) {
  SccpInstance inst;
  inst.x = inst.y = Perm::from_cycles({{1, 2, 3}});
  inst.h.blocks = {{4, 6}};
  inst.k.blocks = {{0, 4}};
  SearchStats stats;
  auto sol = brute_force_sccp(inst, SearchBudget{}, stats);
  ASSERT_TRUE(sol);
  EXPECT_TRUE(sol->h.is_identity());
  EXPECT_TRUE(sol->c.is_identity());
  // a 3-cycle is not conjugate to a transposition times anything supported on (4, 6]
  inst.y = Perm::transposition(1, 2);
  EXPECT_FALSE(brute_force_sccp(inst, SearchBudget{}, stats));
}

TEST(Sccp, DepthOneIdentityBase) {
  const std::uint32_t p = 4, n = 8;
  const auto inst = sdp_to_sccp(p, 2, 2, 1, n, Perm(), Perm(), {-1});
  EXPECT_EQ(inst.y, perm_tau(p, n - p).inverse() * perm_tau(p, p));
  EXPECT_EQ(inst.y, sdp_to_sccp(p, 2, 2, 1, n, Perm(), Perm(), {1}).y);
}

TEST(Sccp, SignVectorDoesNotChangeQuotientImage) {
  for (std::uint32_t p = 1; p <= 4; ++p)
    for (std::uint32_t k = 1; k <= 4; ++k) {
      // the first block goes to the last, every other block moves down by one
      std::vector<std::uint32_t> img((k + 1) * p);
      for (std::uint32_t i = 1; i <= (k + 1) * p; ++i) img[i - 1] = i <= p ? i + k * p : i - p;
      const Perm block = Perm::from_images(img);
      for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        std::vector<int> eps(k);
        for (std::uint32_t j = 0; j < k; ++j) eps[j] = (mask >> j) & 1 ? 1 : -1;
        EXPECT_EQ(perm_tau_eps(p, eps), block) << "p=" << p << " k=" << k << " mask=" << mask;
      }
    }
}

// ---------------------------------------------------------------------------
// matrix platforms

TEST(FConjCp, InstancesHoldForTrueSecret) {
  using Plat = MatrixPlatform<FiniteField>;
  auto plat = std::make_shared<Plat>(FiniteField(3, 2), 2);
  const EndoSpec f = EndoSpec::frobenius(1);
  const OpId op = plat->add_fconj(f);
  const auto& alg = plat->algebra();
  int wrong_depth_hits = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    const auto params = protocol1_params<Plat>(plat, op, 3, 2, rng);
    Rng rb(seed + 50);
    const auto bob = bob_keygen(params, 3, 1, rb);
    const auto mb = bob_message(params, bob);
    const auto fam = fconj_cp_instances(params, mb, 4);
    ASSERT_EQ(fam.left.size(), 4u);
    EXPECT_EQ(fam.left[0].pairs.size(), 3u);  // pairs i < j of three generators
    const auto bt = fconj_b_tilde(alg, f, bob.b);
    // s'_j^-1 s'_i = b~^-1 f^k(s_j^-1 s_i) b~
    EXPECT_TRUE(solves_sim_cp(alg, fam.right[2], bt));
    // s'_i s'_j^-1 = f(b~^-1) f^k(s_i s_j^-1) f(b~)
    EXPECT_TRUE(solves_sim_cp(alg, fam.left[2], alg.apply_endo(f, bt)));
    wrong_depth_hits += solves_sim_cp(alg, fam.right[0], bt) + solves_sim_cp(alg, fam.right[3], bt);
  }
  EXPECT_LT(wrong_depth_hits, 20);
}

TEST(FConjCp, NeedsTwoGenerators) {
  using Plat = MatrixPlatform<FiniteField>;
  auto plat = std::make_shared<Plat>(FiniteField(3, 2), 2);
  const OpId op = plat->add_fconj(EndoSpec::frobenius(1));
  Rng rng(1);
  const auto params = protocol1_params<Plat>(plat, op, 1, 1, rng);
  const auto mb = bob_message(params, bob_keygen(params, 1, 0, rng));
  EXPECT_THROW(fconj_cp_instances(params, mb, 2), std::invalid_argument);
}

TEST(FSymm, AggregatesReproducePublicKeys) {
  using Plat = MatrixPlatform<TruncatedPolyRing>;
  auto plat = std::make_shared<Plat>(TruncatedPolyRing(17, 16), 3);
  const EndoSpec f = EndoSpec::eval_at(3);
  const OpId op = plat->add_fsymm(f);
  const auto& alg = plat->algebra();
  for (std::size_t k = 1; k <= 4; ++k) {
    Rng rng(k);
    const auto params = protocol1_params<Plat>(plat, op, 2, 2, rng);
    const auto bob = bob_keygen(params, k, 1, rng);
    const auto mb = bob_message(params, bob);
    const auto g = fsymm_aggregates(alg, f, bob.b);
    for (std::size_t j = 0; j < params.m(); ++j) {
      const auto fs = alg.apply_endo(f, params.s[j]);
      EXPECT_EQ(alg.mul(alg.mul(g.lhs, g.exponent > 0 ? fs : alg.inverse(fs)), g.rhs), mb.s_img[j]);
    }
  }
}

TEST(FSymm, DerivedRecoveryMatchesSharedKey) {
  using Plat = MatrixPlatform<TruncatedPolyRing>;
  auto plat = std::make_shared<Plat>(TruncatedPolyRing(17, 16), 3);
  const EndoSpec f = EndoSpec::eval_at(5);
  const OpId op = plat->add_fsymm(f);
  const auto& alg = plat->algebra();
  int printed_matches = 0, cases = 0;
  for (std::size_t ka = 1; ka <= 3; ++ka)
    for (std::size_t kb = 1; kb <= 3; ++kb) {
      Rng rng(10 * ka + kb);
      const auto params = protocol1_params<Plat>(plat, op, 2, 2, rng);
      const auto alice = alice_keygen(params, ka, 1, rng);
      const auto bob = bob_keygen(params, kb, 1, rng);
      const auto ma = alice_message(params, alice);
      const auto key = bob_shared(params, bob, ma);
      const auto a_agg = fsymm_aggregates(alg, f, alice.hom.xs);
      const auto b_agg = fsymm_aggregates(alg, f, bob.b);
      // f(a0)^{eA} = a_lhs^-1 p0 a_rhs^-1
      auto f_a0 = alg.mul(alg.mul(alg.inverse(a_agg.lhs), ma.p0), alg.inverse(a_agg.rhs));
      if (a_agg.exponent < 0) f_a0 = alg.inverse(f_a0);
      const auto a0 = eval_tree(*plat, alice.a0_tree, std::span<const Plat::Element>(params.s));
      EXPECT_EQ(f_a0, alg.apply_endo(f, a0));
      const auto rec = fsymm_key_recovery(alg, f, a_agg, b_agg, f_a0);
      EXPECT_EQ(rec.derived, key) << "kA=" << ka << " kB=" << kb;
      printed_matches += rec.printed == key;
      ++cases;
    }
  EXPECT_LT(printed_matches, cases);
}

TEST(FSymm, IdentityEndomorphismReducesToSymmetricConjugacy) {
  using Plat = MatrixPlatform<FiniteField>;
  auto plat = std::make_shared<Plat>(FiniteField(3, 1), 2);
  const EndoSpec f = EndoSpec::identity();
  const OpId op = plat->add_fsymm(f);
  const auto& alg = plat->algebra();
  Rng rng(4);
  const auto params = protocol1_params<Plat>(plat, op, 2, 2, rng);
  const auto alice = alice_keygen(params, 1, 1, rng);
  const auto bob = bob_keygen(params, 1, 1, rng);
  const auto ma = alice_message(params, alice);
  const auto key = bob_shared(params, bob, ma);
  const auto a_agg = fsymm_aggregates(alg, f, alice.hom.xs);
  const auto b_agg = fsymm_aggregates(alg, f, bob.b);
  // x o y = x y^-1 x
  const auto& b = bob.b[0];
  EXPECT_EQ(bob_message(params, bob).s_img[0], alg.mul(alg.mul(b, alg.inverse(params.s[0])), b));
  auto f_a0 = alg.inverse(alg.mul(alg.mul(alg.inverse(a_agg.lhs), ma.p0), alg.inverse(a_agg.rhs)));
  EXPECT_EQ(fsymm_key_recovery(alg, f, a_agg, b_agg, f_a0).derived, key);
}

}  // namespace
}  // namespace ldkep
