#include <gtest/gtest.h>

#include "ldkep/braid.hpp"

namespace ldkep {
namespace {

// Unreduced Burau matrix evaluated at a fixed t modulo 2^61 - 1. A braid
// invariant computed without normal forms.
struct Burau {
  static constexpr std::uint64_t P = (std::uint64_t{1} << 61) - 1;
  static std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % P);
  }
  static std::uint64_t add(std::uint64_t a, std::uint64_t b) { return (a + b) % P; }
  static std::uint64_t sub(std::uint64_t a, std::uint64_t b) { return (a + P - b) % P; }
  static std::uint64_t inv(std::uint64_t a) {
    std::uint64_t r = 1, e = P - 2;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  static std::vector<std::uint64_t> of(const BraidWord& w, std::uint32_t n, std::uint64_t t) {
    std::vector<std::uint64_t> m(n * n, 0);
    for (std::uint32_t i = 0; i < n; ++i) m[i * n + i] = 1;
    const std::uint64_t ti = inv(t);
    for (auto l : w.letters()) {
      const auto i = static_cast<std::uint32_t>(std::abs(l));
      for (std::uint32_t r = 0; r < n; ++r) {
        std::uint64_t& a = m[r * n + i - 1];
        std::uint64_t& b = m[r * n + i];
        const std::uint64_t x = a, y = b;
        if (l > 0) {
          a = add(mul(x, sub(1, t)), y);
          b = mul(x, t);
        } else {
          a = mul(y, ti);
          b = add(x, mul(y, sub(1, ti)));
        }
      }
    }
    return m;
  }
};

BraidWord random_word(std::uint32_t n, std::uint32_t len, Rng& rng) {
  std::vector<std::int32_t> w;
  for (std::uint32_t i = 0; i < len; ++i) {
    auto l = static_cast<std::int32_t>(1 + rng.below(n - 1));
    w.push_back(rng.coin() ? l : -l);
  }
  return BraidWord(w);
}

// Rewrites w by a random braid relation or free insertion; the result is the
// same braid as a different word.
std::vector<std::int32_t> perturb(std::vector<std::int32_t> w, std::uint32_t n, Rng& rng) {
  const int kind = static_cast<int>(rng.below(3));
  const std::size_t pos = rng.below(w.size() + 1);
  if (kind == 0 || n < 3) {
    auto i = static_cast<std::int32_t>(1 + rng.below(n - 1));
    if (rng.coin()) i = -i;
    w.insert(w.begin() + static_cast<std::ptrdiff_t>(pos), {i, -i});
  } else if (kind == 1) {
    // sigma_i sigma_{i+1} sigma_i -> sigma_{i+1} sigma_i sigma_{i+1}, as an inserted relator
    const auto i = static_cast<std::int32_t>(1 + rng.below(n - 2));
    w.insert(w.begin() + static_cast<std::ptrdiff_t>(pos), {i, i + 1, i, -(i + 1), -i, -(i + 1)});
  } else {
    // far commutation applied in place where possible
    for (std::size_t j = 0; j + 1 < w.size(); ++j) {
      if (std::abs(std::abs(w[j]) - std::abs(w[j + 1])) >= 2 && rng.coin()) std::swap(w[j], w[j + 1]);
    }
  }
  return w;
}

TEST(BraidWord, FreeReductionAndInverse) {
  BraidWord w{1, 2, -2, 3, -3, -1, 4};
  EXPECT_EQ(w.letters(), (std::vector<std::int32_t>{4}));
  BraidWord u{1, -2, 3};
  EXPECT_TRUE((u * u.inverse()).empty());
  EXPECT_EQ(u.inverse().letters(), (std::vector<std::int32_t>{-3, 2, -1}));
  EXPECT_EQ(braid_shift(u, 2).letters(), (std::vector<std::int32_t>{3, -4, 5}));
  EXPECT_EQ(u.strands(), 4u);
  EXPECT_THROW(BraidWord({1, 0}), std::invalid_argument);
}

TEST(BraidWord, DeltaAndTau) {
  EXPECT_EQ(braid_delta(4).letters(), (std::vector<std::int32_t>{3, 2, 1}));
  for (std::uint32_t p = 1; p <= 4; ++p)
    for (std::uint32_t q = 1; q <= 4; ++q) EXPECT_EQ(perm_of_braid(braid_tau(p, q)), perm_tau(p, q));
  for (std::uint32_t n = 2; n <= 8; ++n) {
    std::vector<std::uint32_t> rev(n);
    for (std::uint32_t i = 0; i < n; ++i) rev[i] = n - i;
    EXPECT_EQ(perm_of_braid(half_twist(n)), Perm::from_images(rev));
    EXPECT_EQ(half_twist(n).length(), n * (n - 1) / 2);
  }
  const std::vector<int> eps{1, -1, 1};
  EXPECT_EQ(perm_of_braid(braid_tau_eps(3, eps)), perm_tau_eps(3, eps));
}

TEST(Garside, HalfTwistIsCentralSquared) {
  for (std::uint32_t n = 2; n <= 7; ++n) {
    const BraidWord d2 = half_twist(n).pow(2);
    const auto nf = normal_form(d2, n);
    EXPECT_EQ(nf.inf, 2);
    EXPECT_TRUE(nf.factors.empty());
    for (std::uint32_t i = 1; i < n; ++i) {
      const BraidWord s{static_cast<std::int32_t>(i)};
      EXPECT_TRUE(braid_eq(d2 * s, s * d2));
      // Delta sigma_i = sigma_{n-i} Delta
      EXPECT_TRUE(braid_eq(half_twist(n) * s, BraidWord{static_cast<std::int32_t>(n - i)} * half_twist(n)));
    }
  }
}

TEST(Garside, KnownSmallForms) {
  EXPECT_TRUE(normal_form(BraidWord{}, 3).is_identity());
  const auto inv = normal_form(BraidWord{-1}, 2);
  EXPECT_EQ(inv.inf, -1);
  EXPECT_TRUE(inv.factors.empty());
  const auto nf = normal_form(BraidWord{1, 2, 1}, 3);  // Delta_3
  EXPECT_EQ(nf.inf, 1);
  EXPECT_TRUE(nf.factors.empty());
  const auto nf2 = normal_form(BraidWord{1, 1}, 3);
  EXPECT_EQ(nf2.inf, 0);
  EXPECT_EQ(nf2.factors.size(), 2u);
}

TEST(Garside, CongruentWordsShareNormalForm) {
  Rng rng(101);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = static_cast<std::uint32_t>(2 + rng.below(11));  // 2..12
    const BraidWord w = random_word(n, static_cast<std::uint32_t>(rng.below(30)), rng);
    std::vector<std::int32_t> v = w.letters();
    const int steps = 1 + static_cast<int>(rng.below(4));
    for (int s = 0; s < steps; ++s) v = perturb(v, n, rng);
    const BraidWord w2(v);
    ASSERT_EQ(normal_form(w, n), normal_form(w2, n)) << w.to_string() << " vs " << w2.to_string();
    ASSERT_EQ(canonical_form(w), canonical_form(w2));
  }
}

TEST(Garside, NormalFormAgreesWithBurau) {
  Rng rng(202);
  const std::uint64_t t = 0x1234567ULL;
  for (int trial = 0; trial < 400; ++trial) {
    const auto n = static_cast<std::uint32_t>(3 + rng.below(6));
    const BraidWord u = random_word(n, static_cast<std::uint32_t>(rng.below(8)), rng);
    const BraidWord v = random_word(n, static_cast<std::uint32_t>(rng.below(8)), rng);
    const bool nf_equal = normal_form(u, n) == normal_form(v, n);
    const bool burau_equal = Burau::of(u, n, t) == Burau::of(v, n, t);
    ASSERT_EQ(nf_equal, burau_equal) << u.to_string() << " / " << v.to_string();
  }
}

TEST(Garside, NormalFormWordRepresentsTheBraid) {
  Rng rng(303);
  const std::uint64_t t = 987654321ULL;
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<std::uint32_t>(2 + rng.below(9));
    const BraidWord w = random_word(n, static_cast<std::uint32_t>(rng.below(40)), rng);
    const GarsideNF nf = normal_form(w, n);
    const BraidWord back = nf.to_word();
    ASSERT_EQ(Burau::of(back, n, t), Burau::of(w, n, t));
    ASSERT_EQ(perm_of_braid(back), perm_of_braid(w));
    ASSERT_EQ(normal_form(back, n), nf);
    // left-weighted factors, none trivial or Delta
    for (const auto& f : nf.factors) {
      EXPECT_FALSE(f.is_identity());
      std::vector<std::uint32_t> rev(n);
      for (std::uint32_t i = 0; i < n; ++i) rev[i] = n - i;
      EXPECT_NE(f, Perm::from_images(rev));
    }
  }
}

TEST(Garside, CanonicalFormUsesFewestStrands) {
  Rng rng(404);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::uint32_t>(2 + rng.below(5));
    const BraidWord w = random_word(n, 1 + static_cast<std::uint32_t>(rng.below(20)), rng);
    // trivial braid on strands n..n+2 that free reduction cannot remove
    const auto a = static_cast<std::int32_t>(n + 1), b = a + 1;
    const BraidWord pad(std::vector<std::int32_t>{a, b, a, -b, -a, -b});
    ASSERT_FALSE(pad.empty());
    const BraidWord padded = w * pad;
    const GarsideNF c1 = canonical_form(w), c2 = canonical_form(padded);
    ASSERT_EQ(c1, c2) << w.to_string();
    ASSERT_LE(c1.n, w.strands());
    ASSERT_EQ(encode_braid(w), encode_braid(padded));
    const Bytes enc = encode_braid(padded);
    ByteReader in(enc);
    const GarsideNF dec = GarsideNF::decode(in);
    EXPECT_TRUE(in.done());
    EXPECT_TRUE(braid_eq(dec.to_word(), w));
  }
  EXPECT_EQ(canonical_form(BraidWord{3, -3}).n, 1u);
  EXPECT_EQ(canonical_form(BraidWord{1, 5, -5}).n, 2u);
}

TEST(Garside, PermutationIsAHomomorphism) {
  Rng rng(505);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<std::uint32_t>(2 + rng.below(10));
    const BraidWord u = random_word(n, 10, rng), v = random_word(n, 10, rng);
    EXPECT_EQ(perm_of_braid(u * v), perm_of_braid(u) * perm_of_braid(v));
  }
}

TEST(BraidGsc, ValidationAcceptsAndRejects) {
  EXPECT_TRUE(validate_gsc_element(1, BraidWord{1}));
  EXPECT_TRUE(validate_gsc_element(1, BraidWord{-1}));
  EXPECT_FALSE(validate_gsc_element(1, BraidWord{1, 1}));
  EXPECT_FALSE(validate_gsc_element(1, BraidWord{2}));
  // a' tau a'' with commuting a', a'' in B_p
  const BraidWord a = BraidWord{1} * braid_tau(3, 3) * BraidWord{1, 1};
  EXPECT_TRUE(validate_gsc_element(3, a));
  const BraidWord bad = BraidWord{1} * braid_tau(3, 3) * BraidWord{2};
  EXPECT_FALSE(validate_gsc_element(3, bad));
  BraidPlatform plat(6, 5);
  EXPECT_THROW(plat.add_gsc(3, bad), std::invalid_argument);
  EXPECT_NO_THROW(plat.add_gsc(3, a));
}

TEST(BraidGsc, ShiftedConjugacyIsLeftDistributive) {
  BraidPlatform plat(5, 4);
  const OpId s = plat.add_gsc(1, BraidWord{1});
  const OpId g = plat.add_gsc(3, BraidWord{1, 2} * braid_tau(3, 3) * BraidWord{1, 2, 1, 2});
  Rng rng(606);
  auto triples = sample_triples<BraidWord>(200, rng, [&](Rng& r) { return plat.random_element(r); });
  EXPECT_TRUE(check_left_distributivity(plat, s, s, std::span<const Triple<BraidWord>>(triples)).ok());
  auto few = std::span<const Triple<BraidWord>>(triples).first(60);
  EXPECT_TRUE(check_left_distributivity(plat, g, g, few).ok());
}

TEST(BraidGsc, BiDistributiveSigmaPair) {
  BraidPlatform plat(4, 5);
  const OpId up = plat.add_gsc(1, BraidWord{1});
  const OpId down = plat.add_gsc(1, BraidWord{-1});
  Rng rng(707);
  auto triples = sample_triples<BraidWord>(200, rng, [&](Rng& r) { return plat.random_element(r); });
  const std::vector<OpId> a{up}, b{down};
  EXPECT_TRUE(check_mutual_distributivity(plat, std::span<const OpId>(a), std::span<const OpId>(b),
                                          std::span<const Triple<BraidWord>>(triples))
                  .ok());
}

TEST(BraidGsc, ShapeConditions) {
  using P = std::pair<BraidWord, BraidWord>;
  const std::uint32_t p = 6;
  const BraidWord x{1, -2}, y{4, 5}, z{5};
  EXPECT_TRUE(check_prop_abc(PropVariant::a, p, {P{x, y}}));
  EXPECT_FALSE(check_prop_abc(PropVariant::a, p, {P{x, BraidWord{2}}}));
  EXPECT_TRUE(check_prop_abc(PropVariant::b, p, {P{x, y}, P{x.inverse(), z}}));
  EXPECT_FALSE(check_prop_abc(PropVariant::b, p, {P{x, y}, P{BraidWord{2}, z}}));
  EXPECT_TRUE(check_prop_abc(PropVariant::c, p, {P{x, y}, P{x, z}}));
  // (d) drops [a1', a1''] and [a2', a2'']
  const BraidWord w{1, 2};
  EXPECT_FALSE(check_prop_abc(PropVariant::c, p, {P{x, w}, P{BraidWord{4}, BraidWord{5}}}));
  EXPECT_TRUE(check_prop_abc(PropVariant::d, p, {P{BraidWord{1}, BraidWord{2}}, P{BraidWord{4}, BraidWord{5}}}));
  EXPECT_THROW(check_prop_abc(PropVariant::a, p, {P{BraidWord{7}, x}}), std::invalid_argument);
  EXPECT_THROW(check_prop_abc(PropVariant::c, p, {P{x, y}}), std::invalid_argument);
}

TEST(BraidGsc, PartialPoolsAreMutuallyDistributive) {
  BraidPlatform plat(10, 6);
  Rng rng(808);
  const auto pools = build_braid_partial_mld(plat, 6, 3, 3, 5, 2, 2, rng, 4);
  ASSERT_EQ(pools.pool_a.size(), 2u);
  ASSERT_EQ(pools.pool_b.size(), 2u);
  Rng trng(809);
  auto triples = sample_triples<BraidWord>(12, trng, [&](Rng& r) { return plat.random_element(r); });
  auto span = std::span<const Triple<BraidWord>>(triples);
  EXPECT_TRUE(check_mutual_distributivity(plat, std::span<const OpId>(pools.pool_a),
                                          std::span<const OpId>(pools.pool_b), span)
                  .ok());
  for (OpId id : pools.pool_a) {
    const auto& d = plat.describe(id);
    ASSERT_TRUE(d.parts.has_value());
    EXPECT_LE(d.parts->left.strands(), 3u);
    EXPECT_LE(d.parts->right.strands(), 3u);
  }
  for (OpId id : pools.pool_b) {
    const auto& d = plat.describe(id);
    for (auto l : d.parts->left.letters()) EXPECT_GE(std::abs(l), 4);
    for (auto l : d.parts->right.letters()) EXPECT_GE(std::abs(l), 4);
  }
}

}  // namespace
}  // namespace ldkep

namespace ldkep {
namespace {

TEST(BraidGsc, ShiftedConjugacyUnfolds) {
  BraidPlatform plat(5, 4);
  const OpId s = plat.add_gsc(1, BraidWord{1});
  const BraidWord y{1, -2, 3};
  EXPECT_TRUE(braid_eq(plat.apply(s, BraidWord{}, y), BraidWord{1} * braid_shift(y, 1)));
  const BraidWord got = plat.apply(s, BraidWord{1}, BraidWord{1});
  EXPECT_TRUE(braid_eq(got, BraidWord{-2, 1, 2, 1}));
  EXPECT_EQ(normal_form(got, 3), normal_form(BraidWord{-2, 1, 2, 1}, 3));
  EXPECT_TRUE(braid_eq(BraidWord{1, 3}, BraidWord{3, 1}));
  EXPECT_FALSE(braid_eq(BraidWord{1}, BraidWord{2}));
  EXPECT_EQ(normal_form(BraidWord{1, 2, 1}, 3), normal_form(BraidWord{2, 1, 2}, 3));
  EXPECT_TRUE(validate_gsc_element(2, braid_tau(2, 2)));
  EXPECT_TRUE(validate_gsc_element(3, braid_tau(3, 3)));
  // sigma_1 with p = 2: sigma_1 sigma_3 sigma_1 vs sigma_3 sigma_1 sigma_3 differ
  EXPECT_FALSE(validate_gsc_element(2, BraidWord{1}));
}

TEST(BraidGsc, FailingConditionHasWitness) {
  using P = std::pair<BraidWord, BraidWord>;
  const BraidWord a1{1}, a2{1, 2};
  ASSERT_FALSE(check_prop_abc(PropVariant::a, 3, {P{a1, a2}}));
  BraidPlatform plat(6, 4);
  const OpId op = plat.add_pool_gsc(3, a1 * braid_tau(3, 3) * a2, {a1, 1, a2});
  Rng rng(909);
  auto triples = sample_triples<BraidWord>(20, rng, [&](Rng& r) { return plat.random_element(r); });
  EXPECT_FALSE(check_left_distributivity(plat, op, op, std::span<const Triple<BraidWord>>(triples)).ok());
  EXPECT_TRUE(check_prop_abc(PropVariant::a, 3, {P{BraidWord{}, BraidWord{}}}));
}

}  // namespace
}  // namespace ldkep
