#include <gtest/gtest.h>

#include "ldkep/presets.hpp"
#include "ldkep/protocol.hpp"

namespace ldkep {
namespace {

template <class P>
Bytes transcript_bytes(const PublicParams<P>& params, const Transcript<typename P::Element>& tr) {
  Bytes out = encode_msg_a(params, tr.msg_a);
  const Bytes b = encode_msg_b(params, tr.msg_b);
  out.insert(out.end(), b.begin(), b.end());
  out.insert(out.end(), tr.key_bytes.begin(), tr.key_bytes.end());
  return out;
}

class PresetSessions : public ::testing::TestWithParam<std::string> {};

TEST_P(PresetSessions, KeysAgreeAndReplay) {
  for (std::uint64_t seed : {1u, 2u}) {
    with_preset(GetParam(), seed, [&](auto& params, const Preset& preset) {
      const auto tr = run_session(params, preset.shape, seed);
      EXPECT_TRUE(params.platform->equal(tr.key_a, tr.key_b));
      EXPECT_EQ(tr.msg_a.t_img.size(), params.n());
      EXPECT_EQ(tr.msg_b.s_img.size(), params.m());
      const auto again = run_session(params, preset.shape, seed);
      EXPECT_EQ(transcript_bytes(params, tr), transcript_bytes(params, again));
      // wire round trip
      const auto ma = decode_msg_a(params, encode_msg_a(params, tr.msg_a));
      const auto mb = decode_msg_b(params, encode_msg_b(params, tr.msg_b));
      EXPECT_TRUE(params.platform->equal(ma.p0, tr.msg_a.p0));
      EXPECT_TRUE(params.platform->equal(bob_shared(params, tr.bob, ma), tr.key_b));
      EXPECT_TRUE(params.platform->equal(alice_shared(params, tr.alice, mb), tr.key_a));
      return 0;
    });
  }
}

INSTANTIATE_TEST_SUITE_P(Fast, PresetSessions,
                         ::testing::Values("laver-3", "s4-conj", "sym-3", "frob", "ntru-like", "ratfn",
                                           "braid-1-scaled", "braid-2-scaled"),
                         [](const auto& info) {
                           std::string s = info.param;
                           for (auto& c : s)
                             if (c == '-') c = '_';
                           return s;
                         });

TEST(Protocol, ParamsAreDeterministicPerSeed) {
  const Digest h1 = with_preset("sym-3", 7, [](auto& p, const Preset&) { return p.hash(); });
  const Digest h2 = with_preset("sym-3", 7, [](auto& p, const Preset&) { return p.hash(); });
  const Digest h3 = with_preset("sym-3", 8, [](auto& p, const Preset&) { return p.hash(); });
  EXPECT_EQ(h1, h2);
  EXPECT_NE(h1, h3);
  EXPECT_THROW(find_preset("nope"), std::invalid_argument);
}

TEST(Protocol, WhiteBoxHomomorphismCommutation) {
  with_preset("sym-3", 11, [](auto& params, const Preset& preset) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto tr = run_session(params, preset.shape, seed);
      using E = typename std::decay_t<decltype(params)>::Element;
      const auto& plat = *params.platform;
      const auto a0 = eval_tree(plat, tr.alice.a0_tree, std::span<const E>(params.s));
      const auto direct = iter_apply(plat, tr.alice.hom, iter_apply(plat, tr.bob.hom(), a0));
      EXPECT_TRUE(plat.equal(direct, tr.key_a));
    }
    return 0;
  });
}

TEST(Protocol, ConjugacyChainByHand) {
  auto plat = std::make_shared<PermPlatform>(5);
  const OpId conj_op = plat->add_conj();
  Rng rng(3);
  const auto params = protocol1_params<PermPlatform>(plat, conj_op, 1, 1, rng);
  Rng ra(4), rb(5);
  const auto alice = alice_keygen(params, 1, 0, ra);
  const auto bob = bob_keygen(params, 1, 0, rb);
  const Perm a = alice.hom.xs[0], b = bob.b[0], a0 = params.s[0];
  EXPECT_EQ(b, params.t[0]);
  const auto ka = alice_shared(params, alice, bob_message(params, bob));
  const auto kb = bob_shared(params, bob, alice_message(params, alice));
  // x * y = x^-1 y x, so K = a^-1 b^-1 a0 b a
  const Perm expect = a.inverse() * b.inverse() * a0 * b * a;
  EXPECT_EQ(ka, expect);
  EXPECT_EQ(kb, expect);
}

TEST(Protocol, TrivialPlatformLeavesMessagesUnchanged) {
  auto plat = std::make_shared<TrivialPlatform>(5);
  const OpId id_op = plat->add_map({0, 1, 2, 3, 4});
  Rng rng(1);
  auto params = protocol1_params<TrivialPlatform>(plat, id_op, 3, 2, rng);
  const auto tr = run_session(params, SessionShape::fixed(3, 2), 9);
  for (std::size_t j = 0; j < params.m(); ++j) EXPECT_EQ(tr.msg_b.s_img[j], params.s[j]);
  // x * y = f(y): K = f^{k_A + k_B}(a0) = a0
  const auto a0 = eval_tree(*plat, tr.alice.a0_tree, std::span<const std::uint32_t>(params.s));
  EXPECT_EQ(tr.key_a, a0);
}

TEST(Protocol, ProtocolOneIsSingletonProtocolTwo) {
  auto plat = std::make_shared<LaverPlatform>(3);
  Rng r1(42), r2(42);
  const auto p1 = protocol1_params<LaverPlatform>(plat, plat->star(), 2, 2, r1);
  const auto p2 = make_params<LaverPlatform>(plat, {plat->star()}, {plat->star()}, 2, 2, r2);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto shape = SessionShape::fixed(2, 2);
    EXPECT_EQ(transcript_bytes(p1, run_session(p1, shape, seed)), transcript_bytes(p2, run_session(p2, shape, seed)));
  }
}

TEST(Protocol, KeyBytes) {
  BraidPlatform plat(4, 5);
  EXPECT_EQ(derive_key_bytes(plat, BraidWord{1, 2, 1}), derive_key_bytes(plat, BraidWord{2, 1, 2}));
  EXPECT_NE(derive_key_bytes(plat, BraidWord{1, 2, 1}), derive_key_bytes(plat, BraidWord{1, 2}));
  LaverPlatform lav(3);
  for (std::uint16_t x = 1; x <= 8; ++x)
    for (std::uint16_t y = x + 1; y <= 8; ++y) EXPECT_NE(derive_key_bytes(lav, x), derive_key_bytes(lav, y));
}

TEST(Protocol, RejectsMismatchedMessages) {
  with_preset("laver-3", 1, [](auto& params, const Preset& preset) {
    const auto tr = run_session(params, preset.shape, 1);
    auto short_b = tr.msg_b;
    short_b.s_img.pop_back();
    EXPECT_THROW(alice_shared(params, tr.alice, short_b), std::invalid_argument);
    Bytes enc = encode_msg_a(params, tr.msg_a);
    enc.pop_back();
    EXPECT_THROW(decode_msg_a(params, enc), DecodeError);
    return 0;
  });
}

// ---------------------------------------------------------------------------
// closed forms

void expect_closed_form(const std::string& preset_name, int seeds) {
  with_preset(preset_name, 5, [&](auto& params, const Preset& preset) {
    using Params = std::decay_t<decltype(params)>;
    if constexpr (requires(const Params& pp, const BobSecret<typename Params::Element>& b) {
                    closed_form_bob_public(*pp.platform, b, pp.s[0]);
                  }) {
      for (int seed = 1; seed <= seeds; ++seed) {
        const auto tr = run_session(params, preset.shape, static_cast<std::uint64_t>(seed));
        for (std::size_t j = 0; j < params.m(); ++j) {
          const auto cf = closed_form_bob_public(*params.platform, tr.bob, params.s[j]);
          EXPECT_TRUE(params.platform->equal(cf, tr.msg_b.s_img[j])) << preset_name << " seed " << seed;
        }
      }
    } else {
      ADD_FAILURE() << preset_name << " has no closed form";
    }
    return 0;
  });
}

TEST(ClosedForm, ShiftedConjugacyPermutations) { expect_closed_form("sym-3", 5); }
TEST(ClosedForm, ShiftedConjugacyBraidPools) { expect_closed_form("braid-1-scaled", 2); }
TEST(ClosedForm, ShiftedConjugacyBraidBiLd) { expect_closed_form("braid-2-scaled", 2); }
TEST(ClosedForm, FConjugacyFrobenius) { expect_closed_form("frob", 2); }
TEST(ClosedForm, FSymmetricTruncated) { expect_closed_form("ntru-like", 3); }
TEST(ClosedForm, FSymmetricRational) { expect_closed_form("ratfn", 3); }

TEST(ClosedForm, BraidBiLdDepthThree) {
  auto plat = std::make_shared<BraidPlatform>(4, 6);
  const OpId star = plat->add_gsc(1, BraidWord{1}, GscParts<BraidWord>{{}, 1, {}});
  const OpId bar = plat->add_gsc(1, BraidWord{-1}, GscParts<BraidWord>{{}, -1, {}});
  Rng rng(21);
  const auto params = make_params<BraidPlatform>(plat, {star, bar}, {star, bar}, 1, 1, rng);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rb(seed);
    const auto bob = bob_keygen(params, 3, 1, rb);
    const auto msg = bob_message(params, bob);
    EXPECT_TRUE(braid_eq(closed_form_bob_public(*plat, bob, params.s[0]), msg.s_img[0]));
  }
}

TEST(ClosedForm, FConjugacySignOfPrefix) {
  using Plat = MatrixPlatform<FiniteField>;
  auto plat = std::make_shared<Plat>(FiniteField(3, 2), 2);
  const OpId op = plat->add_fconj(EndoSpec::frobenius(1));
  Rng rng(2);
  const auto params = protocol1_params<Plat>(plat, op, 2, 2, rng);
  const auto& alg = plat->algebra();
  int printed_matches = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rb(seed);
    const auto bob = bob_keygen(params, 3, 2, rb);
    const auto msg = bob_message(params, bob);
    for (std::size_t j = 0; j < params.m(); ++j) {
      EXPECT_EQ(closed_form_bob_public(*plat, bob, params.s[j]), msg.s_img[j]);
      // the variant with prefix f(b~) instead of f(b~^-1)
      auto bt = alg.identity();
      for (std::size_t i = 0; i < 3; ++i) bt = alg.mul(bt, endo_power(alg, EndoSpec::frobenius(1), bob.b[i], 2 - i));
      const auto printed = alg.mul(alg.mul(alg.apply_endo(EndoSpec::frobenius(1), bt),
                                           endo_power(alg, EndoSpec::frobenius(1), params.s[j], 3)),
                                   bt);
      printed_matches += printed == msg.s_img[j];
    }
  }
  EXPECT_LT(printed_matches, 40);
}

TEST(ClosedForm, FSymmetricDepthOne) {
  using Plat = MatrixPlatform<TruncatedPolyRing>;
  auto plat = std::make_shared<Plat>(TruncatedPolyRing(17, 16), 3);
  const EndoSpec f = EndoSpec::eval_at(3);
  const OpId op = plat->add_fsymm(f);
  Rng rng(8);
  const auto params = protocol1_params<Plat>(plat, op, 2, 2, rng);
  const auto& alg = plat->algebra();
  Rng rb(1);
  const auto bob = bob_keygen(params, 1, 2, rb);
  const auto msg = bob_message(params, bob);
  const auto& b1 = bob.b[0];
  for (std::size_t j = 0; j < 2; ++j) {
    const auto expect =
        alg.mul(alg.mul(alg.apply_endo(f, b1), alg.apply_endo(f, alg.inverse(params.s[j]))), b1);
    EXPECT_EQ(msg.s_img[j], expect);
  }
}

}  // namespace
}  // namespace ldkep
