#include <gtest/gtest.h>

#include <future>
#include <thread>

#include "ldkep/presets.hpp"
#include "ldkep/wire.hpp"

namespace ldkep {
namespace {

TEST(Frames, RoundTrip) {
  const Bytes payload{1, 2, 3, 250};
  const Bytes f = encode_frame(FrameType::msg_b, payload);
  ASSERT_EQ(f.size(), 9u);
  EXPECT_EQ(f[0], 0);
  EXPECT_EQ(f[3], 4);
  EXPECT_EQ(f[4], 0x03);
  const Frame d = decode_frame(f);
  EXPECT_EQ(d.type, FrameType::msg_b);
  EXPECT_EQ(d.payload, payload);
}

TEST(Frames, Malformed) {
  Bytes f = encode_frame(FrameType::params_hash, Bytes(32, 7));
  EXPECT_THROW(decode_frame(std::span<const std::uint8_t>(f).first(4)), FrameError);
  EXPECT_THROW(decode_frame(std::span<const std::uint8_t>(f).first(20)), FrameError);
  Bytes extra = f;
  extra.push_back(0);
  EXPECT_THROW(decode_frame(extra), FrameError);
  f[4] = 0x09;
  EXPECT_THROW(decode_frame(f), FrameError);
  EXPECT_NO_THROW(decode_frame(encode_frame(FrameType::key_confirm, Bytes{})));
}

TEST(Frames, KeyConfirmIsKeyPrefix) {
  Digest d{};
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = static_cast<std::uint8_t>(i * 3);
  const KeyConfirm c = key_confirm(d);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(c[i], d[i]);
}

TEST(Frames, HostPort) {
  EXPECT_EQ(parse_host_port("127.0.0.1:80").second, 80);
  EXPECT_EQ(parse_host_port(":0").first, "");
  EXPECT_THROW(parse_host_port("localhost"), std::invalid_argument);
  EXPECT_THROW(parse_host_port("h:70000"), std::invalid_argument);
  EXPECT_THROW(parse_host_port("h:8x"), std::invalid_argument);
}

template <class Params>
std::pair<PeerResult<typename Params::Element>, PeerResult<typename Params::Element>> loopback(
    const Params& alice_params, const Params& bob_params, const SessionShape& shape, std::uint64_t seed) {
  Listener l("127.0.0.1:0");
  const std::string addr = "127.0.0.1:" + std::to_string(l.port());
  auto bob = std::async(std::launch::async, [&] {
    Socket s = connect_to(addr);
    return run_peer(bob_params, shape, seed, PeerRole::bob, s);
  });
  Socket s = l.accept();
  auto a = run_peer(alice_params, shape, seed, PeerRole::alice, s);
  return {a, bob.get()};
}

class PeerLoopback : public ::testing::TestWithParam<std::string> {};

TEST_P(PeerLoopback, MatchesInProcessSession) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    with_preset(GetParam(), seed, [&](auto& params, const Preset& preset) {
      const auto [a, b] = loopback(params, params, preset.shape, seed);
      const auto tr = run_session(params, preset.shape, seed);
      EXPECT_TRUE(a.confirmed());
      EXPECT_TRUE(b.confirmed());
      EXPECT_EQ(a.key_bytes, tr.key_bytes);
      EXPECT_EQ(b.key_bytes, tr.key_bytes);
      EXPECT_EQ(a.own, key_confirm(tr.key_bytes));
      return 0;
    });
  }
}

INSTANTIATE_TEST_SUITE_P(Presets, PeerLoopback, ::testing::Values("laver-3", "sym-3", "braid-2-scaled"),
                         [](const auto& info) {
                           std::string s = info.param;
                           for (auto& c : s)
                             if (c == '-') c = '_';
                           return s;
                         });

TEST(PeerLoopbackAbort, ParamsHashMismatch) {
  with_preset("laver-3", 1, [&](auto& p1, const Preset& preset) {
    with_preset("laver-3", 2, [&](auto& p2, const Preset&) {
      using P1 = std::decay_t<decltype(p1)>;
      using P2 = std::decay_t<decltype(p2)>;
      if constexpr (std::is_same_v<P1, P2>) {
        EXPECT_NE(p1.hash(), p2.hash());
        Listener l("127.0.0.1:0");
        const std::string addr = "127.0.0.1:" + std::to_string(l.port());
        auto bob = std::async(std::launch::async, [&] {
          Socket s = connect_to(addr);
          return run_peer(p2, preset.shape, 1, PeerRole::bob, s);
        });
        Socket s = l.accept();
        EXPECT_THROW(run_peer(p1, preset.shape, 1, PeerRole::alice, s), ProtocolAbort);
        EXPECT_THROW(bob.get(), ProtocolAbort);
      }
      return 0;
    });
    return 0;
  });
}

TEST(PeerLoopbackAbort, TruncatedFrame) {
  Listener l("127.0.0.1:0");
  const std::string addr = "127.0.0.1:" + std::to_string(l.port());
  auto writer = std::async(std::launch::async, [&] {
    Socket s = connect_to(addr);
    const Bytes f = encode_frame(FrameType::params_hash, Bytes(32, 1));
    s.send_all(std::span<const std::uint8_t>(f).first(10));
  });
  Socket s = l.accept();
  writer.get();
  EXPECT_THROW(s.read_frame(), FrameError);
}

}  // namespace
}  // namespace ldkep
