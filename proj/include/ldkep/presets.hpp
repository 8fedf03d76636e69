#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldkep/braid.hpp"
#include "ldkep/laver.hpp"
#include "ldkep/matrix.hpp"
#include "ldkep/perm_platform.hpp"
#include "ldkep/protocol.hpp"
#include "ldkep/rings.hpp"

namespace ldkep {

struct Preset {
  std::string name;
  std::string platform;
  std::string summary;
  SessionShape shape;
};

inline const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = {
      {"laver-3", "laver", "L_3, m=n=2, k=2, l=2", SessionShape::fixed(2, 2)},
      {"s4-conj", "perm-conj", "S_4 conjugacy, m=n=2, k=1, l=2", SessionShape::fixed(1, 2)},
      {"sym-3", "perm-gsc", "S_200, p=20, q=10, m=n=1, k in [2,30], l in [10,20]",
       SessionShape::ranged(2, 30, 10, 20)},
      {"frob", "matrix-fconj", "GL(6, F_2^40), Frobenius, m=n=8, k=25, l=10", SessionShape::fixed(25, 10)},
      {"ntru-like", "matrix-fsymm", "GL(4, F_17[X]/(X^16-1)), eval X=r, m=n=8, k=10, l=10",
       SessionShape::fixed(10, 10)},
      {"ratfn", "matrix-fsymm", "GL(4, F_37(t)), eval t=c, m=n=6, k=5, l=5", SessionShape::fixed(5, 5)},
      {"braid-1", "braid-gsc", "B_10 words L=15, p=6, q=3, L_ops=5, m=n=1, k=3, l=4",
       SessionShape::fixed(3, 4)},
      {"braid-1-scaled", "braid-gsc", "braid-1 with k=2, l=2", SessionShape::fixed(2, 2)},
      {"braid-2", "braid-bild", "B_4 words L=25, (*, *bar) with sigma_1^{+-1}, m=n=1, k=5, l=5",
       SessionShape::fixed(5, 5)},
      {"braid-2-scaled", "braid-bild", "braid-2 with l=3", SessionShape::fixed(5, 3)},
      {"sym-tiny", "perm-gsc", "S_8 quotient, p=4, q=2 (relaxed), generators in S_4, m=1, n=2, k=1, l=0",
       SessionShape::fixed(1, 0)},
  };
  return all;
}

inline const Preset& find_preset(const std::string& name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  throw std::invalid_argument("unknown preset: " + name);
}

/// Builds the public parameters of `name` from the "params" stream of `seed`
/// and calls fn(params, preset). fn must accept every platform's params type.
template <class Fn>
decltype(auto) with_preset(const std::string& name, std::uint64_t seed, Fn&& fn) {
  const Preset& preset = find_preset(name);
  Rng rng = Rng(seed).derive("params");
  auto finish = [&](auto params) -> decltype(auto) {
    params.seed = seed;
    return fn(params, preset);
  };

  if (name == "laver-3") {
    auto plat = std::make_shared<LaverPlatform>(3);
    const OpId op = plat->star();
    auto params = protocol1_params<LaverPlatform>(plat, op, 2, 2, rng);
    params.meta = {{"n", 3}, {"m", 2}};
    return finish(std::move(params));
  }
  if (name == "s4-conj") {
    auto plat = std::make_shared<PermPlatform>(4);
    const OpId op = plat->add_conj();
    auto params = protocol1_params<PermPlatform>(plat, op, 2, 2, rng);
    params.meta = {{"N", 4}, {"m", 2}};
    return finish(std::move(params));
  }
  if (name == "sym-3") {
    auto plat = std::make_shared<PermPlatform>(200);
    const auto pools = build_sym_partial_mld(*plat, 20, 10, 10, 30, 30, rng);
    auto params = make_params<PermPlatform>(plat, pools.pool_a, pools.pool_b, 1, 1, rng);
    params.meta = {{"N", 200}, {"p", 20}, {"q1", 10}, {"q2", 10}, {"m", 1}};
    return finish(std::move(params));
  }
  if (name == "sym-tiny") {
    // generators in S_{N-kp} keep b~ inside S_{N-p}, which the SCCP reduction needs
    auto plat = std::make_shared<PermPlatform>(4);
    const auto pools = build_sym_partial_mld(*plat, 4, 2, 2, 3, 3, rng, 64, false);
    auto params = make_params<PermPlatform>(plat, pools.pool_a, pools.pool_b, 1, 2, rng);
    params.meta = {{"N", 8}, {"p", 4}, {"q1", 2}, {"q2", 2}, {"m", 1}};
    return finish(std::move(params));
  }
  if (name == "frob") {
    using Plat = MatrixPlatform<FiniteField>;
    auto plat = std::make_shared<Plat>(FiniteField(2, 40), 6);
    const OpId op = plat->add_fconj(EndoSpec::frobenius(1));
    auto params = protocol1_params<Plat>(plat, op, 8, 8, rng);
    params.meta = {{"d", 6}, {"p", 2}, {"N", 40}, {"m", 8}};
    return finish(std::move(params));
  }
  if (name == "ntru-like") {
    using Plat = MatrixPlatform<TruncatedPolyRing>;
    const auto r = static_cast<std::uint32_t>(1 + rng.below(16));
    auto plat = std::make_shared<Plat>(TruncatedPolyRing(17, 16), 4);
    const OpId op = plat->add_fsymm(EndoSpec::eval_at(r));
    auto params = protocol1_params<Plat>(plat, op, 8, 8, rng);
    params.meta = {{"d", 4}, {"p", 17}, {"N", 16}, {"r", r}, {"m", 8}};
    return finish(std::move(params));
  }
  if (name == "ratfn") {
    using Plat = MatrixPlatform<RationalFunctionField>;
    const auto c = static_cast<std::uint32_t>(rng.below(37));
    auto plat = std::make_shared<Plat>(RationalFunctionField(37), 4);
    const OpId op = plat->add_fsymm(EndoSpec::eval_at(c));
    auto params = protocol1_params<Plat>(plat, op, 6, 6, rng);
    params.meta = {{"d", 4}, {"q", 37}, {"c", c}, {"m", 6}};
    return finish(std::move(params));
  }
  if (name == "braid-1" || name == "braid-1-scaled") {
    // one operation per iteration step, so the pools hold k operations
    const std::size_t k = preset.shape.k_a_max;
    auto plat = std::make_shared<BraidPlatform>(10, 15);
    const auto pools = build_braid_partial_mld(*plat, 6, 3, 3, 5, k, k, rng);
    auto params = make_params<BraidPlatform>(plat, pools.pool_a, pools.pool_b, 1, 1, rng);
    params.meta = {{"N", 10}, {"L", 15}, {"p", 6}, {"q1", 3}, {"q2", 3}, {"L_ops", 5}, {"m", 1}};
    return finish(std::move(params));
  }
  if (name == "braid-2" || name == "braid-2-scaled") {
    auto plat = std::make_shared<BraidPlatform>(4, 25);
    const OpId star = plat->add_gsc(1, BraidWord{1}, GscParts<BraidWord>{{}, 1, {}});
    const OpId bar = plat->add_gsc(1, BraidWord{-1}, GscParts<BraidWord>{{}, -1, {}});
    auto params = make_params<BraidPlatform>(plat, {star, bar}, {star, bar}, 1, 1, rng);
    params.meta = {{"N", 4}, {"L", 25}, {"p", 1}, {"m", 1}};
    return finish(std::move(params));
  }
  throw std::logic_error("preset without builder: " + name);
}

}  // namespace ldkep
