#pragma once

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldkep/braid.hpp"
#include "ldkep/laver.hpp"
#include "ldkep/matrix.hpp"
#include "ldkep/perm_platform.hpp"

namespace ldkep {

struct LawSuiteResult {
  std::string name;
  std::string structure;
  std::size_t checks = 0;  // (triple, law) evaluations
  std::size_t failures = 0;
  bool exhaustive = false;
  double ms = 0;

  bool ok() const { return failures == 0 && checks > 0; }
};

/// Named law checks over every registered distributive structure. "laver:N"
/// is exhaustive; the others use `samples` random triples per law.
inline const std::vector<std::string>& law_suite_names() {
  static const std::vector<std::string> names{"laver:1",    "laver:2",    "laver:3",     "laver:4",
                                              "conj",       "symm",       "shifted",     "braid-shifted",
                                              "braid-pools", "sym-pools", "frob",        "fsymm-trunc",
                                              "fsymm-ratfn"};
  return names;
}

namespace detail {

template <Platform P>
void tally(LawSuiteResult& r, const LawReport<typename P::Element>& rep) {
  r.checks += rep.samples_tested;
  r.failures += rep.failures.size();
}

template <Platform P, class Gen>
void check_self(LawSuiteResult& r, const P& plat, const std::vector<OpId>& ops, std::size_t samples, Rng& rng,
                Gen gen) {
  using E = typename P::Element;
  const auto triples = sample_triples<E>(samples, rng, gen);
  for (OpId o : ops) tally<P>(r, check_left_distributivity(plat, o, o, std::span<const Triple<E>>(triples)));
}

template <Platform P, class Gen>
void check_mutual(LawSuiteResult& r, const P& plat, const std::vector<OpId>& a, const std::vector<OpId>& b,
                  std::size_t samples, Rng& rng, Gen gen) {
  using E = typename P::Element;
  const auto triples = sample_triples<E>(samples, rng, gen);
  tally<P>(r, check_mutual_distributivity(plat, std::span<const OpId>(a), std::span<const OpId>(b),
                                          std::span<const Triple<E>>(triples)));
}

}  // namespace detail

inline LawSuiteResult run_law_suite(const std::string& name, std::size_t samples, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  LawSuiteResult r;
  r.name = name;
  Rng rng = Rng(seed).derive("laws:" + name);
  if (name.rfind("laver:", 0) == 0) {
    int n = 0;
    try {
      n = std::stoi(name.substr(6));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad Laver size in " + name);
    }
    if (n < 1 || n > 6) throw std::invalid_argument("Laver size must be in 1..6");
    LaverPlatform lp(n);
    std::vector<Triple<std::uint16_t>> triples;
    for (auto x : lp.all_elements())
      for (auto y : lp.all_elements())
        for (auto z : lp.all_elements()) triples.push_back({x, y, z});
    detail::tally<LaverPlatform>(
        r, check_left_distributivity(lp, lp.star(), lp.star(), std::span<const Triple<std::uint16_t>>(triples)));
    r.structure = "Laver table L_" + std::to_string(n) + ", LD";
    r.exhaustive = true;
  } else if (name == "conj" || name == "symm" || name == "shifted") {
    PermPlatform pp(12);
    const OpId op = name == "conj"   ? pp.add_conj()
                    : name == "symm" ? pp.add_symm_conj()
                                     : pp.add_gsc(1, Perm::transposition(1, 2));
    detail::check_self(r, pp, {op}, samples, rng, [](Rng& g) { return random_perm(12, g); });
    r.structure = name == "conj"   ? "S_12 conjugacy, LD"
                  : name == "symm" ? "S_12 symmetric conjugacy, LD"
                                   : "S_12 shifted conjugacy p=1, LD";
  } else if (name == "braid-shifted") {
    BraidPlatform bp(5, 6);
    const OpId up = bp.add_gsc(1, BraidWord{1});
    const OpId down = bp.add_gsc(1, BraidWord{-1});
    auto gen = [&](Rng& g) { return bp.random_element(g); };
    detail::check_self(r, bp, {up, down}, samples, rng, gen);
    detail::check_mutual(r, bp, {up}, {down}, samples, rng, gen);
    r.structure = "B_5 shifted conjugacy sigma_1^{+-1}, bi-LD";
  } else if (name == "braid-pools") {
    BraidPlatform bp(14, 6);
    const auto pools = build_braid_partial_mld(bp, 6, 3, 3, 5, 2, 2, rng, 0);
    detail::check_mutual(r, bp, pools.pool_a, pools.pool_b, samples, rng,
                         [&](Rng& g) { return bp.random_element(g); });
    r.structure = "B_14 partial multi-LD pools p=6 q=3, mutual LD";
  } else if (name == "sym-pools") {
    PermPlatform pp(60);
    const auto pools = build_sym_partial_mld(pp, 20, 10, 10, 3, 3, rng, 0);
    detail::check_mutual(r, pp, pools.pool_a, pools.pool_b, samples, rng, [](Rng& g) { return random_perm(60, g); });
    r.structure = "S_60 partial multi-LD pools p=20 q=10, mutual LD";
  } else if (name == "frob") {
    MatrixPlatform<FiniteField> mp(FiniteField(2, 8), 3);
    const OpId op = mp.add_fconj(EndoSpec::frobenius(1));
    detail::check_self(r, mp, {op}, samples, rng, [&](Rng& g) { return mp.random_element(g); });
    r.structure = "GL(3, F_256) Frobenius f-conjugacy, LD";
  } else if (name == "fsymm-trunc") {
    MatrixPlatform<TruncatedPolyRing> mp(TruncatedPolyRing(17, 16), 3);
    const OpId op = mp.add_fsymm(EndoSpec::eval_at(2));
    detail::check_self(r, mp, {op}, samples, rng, [&](Rng& g) { return mp.random_element(g); });
    r.structure = "GL(3, F_17[X]/(X^16-1)) f-symmetric conjugacy eval at 2, LD";
  } else if (name == "fsymm-ratfn") {
    MatrixPlatform<RationalFunctionField> mp(RationalFunctionField(37), 2);
    const OpId op = mp.add_fsymm(EndoSpec::eval_at(7));
    detail::check_self(r, mp, {op}, samples, rng, [&](Rng& g) { return mp.random_element(g); });
    r.structure = "GL(2, F_37(t)) f-symmetric conjugacy eval at 7, LD";
  } else {
    throw std::invalid_argument("unknown law suite: " + name);
  }
  r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace ldkep
