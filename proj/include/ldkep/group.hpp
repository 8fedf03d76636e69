#pragma once

#include <concepts>

namespace ldkep {

/// Ambient group for the conjugation-type operations: multiply, invert,
/// identity and exact equality.
template <class G>
concept Group = requires(const G& g, const typename G::Element& x) {
  typename G::Element;
  { g.mul(x, x) } -> std::same_as<typename G::Element>;
  { g.inv(x) } -> std::same_as<typename G::Element>;
  { g.identity() } -> std::same_as<typename G::Element>;
  { g.equal(x, x) } -> std::convertible_to<bool>;
};

/// x * y = x^-1 y x
template <Group G>
typename G::Element conj(const G& g, const typename G::Element& x, const typename G::Element& y) {
  return g.mul(g.mul(g.inv(x), y), x);
}

/// x o y = x y^-1 x
template <Group G>
typename G::Element symm_conj(const G& g, const typename G::Element& x,
                              const typename G::Element& y) {
  return g.mul(g.mul(x, g.inv(y)), x);
}

}  // namespace ldkep
