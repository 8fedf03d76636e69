#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ldkep/magma.hpp"

namespace ldkep {

/// Indices (x, y, z) with x -> y -> z but not x -> z.
struct TransitivityWitness {
  std::size_t x, y, z;
};

struct ReachabilityResult {
  std::size_t elements = 0;
  std::size_t edges = 0;
  std::optional<TransitivityWitness> witness;
  bool transitive() const { return !witness.has_value(); }
};

/// Builds x -> y iff y = c * x for some c, over an exhaustive element list
/// closed under the operation, and tests transitivity. Products rejected by
/// the platform contribute no edge.
template <Platform P>
ReachabilityResult check_reachability_transitive(const P& platform, OpId op,
                                                 const std::vector<typename P::Element>& elements,
                                                 std::size_t exhaustive_bound = 4096) {
  const std::size_t n = elements.size();
  if (n == 0) throw std::invalid_argument("empty element list");
  if (n > exhaustive_bound) throw std::invalid_argument("element list exceeds exhaustive bound");
  std::map<Bytes, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(encode_element(platform, elements[i]), i);
  if (index.size() != n) throw std::invalid_argument("element list has duplicates");

  ReachabilityResult res;
  res.elements = n;
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t c = 0; c < n; ++c) {
      typename P::Element y;
      try {
        y = platform.apply(op, elements[c], elements[x]);
      } catch (const OperationRejected&) {
        continue;
      }
      auto it = index.find(encode_element(platform, y));
      if (it == index.end()) throw std::logic_error("element list is not closed under the operation");
      if (!reach[x][it->second]) {
        reach[x][it->second] = true;
        ++res.edges;
      }
    }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (!reach[x][y]) continue;
      for (std::size_t z = 0; z < n; ++z)
        if (reach[y][z] && !reach[x][z]) {
          res.witness = TransitivityWitness{x, y, z};
          return res;
        }
    }
  return res;
}

}  // namespace ldkep
