#pragma once

#include <array>
#include <atomic>
#include <concepts>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldkep/bytes.hpp"
#include "ldkep/rng.hpp"

namespace ldkep {

/// An operation refused its operands, e.g. an endomorphism image that is not
/// invertible. Key generation redraws the offending element.
struct OperationRejected : std::domain_error {
  using std::domain_error::domain_error;
};

/// Names one binary operation inside a platform's operation pool.
struct OpId {
  std::uint32_t platform = 0;
  std::uint16_t index = 0;

  friend bool operator==(const OpId&, const OpId&) = default;
};

inline std::uint32_t next_platform_tag() {
  static std::atomic<std::uint32_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

/// A set with a family of binary operations and exact equality.
template <class P>
concept Platform = requires(const P& p, const typename P::Element& x, OpId op, Bytes& out) {
  typename P::Element;
  { p.apply(op, x, x) } -> std::same_as<typename P::Element>;
  { p.equal(x, x) } -> std::convertible_to<bool>;
  { p.encode(x, out) };
  { p.tag() } -> std::convertible_to<std::uint32_t>;
  { p.op_count() } -> std::convertible_to<std::size_t>;
};

/// Platforms usable by the key-exchange engine additionally sample elements
/// and parse canonical encodings.
template <class P>
concept ProtocolPlatform = Platform<P> && requires(const P& p, Rng& rng, ByteReader& in) {
  { p.random_element(rng) } -> std::same_as<typename P::Element>;
  { p.decode(in) } -> std::same_as<typename P::Element>;
};

/// Operation storage shared by the concrete platforms. Each registered
/// descriptor gets an OpId stamped with the owning platform's tag.
template <class Desc>
class OpRegistry {
 public:
  OpRegistry() : tag_(next_platform_tag()) {}

  std::uint32_t tag() const { return tag_; }
  std::size_t op_count() const { return ops_.size(); }

  OpId add_op(Desc d) {
    if (ops_.size() >= 0xffff) throw std::length_error("operation pool full");
    ops_.push_back(std::move(d));
    return OpId{tag_, static_cast<std::uint16_t>(ops_.size() - 1)};
  }

  const Desc& op(OpId id) const {
    if (id.platform != tag_) throw std::invalid_argument("operation belongs to another platform");
    if (id.index >= ops_.size()) throw std::invalid_argument("operation not registered");
    return ops_[id.index];
  }

  OpId op_id(std::size_t index) const {
    if (index >= ops_.size()) throw std::invalid_argument("operation not registered");
    return OpId{tag_, static_cast<std::uint16_t>(index)};
  }

 private:
  std::uint32_t tag_;
  std::vector<Desc> ops_;
};

template <Platform P>
Bytes encode_element(const P& platform, const typename P::Element& x) {
  Bytes out;
  platform.encode(x, out);
  return out;
}

// ---------------------------------------------------------------------------
// Tree words

/// Planar rooted binary tree. Leaves hold generator indices, internal nodes
/// hold operations. Stored in post-order so children precede parents and the
/// root is the last node.
class TreeWord {
 public:
  struct Node {
    bool leaf = true;
    std::uint32_t generator = 0;
    OpId op{};
    std::uint32_t left = 0;
    std::uint32_t right = 0;
  };

  static TreeWord leaf(std::uint32_t generator) {
    TreeWord t;
    t.nodes_.push_back(Node{true, generator, {}, 0, 0});
    return t;
  }

  static TreeWord node(OpId op, const TreeWord& left, const TreeWord& right) {
    TreeWord t;
    t.nodes_.reserve(left.nodes_.size() + right.nodes_.size() + 1);
    t.append_shifted(left, 0);
    const auto left_root = static_cast<std::uint32_t>(t.nodes_.size() - 1);
    t.append_shifted(right, static_cast<std::uint32_t>(left.nodes_.size()));
    const auto right_root = static_cast<std::uint32_t>(t.nodes_.size() - 1);
    t.nodes_.push_back(Node{false, 0, op, left_root, right_root});
    return t;
  }

  std::span<const Node> nodes() const { return nodes_; }
  const Node& root() const { return nodes_.back(); }

  std::size_t internal_count() const {
    std::size_t n = 0;
    for (const auto& nd : nodes_) n += nd.leaf ? 0 : 1;
    return n;
  }
  std::size_t leaf_count() const { return nodes_.size() - internal_count(); }

  /// Leaf generator indices, left to right.
  std::vector<std::uint32_t> leaves() const {
    std::vector<std::uint32_t> out;
    for (const auto& nd : nodes_)
      if (nd.leaf) out.push_back(nd.generator);
    return out;
  }

  /// Left and right subtrees of an internal root.
  std::pair<TreeWord, TreeWord> children() const {
    if (root().leaf) throw std::logic_error("leaf has no children");
    return {subtree(root().left), subtree(root().right)};
  }

  friend bool operator==(const TreeWord&, const TreeWord&) = default;

 private:
  TreeWord subtree(std::uint32_t idx) const {
    const Node& nd = nodes_[idx];
    if (nd.leaf) return leaf(nd.generator);
    return node(nd.op, subtree(nd.left), subtree(nd.right));
  }

  void append_shifted(const TreeWord& other, std::uint32_t offset) {
    for (Node nd : other.nodes_) {
      if (!nd.leaf) {
        nd.left += offset;
        nd.right += offset;
      }
      nodes_.push_back(nd);
    }
  }

  std::vector<Node> nodes_;
};

inline bool operator==(const TreeWord::Node& a, const TreeWord::Node& b) {
  return a.leaf == b.leaf && a.generator == b.generator && a.op == b.op && a.left == b.left &&
         a.right == b.right;
}

/// Bottom-up fold: Leaf i -> leaf_values[i], Node(op, L, R) -> op(L, R).
template <Platform P>
typename P::Element eval_tree(const P& platform, const TreeWord& tree,
                              std::span<const typename P::Element> leaf_values) {
  using E = typename P::Element;
  const auto nodes = tree.nodes();
  std::vector<E> values;
  values.reserve(nodes.size());
  for (const auto& nd : nodes) {
    if (nd.leaf) {
      if (nd.generator >= leaf_values.size())
        throw std::out_of_range("tree leaf index out of range");
      values.push_back(leaf_values[nd.generator]);
    } else {
      values.push_back(platform.apply(nd.op, values[nd.left], values[nd.right]));
    }
  }
  return std::move(values.back());
}

/// S-expression rendering, e.g. "(* (* g0 g1) g0)". Operation index 0 renders
/// as "*", index k > 0 as "*k".
inline std::string to_sexpr(const TreeWord& tree) {
  const auto nodes = tree.nodes();
  std::vector<std::string> text;
  text.reserve(nodes.size());
  for (const auto& nd : nodes) {
    if (nd.leaf) {
      text.push_back("g" + std::to_string(nd.generator));
    } else {
      std::string op = nd.op.index == 0 ? "*" : "*" + std::to_string(nd.op.index);
      text.push_back("(" + op + " " + text[nd.left] + " " + text[nd.right] + ")");
    }
  }
  return text.back();
}

/// Inverse of to_sexpr. Operation ids are bound to the given platform tag.
inline TreeWord parse_sexpr(std::string_view text, std::uint32_t platform_tag) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == ',' || text[pos] == '\n'))
      ++pos;
  };
  auto read_number = [&]() -> std::uint32_t {
    std::size_t start = pos;
    std::uint32_t v = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9')
      v = v * 10 + static_cast<std::uint32_t>(text[pos++] - '0');
    if (pos == start) throw std::invalid_argument("expected number in tree expression");
    return v;
  };
  auto parse = [&](auto&& self) -> TreeWord {
    skip_ws();
    if (pos >= text.size()) throw std::invalid_argument("unexpected end of tree expression");
    if (text[pos] == 'g') {
      ++pos;
      return TreeWord::leaf(read_number());
    }
    if (text[pos] != '(') throw std::invalid_argument("expected '(' or leaf in tree expression");
    ++pos;
    skip_ws();
    if (pos >= text.size() || text[pos] != '*') throw std::invalid_argument("expected operation");
    ++pos;
    std::uint16_t index = 0;
    if (pos < text.size() && text[pos] >= '0' && text[pos] <= '9')
      index = static_cast<std::uint16_t>(read_number());
    TreeWord left = self(self);
    TreeWord right = self(self);
    skip_ws();
    if (pos >= text.size() || text[pos] != ')') throw std::invalid_argument("expected ')'");
    ++pos;
    return TreeWord::node(OpId{platform_tag, index}, left, right);
  };
  TreeWord t = parse(parse);
  skip_ws();
  if (pos != text.size()) throw std::invalid_argument("trailing characters in tree expression");
  return t;
}

namespace detail {

inline std::uint64_t catalan(std::size_t n) {
  static const auto table = [] {
    std::array<std::uint64_t, 36> c{};
    c[0] = 1;
    for (std::size_t i = 1; i < c.size(); ++i) {
      unsigned __int128 acc = 0;
      for (std::size_t j = 0; j < i; ++j) acc += static_cast<unsigned __int128>(c[j]) * c[i - 1 - j];
      c[i] = static_cast<std::uint64_t>(acc);
    }
    return c;
  }();
  if (n >= table.size()) throw std::out_of_range("tree too large for exact Catalan sampling");
  return table[n];
}

}  // namespace detail

/// Random tree with exactly `internal` internal nodes. The shape is uniform
/// over all binary trees of that size; leaves and operations are i.i.d.
/// uniform.
inline TreeWord random_tree(std::size_t internal, std::size_t num_generators,
                            std::span<const OpId> op_pool, Rng& rng) {
  if (op_pool.empty()) throw std::invalid_argument("random_tree: empty operation pool");
  if (num_generators == 0) throw std::invalid_argument("random_tree: no generators");
  auto build = [&](auto&& self, std::size_t n) -> TreeWord {
    if (n == 0) return TreeWord::leaf(static_cast<std::uint32_t>(rng.below(num_generators)));
    // left subtree gets i nodes with weight C_i * C_{n-1-i}
    std::uint64_t pick = rng.below(detail::catalan(n));
    std::size_t left = 0;
    for (;; ++left) {
      const std::uint64_t w = detail::catalan(left) * detail::catalan(n - 1 - left);
      if (pick < w) break;
      pick -= w;
    }
    const OpId op = op_pool[rng.below(op_pool.size())];
    TreeWord l = self(self, left);
    TreeWord r = self(self, n - 1 - left);
    return TreeWord::node(op, l, r);
  };
  return build(build, internal);
}

// ---------------------------------------------------------------------------
// Iterated left multiplication

template <class E>
struct IterHom {
  std::vector<E> xs;
  std::vector<OpId> ops;

  std::size_t depth() const { return xs.size(); }
};

/// y -> x_k *_k ( ... (x_2 *_2 (x_1 *_1 y)) ... ), innermost first.
template <Platform P>
typename P::Element iter_apply(const P& platform, const IterHom<typename P::Element>& h,
                               typename P::Element y) {
  if (h.xs.empty()) throw std::invalid_argument("iter_apply: empty homomorphism");
  if (h.xs.size() != h.ops.size())
    throw std::invalid_argument("iter_apply: element and operation vectors differ in length");
  for (std::size_t i = 0; i < h.xs.size(); ++i) y = platform.apply(h.ops[i], h.xs[i], y);
  return y;
}

// ---------------------------------------------------------------------------
// Law checking

template <class E>
struct LawFailure {
  E x, y, z;
  OpId outer, inner;
};

template <class E>
struct LawReport {
  std::size_t samples_tested = 0;
  std::vector<LawFailure<E>> failures;

  bool ok() const { return failures.empty(); }

  void merge(LawReport other) {
    samples_tested += other.samples_tested;
    for (auto& f : other.failures) failures.push_back(std::move(f));
  }
};

template <class E>
struct Triple {
  E x, y, z;
};

/// Checks x o (y . z) == (x o y) . (x o z) for outer o and inner . on every
/// triple. outer == inner checks plain left self-distributivity.
template <Platform P>
LawReport<typename P::Element> check_left_distributivity(
    const P& platform, OpId outer, OpId inner,
    std::span<const Triple<typename P::Element>> triples) {
  if (outer.platform != inner.platform)
    throw std::invalid_argument("operations from different platforms");
  LawReport<typename P::Element> report;
  for (const auto& t : triples) {
    ++report.samples_tested;
    auto lhs = platform.apply(outer, t.x, platform.apply(inner, t.y, t.z));
    auto rhs = platform.apply(inner, platform.apply(outer, t.x, t.y), platform.apply(outer, t.x, t.z));
    if (!platform.equal(lhs, rhs)) report.failures.push_back({t.x, t.y, t.z, outer, inner});
  }
  return report;
}

/// Both orientations over every pair in pool_a x pool_b.
template <Platform P>
LawReport<typename P::Element> check_mutual_distributivity(
    const P& platform, std::span<const OpId> pool_a, std::span<const OpId> pool_b,
    std::span<const Triple<typename P::Element>> triples) {
  LawReport<typename P::Element> report;
  for (OpId a : pool_a)
    for (OpId b : pool_b) {
      report.merge(check_left_distributivity(platform, a, b, triples));
      report.merge(check_left_distributivity(platform, b, a, triples));
    }
  return report;
}

/// Checks h(y1 . y2) == h(y1) . h(y2) for every pair and every . in op_pool.
/// Failures record (y1, y2, y2) with outer = inner = the product operation.
template <Platform P>
LawReport<typename P::Element> check_endomorphism(
    const P& platform, const IterHom<typename P::Element>& h, std::span<const OpId> op_pool,
    std::span<const std::pair<typename P::Element, typename P::Element>> pairs) {
  LawReport<typename P::Element> report;
  for (OpId op : op_pool) {
    for (const auto& [y1, y2] : pairs) {
      ++report.samples_tested;
      auto lhs = iter_apply(platform, h, platform.apply(op, y1, y2));
      auto rhs = platform.apply(op, iter_apply(platform, h, y1), iter_apply(platform, h, y2));
      if (!platform.equal(lhs, rhs)) report.failures.push_back({y1, y2, y2, op, op});
    }
  }
  return report;
}

template <class E, class Gen>
std::vector<Triple<E>> sample_triples(std::size_t count, Rng& rng, Gen&& gen) {
  std::vector<Triple<E>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    E x = gen(rng);
    E y = gen(rng);
    E z = gen(rng);
    out.push_back({std::move(x), std::move(y), std::move(z)});
  }
  return out;
}

}  // namespace ldkep
