#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ldkep/magma.hpp"

namespace ldkep {

/// Laver table L_n on {1..2^n}, the unique LD operation with k*1 = k+1 mod 2^n.
class LaverTable {
 public:
  explicit LaverTable(int n) : n_(n) {
    if (n < 1 || n > 10) throw std::invalid_argument("laver_table: n must be in 1..10");
    size_ = 1u << n;
    table_.assign(static_cast<std::size_t>(size_) * size_, 0);
    for (std::uint32_t l = 1; l <= size_; ++l) set(size_, l, static_cast<std::uint16_t>(l));
    // rows k*l > k for k < 2^n, so each row only reads rows below it
    for (std::uint32_t k = size_ - 1; k >= 1; --k) {
      set(k, 1, static_cast<std::uint16_t>(k + 1));
      for (std::uint32_t l = 1; l < size_; ++l) set(k, l + 1, at(at(k, l), k + 1));
    }
  }

  int n() const { return n_; }
  std::uint32_t size() const { return size_; }

  /// k * l, both 1-based.
  std::uint16_t at(std::uint32_t k, std::uint32_t l) const {
    if (k < 1 || k > size_ || l < 1 || l > size_) throw std::out_of_range("laver index");
    return table_[(k - 1) * size_ + (l - 1)];
  }

  std::vector<std::uint16_t> row(std::uint32_t k) const {
    std::vector<std::uint16_t> out;
    for (std::uint32_t l = 1; l <= size_; ++l) out.push_back(at(k, l));
    return out;
  }

 private:
  void set(std::uint32_t k, std::uint32_t l, std::uint16_t v) {
    table_[(k - 1) * size_ + (l - 1)] = v;
  }

  int n_;
  std::uint32_t size_ = 0;
  std::vector<std::uint16_t> table_;
};

inline LaverTable laver_table(int n) { return LaverTable(n); }

struct LaverOp {};

class LaverPlatform : public OpRegistry<LaverOp> {
 public:
  using Element = std::uint16_t;

  explicit LaverPlatform(int n) : table_(n) { star_ = add_op(LaverOp{}); }

  const LaverTable& table() const { return table_; }
  OpId star() const { return star_; }

  Element apply(OpId op, Element x, Element y) const {
    (void)this->op(op);
    return table_.at(x, y);
  }
  bool equal(Element x, Element y) const { return x == y; }
  void encode(Element x, Bytes& out) const { put_u16(out, x); }
  Element decode(ByteReader& in) const {
    Element x = in.u16();
    if (x < 1 || x > table_.size()) throw DecodeError("laver element out of range");
    return x;
  }
  Element random_element(Rng& rng) const {
    return static_cast<Element>(1 + rng.below(table_.size()));
  }
  std::vector<Element> all_elements() const {
    std::vector<Element> out;
    for (std::uint32_t k = 1; k <= table_.size(); ++k) out.push_back(static_cast<Element>(k));
    return out;
  }

 private:
  LaverTable table_;
  OpId star_;
};

/// x * y = f(y) on Z_n for an arbitrary map f, given by its value table.
class TrivialPlatform : public OpRegistry<std::vector<std::uint32_t>> {
 public:
  using Element = std::uint32_t;

  explicit TrivialPlatform(std::uint32_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("trivial platform: empty set");
  }

  std::uint32_t modulus() const { return n_; }

  OpId add_map(std::vector<std::uint32_t> f) {
    if (f.size() != n_) throw std::invalid_argument("trivial platform: map has wrong size");
    for (auto v : f)
      if (v >= n_) throw std::invalid_argument("trivial platform: map value out of range");
    return add_op(std::move(f));
  }

  Element apply(OpId op, Element, Element y) const { return op_map(op).at(y); }
  const std::vector<std::uint32_t>& op_map(OpId op) const { return this->op(op); }

  bool equal(Element x, Element y) const { return x == y; }
  void encode(Element x, Bytes& out) const { put_u32(out, x); }
  Element decode(ByteReader& in) const {
    Element x = in.u32();
    if (x >= n_) throw DecodeError("trivial element out of range");
    return x;
  }
  Element random_element(Rng& rng) const { return static_cast<Element>(rng.below(n_)); }
  std::vector<Element> all_elements() const {
    std::vector<Element> out(n_);
    for (std::uint32_t i = 0; i < n_; ++i) out[i] = i;
    return out;
  }

 private:
  std::uint32_t n_;
};

}  // namespace ldkep
