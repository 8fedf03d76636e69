#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldkep/magma.hpp"
#include "ldkep/rings.hpp"

namespace ldkep {

/// Square matrix, row-major.
template <class E>
struct Mat {
  std::uint32_t d = 0;
  std::vector<E> a;

  const E& operator()(std::uint32_t i, std::uint32_t j) const { return a[i * d + j]; }
  E& operator()(std::uint32_t i, std::uint32_t j) { return a[i * d + j]; }

  friend bool operator==(const Mat&, const Mat&) = default;
};

/// Matrix arithmetic over a commutative ring context.
template <class Ring>
class MatrixAlgebra {
 public:
  using E = typename Ring::Element;
  using M = Mat<E>;

  MatrixAlgebra(Ring ring, std::uint32_t d) : ring_(std::move(ring)), d_(d) {
    if (d < 1 || d > 12) throw std::invalid_argument("matrix dimension must be in 1..12");
  }

  const Ring& ring() const { return ring_; }
  std::uint32_t dim() const { return d_; }

  M identity() const {
    M r{d_, std::vector<E>(d_ * d_, ring_.zero())};
    for (std::uint32_t i = 0; i < d_; ++i) r(i, i) = ring_.one();
    return r;
  }

  M mul(const M& x, const M& y) const {
    M r{d_, std::vector<E>(d_ * d_, ring_.zero())};
    for (std::uint32_t i = 0; i < d_; ++i)
      for (std::uint32_t k = 0; k < d_; ++k) {
        if (ring_.is_zero(x(i, k))) continue;
        for (std::uint32_t j = 0; j < d_; ++j) r(i, j) = ring_.add(r(i, j), ring_.mul(x(i, k), y(k, j)));
      }
    return r;
  }

  M random_entries(Rng& rng) const {
    M r{d_, {}};
    r.a.reserve(d_ * d_);
    for (std::uint32_t i = 0; i < d_ * d_; ++i) r.a.push_back(ring_.random(rng));
    return r;
  }

  M apply_endo(const EndoSpec& f, const M& x) const {
    M r{d_, {}};
    r.a.reserve(x.a.size());
    for (const auto& e : x.a) r.a.push_back(ring_.apply_endo(f, e));
    return r;
  }

  E det(const M& x) const {
    if constexpr (Ring::is_field) {
      M w = x;
      E acc = ring_.one();
      for (std::uint32_t c = 0; c < d_; ++c) {
        std::uint32_t piv = c;
        while (piv < d_ && ring_.is_zero(w(piv, c))) ++piv;
        if (piv == d_) return ring_.zero();
        if (piv != c) {
          for (std::uint32_t j = 0; j < d_; ++j) std::swap(w(piv, j), w(c, j));
          acc = ring_.neg(acc);
        }
        acc = ring_.mul(acc, w(c, c));
        const E inv = ring_.inv(w(c, c));
        for (std::uint32_t i = c + 1; i < d_; ++i) {
          if (ring_.is_zero(w(i, c))) continue;
          const E factor = ring_.mul(w(i, c), inv);
          for (std::uint32_t j = c; j < d_; ++j) w(i, j) = ring_.sub(w(i, j), ring_.mul(factor, w(c, j)));
        }
      }
      return acc;
    } else {
      return det_expansion(x, all_indices(), all_indices());
    }
  }

  bool is_invertible(const M& x) const { return ring_.is_unit(det(x)); }

  /// Inverse; throws std::domain_error if the determinant is not a unit.
  M inverse(const M& x) const {
    if constexpr (Ring::is_field) {
      M w = x;
      M r = identity();
      for (std::uint32_t c = 0; c < d_; ++c) {
        std::uint32_t piv = c;
        while (piv < d_ && ring_.is_zero(w(piv, c))) ++piv;
        if (piv == d_) throw std::domain_error("singular matrix");
        if (piv != c)
          for (std::uint32_t j = 0; j < d_; ++j) {
            std::swap(w(piv, j), w(c, j));
            std::swap(r(piv, j), r(c, j));
          }
        const E inv = ring_.inv(w(c, c));
        for (std::uint32_t j = 0; j < d_; ++j) {
          w(c, j) = ring_.mul(w(c, j), inv);
          r(c, j) = ring_.mul(r(c, j), inv);
        }
        for (std::uint32_t i = 0; i < d_; ++i) {
          if (i == c || ring_.is_zero(w(i, c))) continue;
          const E factor = w(i, c);
          for (std::uint32_t j = 0; j < d_; ++j) {
            w(i, j) = ring_.sub(w(i, j), ring_.mul(factor, w(c, j)));
            r(i, j) = ring_.sub(r(i, j), ring_.mul(factor, r(c, j)));
          }
        }
      }
      return r;
    } else {
      // adjugate over a ring with zero divisors: no pivoting needed
      const E dt = det(x);
      if (!ring_.is_unit(dt)) throw std::domain_error("determinant is not a unit");
      const E dinv = ring_.inv(dt);
      M r{d_, std::vector<E>(d_ * d_, ring_.zero())};
      if (d_ == 1) {
        r(0, 0) = dinv;
        return r;
      }
      for (std::uint32_t i = 0; i < d_; ++i)
        for (std::uint32_t j = 0; j < d_; ++j) {
          std::vector<std::uint32_t> rows, cols;
          for (std::uint32_t k = 0; k < d_; ++k) {
            if (k != i) rows.push_back(k);
            if (k != j) cols.push_back(k);
          }
          E minor = det_expansion(x, rows, cols);
          if ((i + j) % 2) minor = ring_.neg(minor);
          r(j, i) = ring_.mul(minor, dinv);
        }
      return r;
    }
  }

  bool equal(const M& x, const M& y) const { return x == y; }

  void encode(const M& x, Bytes& out) const {
    put_u16(out, static_cast<std::uint16_t>(d_));
    for (const auto& e : x.a) ring_.encode(e, out);
  }

  M decode(ByteReader& in) const {
    if (in.u16() != d_) throw DecodeError("matrix dimension mismatch");
    M r{d_, {}};
    for (std::uint32_t i = 0; i < d_ * d_; ++i) r.a.push_back(ring_.decode(in));
    return r;
  }

  std::string format(const M& x) const {
    std::string s = "[";
    for (std::uint32_t i = 0; i < d_; ++i) {
      if (i) s += "; ";
      for (std::uint32_t j = 0; j < d_; ++j) {
        if (j) s += ", ";
        s += ring_.format(x(i, j));
      }
    }
    return s + "]";
  }

 private:
  std::vector<std::uint32_t> all_indices() const {
    std::vector<std::uint32_t> v(d_);
    for (std::uint32_t i = 0; i < d_; ++i) v[i] = i;
    return v;
  }

  /// Division-free determinant of the submatrix on the given rows and
  /// columns: Laplace expansion row by row with memoisation over the set of
  /// columns already used.
  E det_expansion(const M& x, const std::vector<std::uint32_t>& rows,
                  const std::vector<std::uint32_t>& cols) const {
    const std::size_t n = rows.size();
    if (n == 0) return ring_.one();
    std::vector<E> f(std::size_t{1} << n, ring_.zero());
    f[0] = ring_.one();
    for (std::size_t mask = 1; mask < f.size(); ++mask) {
      const std::size_t r = static_cast<std::size_t>(std::popcount(mask)) - 1;
      E acc = ring_.zero();
      std::size_t above = 0;  // columns in mask to the right of j
      for (std::size_t j = n; j-- > 0;) {
        if (!((mask >> j) & 1)) continue;
        const E& entry = x(rows[r], cols[j]);
        if (!ring_.is_zero(entry) && !ring_.is_zero(f[mask ^ (std::size_t{1} << j)])) {
          E term = ring_.mul(entry, f[mask ^ (std::size_t{1} << j)]);
          acc = above % 2 ? ring_.sub(acc, term) : ring_.add(acc, term);
        }
        ++above;
      }
      f[mask] = acc;
    }
    return f.back();
  }

  Ring ring_;
  std::uint32_t d_;
};

enum class MatOpKind { fconj, fsymm };

struct MatOp {
  MatOpKind kind = MatOpKind::fconj;
  EndoSpec f;
};

/// GL(d, R) with f-conjugacy x * y = f(x^-1 y) x and f-symmetric conjugacy
/// x o y = f(x y^-1) x, computed as f(x)^-1 f(y) x and f(x) f(y)^-1 x.
/// Operands whose image under f is undefined or singular are rejected with
/// OperationRejected.
template <class Ring>
class MatrixPlatform : public OpRegistry<MatOp> {
 public:
  using Element = Mat<typename Ring::Element>;

  MatrixPlatform(Ring ring, std::uint32_t d) : alg_(std::move(ring), d) {}

  const MatrixAlgebra<Ring>& algebra() const { return alg_; }
  const Ring& ring() const { return alg_.ring(); }
  std::uint32_t dim() const { return alg_.dim(); }

  OpId add_fconj(const EndoSpec& f) {
    (void)ring().is_projector(f);
    return register_op(MatOp{MatOpKind::fconj, f});
  }

  OpId add_fsymm(const EndoSpec& f) {
    if (!ring().is_projector(f))
      throw std::invalid_argument("f-symmetric conjugacy needs a projector endomorphism");
    return register_op(MatOp{MatOpKind::fsymm, f});
  }

  const MatOp& describe(OpId id) const { return op(id); }

  Element endo(const EndoSpec& f, const Element& x) const { return alg_.apply_endo(f, x); }

  /// f(x), checked to be invertible.
  Element endo_invertible(const EndoSpec& f, const Element& x) const {
    Element fx = alg_.apply_endo(f, x);
    if (!alg_.is_invertible(fx)) throw OperationRejected("endomorphism image is singular");
    return fx;
  }

  Element apply(OpId id, const Element& x, const Element& y) const {
    const MatOp& o = op(id);
    const Element fx = endo_invertible(o.f, x);
    const Element fy = endo_invertible(o.f, y);
    if (o.kind == MatOpKind::fconj) return alg_.mul(alg_.mul(alg_.inverse(fx), fy), x);
    return alg_.mul(alg_.mul(fx, alg_.inverse(fy)), x);
  }

  bool equal(const Element& x, const Element& y) const { return x == y; }
  void encode(const Element& x, Bytes& out) const { alg_.encode(x, out); }
  Element decode(ByteReader& in) const { return alg_.decode(in); }

  /// Rejection-samples entrywise-uniform matrices until the determinant is a
  /// unit and the image under every registered endomorphism is invertible.
  Element random_element(Rng& rng) const {
    for (int attempt = 0; attempt < kRejectionBudget; ++attempt) {
      Element m = alg_.random_entries(rng);
      if (!alg_.is_invertible(m)) continue;
      if (images_invertible(m)) return m;
    }
    throw std::runtime_error("random_invertible: rejection budget exhausted");
  }

  bool images_invertible(const Element& m) const {
    for (const auto& f : endos_) {
      try {
        if (!alg_.is_invertible(alg_.apply_endo(f, m))) return false;
      } catch (const OperationRejected&) {
        return false;
      }
    }
    return true;
  }

  static constexpr int kRejectionBudget = 1000;

 private:
  OpId register_op(MatOp o) {
    bool seen = false;
    for (const auto& f : endos_) seen = seen || f == o.f;
    if (!seen) endos_.push_back(o.f);
    return add_op(o);
  }

  MatrixAlgebra<Ring> alg_;
  std::vector<EndoSpec> endos_;
};

/// Every invertible d x d matrix over a finite ring small enough to enumerate.
template <class Ring>
std::vector<Mat<typename Ring::Element>> all_invertible(const MatrixAlgebra<Ring>& alg) {
  const auto elems = alg.ring().all_elements();
  const std::uint32_t d = alg.dim();
  const std::size_t cells = std::size_t{d} * d;
  std::vector<std::size_t> idx(cells, 0);
  std::vector<Mat<typename Ring::Element>> out;
  while (true) {
    Mat<typename Ring::Element> m{d, {}};
    for (auto i : idx) m.a.push_back(elems[i]);
    if (alg.is_invertible(m)) out.push_back(m);
    std::size_t k = 0;
    while (k < cells && idx[k] + 1 == elems.size()) idx[k++] = 0;
    if (k == cells) break;
    ++idx[k];
  }
  return out;
}

/// Samples f(f(M)) = f(M).
template <class Ring>
LawReport<Mat<typename Ring::Element>> check_projector(
    const MatrixAlgebra<Ring>& alg, const EndoSpec& f,
    const std::vector<Mat<typename Ring::Element>>& samples) {
  LawReport<Mat<typename Ring::Element>> report;
  for (const auto& m : samples) {
    ++report.samples_tested;
    const auto fm = alg.apply_endo(f, m);
    if (!(alg.apply_endo(f, fm) == fm)) report.failures.push_back({m, fm, fm, OpId{}, OpId{}});
  }
  return report;
}

}  // namespace ldkep
