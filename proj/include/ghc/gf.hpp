#pragma once

// Dense linear algebra over prime fields GF(p).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "ghc/errors.hpp"

namespace ghc::gf {

inline constexpr std::uint32_t kMaxModulus = 1u << 16;

constexpr bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

inline void check_modulus(std::uint32_t p) {
  if (!is_prime(p) || p >= kMaxModulus)
    throw InvalidModulus("modulus " + std::to_string(p) +
                         " is not a prime below 65536");
}

/// Inverse of a nonzero residue via the extended Euclidean algorithm.
inline std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  a %= p;
  if (a == 0) throw ZeroInverse("0 has no inverse mod " + std::to_string(p));
  std::int64_t r0 = p, r1 = a, s0 = 0, s1 = 1;
  while (r1 != 0) {
    std::int64_t quot = r0 / r1;
    std::int64_t tmp = r0 - quot * r1;
    r0 = r1;
    r1 = tmp;
    tmp = s0 - quot * s1;
    s0 = s1;
    s1 = tmp;
  }
  std::int64_t inv = s0 % static_cast<std::int64_t>(p);
  if (inv < 0) inv += p;
  return static_cast<std::uint32_t>(inv);
}

class FieldElement {
 public:
  FieldElement(std::int64_t value, std::uint32_t modulus) : modulus_(modulus) {
    check_modulus(modulus);
    std::int64_t r = value % static_cast<std::int64_t>(modulus);
    value_ = static_cast<std::uint32_t>(r < 0 ? r + modulus : r);
  }

  std::uint32_t value() const { return value_; }
  std::uint32_t modulus() const { return modulus_; }
  bool is_zero() const { return value_ == 0; }

  friend bool operator==(const FieldElement&, const FieldElement&) = default;

 private:
  std::uint32_t value_;
  std::uint32_t modulus_;
};

inline void require_same_field(const FieldElement& a, const FieldElement& b) {
  if (a.modulus() != b.modulus())
    throw DimensionMismatch("field elements over different moduli");
}

inline FieldElement fq_add(const FieldElement& a, const FieldElement& b) {
  require_same_field(a, b);
  return {static_cast<std::int64_t>(a.value()) + b.value(), a.modulus()};
}

inline FieldElement fq_sub(const FieldElement& a, const FieldElement& b) {
  require_same_field(a, b);
  return {static_cast<std::int64_t>(a.value()) - b.value(), a.modulus()};
}

inline FieldElement fq_mul(const FieldElement& a, const FieldElement& b) {
  require_same_field(a, b);
  return {static_cast<std::int64_t>(static_cast<std::uint64_t>(a.value()) *
                                    b.value() % a.modulus()),
          a.modulus()};
}

inline FieldElement fq_inv(const FieldElement& a) {
  return {inv_mod(a.value(), a.modulus()), a.modulus()};
}

/// Row-major dense matrix over GF(p). Entries are stored reduced in [0, p).
class Matrix {
 public:
  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols, std::uint32_t modulus)
      : rows_(rows), cols_(cols), p_(modulus), a_(rows * cols, 0) {
    check_modulus(modulus);
  }

  Matrix(std::uint32_t modulus,
         std::initializer_list<std::initializer_list<std::int64_t>> rows)
      : Matrix(rows.size(), rows.size() ? rows.begin()->size() : 0, modulus) {
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != cols_)
        throw DimensionMismatch("ragged matrix literal");
      std::size_t j = 0;
      for (std::int64_t v : row) set(i, j++, v);
      ++i;
    }
  }

  static Matrix identity(std::size_t n, std::uint32_t modulus) {
    Matrix m(n, n, modulus);
    for (std::size_t i = 0; i < n; ++i) m.a_[i * n + i] = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint32_t modulus() const { return p_; }
  const std::vector<std::uint32_t>& entries() const { return a_; }

  std::uint32_t operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }

  FieldElement element(std::size_t i, std::size_t j) const {
    return {(*this)(i, j), p_};
  }

  void set(std::size_t i, std::size_t j, std::int64_t v) {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    a_[i * cols_ + j] = static_cast<std::uint32_t>(r < 0 ? r + p_ : r);
  }

  bool is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](auto v) { return v == 0; });
  }

  bool is_square() const { return rows_ == cols_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_, p_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.a_[j * rows_ + i] = (*this)(i, j);
    return t;
  }

  /// Sub-block [r0, r0+nr) x [c0, c0+nc).
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr,
               std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_)
      throw DimensionMismatch("block out of range");
    Matrix b(nr, nc, p_);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j)
        b.a_[i * nc + j] = (*this)(r0 + i, c0 + j);
    return b;
  }

  /// Exact, human-legible encoding: rows separated by ';', entries by ','.
  std::string key() const {
    std::string s;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i) s += ';';
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j) s += ',';
        s += std::to_string((*this)(i, j));
      }
    }
    return s;
  }

  std::vector<std::vector<std::uint32_t>> to_rows() const {
    std::vector<std::vector<std::uint32_t>> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      out[i].assign(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
    return out;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;
  friend auto operator<=>(const Matrix& x, const Matrix& y) {
    if (auto c = x.rows_ <=> y.rows_; c != 0) return c;
    if (auto c = x.cols_ <=> y.cols_; c != 0) return c;
    return x.a_ <=> y.a_;
  }

 private:
  friend Matrix mat_mul(const Matrix&, const Matrix&);

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::uint32_t p_ = 2;
  std::vector<std::uint32_t> a_;
};

inline Matrix mat_mul(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_ || a.p_ != b.p_)
    throw DimensionMismatch(std::to_string(a.rows_) + "x" +
                            std::to_string(a.cols_) + " times " +
                            std::to_string(b.rows_) + "x" +
                            std::to_string(b.cols_));
  Matrix c(a.rows_, b.cols_, a.p_);
  const std::uint64_t p = a.p_;
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t j = 0; j < b.cols_; ++j) {
      std::uint64_t acc = 0;
      for (std::size_t t = 0; t < a.cols_; ++t)
        acc += static_cast<std::uint64_t>(a.a_[i * a.cols_ + t]) *
               b.a_[t * b.cols_ + j] % p;
      c.a_[i * b.cols_ + j] = static_cast<std::uint32_t>(acc % p);
    }
  }
  return c;
}

inline Matrix mat_add(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() ||
      a.modulus() != b.modulus())
    throw DimensionMismatch("mat_add shape mismatch");
  Matrix c(a.rows(), a.cols(), a.modulus());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      c.set(i, j, static_cast<std::int64_t>(a(i, j)) + b(i, j));
  return c;
}

inline Matrix mat_sub(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() ||
      a.modulus() != b.modulus())
    throw DimensionMismatch("mat_sub shape mismatch");
  Matrix c(a.rows(), a.cols(), a.modulus());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      c.set(i, j, static_cast<std::int64_t>(a(i, j)) - b(i, j));
  return c;
}

struct RrefResult {
  Matrix reduced;
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
};

/// Reduced row echelon form using left row operations.
inline RrefResult rref(Matrix m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  const std::uint64_t p = m.modulus();
  RrefResult out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m(piv, c) == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r)
      for (std::size_t j = 0; j < cols; ++j) {
        auto t = m(r, j);
        m.set(r, j, m(piv, j));
        m.set(piv, j, t);
      }
    const std::uint64_t scale = inv_mod(m(r, c), m.modulus());
    for (std::size_t j = 0; j < cols; ++j)
      m.set(r, j, static_cast<std::int64_t>(m(r, j) * scale % p));
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m(i, c) == 0) continue;
      const std::uint64_t f = m(i, c);
      for (std::size_t j = 0; j < cols; ++j)
        m.set(i, j,
              static_cast<std::int64_t>(m(i, j)) -
                  static_cast<std::int64_t>(f * m(r, j) % p));
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  out.reduced = std::move(m);
  return out;
}

struct ColumnRrefResult {
  Matrix reduced;
  std::size_t rank = 0;
};

/// Canonical form of the (right) column space: reduced column echelon form,
/// built with right column operations only.
inline ColumnRrefResult column_rref(Matrix m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  const std::uint64_t p = m.modulus();
  std::size_t c = 0;
  for (std::size_t r = 0; r < rows && c < cols; ++r) {
    std::size_t piv = c;
    while (piv < cols && m(r, piv) == 0) ++piv;
    if (piv == cols) continue;
    if (piv != c)
      for (std::size_t i = 0; i < rows; ++i) {
        auto t = m(i, c);
        m.set(i, c, m(i, piv));
        m.set(i, piv, t);
      }
    const std::uint64_t scale = inv_mod(m(r, c), m.modulus());
    for (std::size_t i = 0; i < rows; ++i)
      m.set(i, c, static_cast<std::int64_t>(m(i, c) * scale % p));
    for (std::size_t j = 0; j < cols; ++j) {
      if (j == c || m(r, j) == 0) continue;
      const std::uint64_t f = m(r, j);
      for (std::size_t i = 0; i < rows; ++i)
        m.set(i, j,
              static_cast<std::int64_t>(m(i, j)) -
                  static_cast<std::int64_t>(m(i, c) * f % p));
    }
    ++c;
  }
  return {std::move(m), c};
}

inline std::size_t rank(const Matrix& m) { return rref(m).rank; }

inline Matrix mat_inv(const Matrix& m) {
  if (!m.is_square()) throw DimensionMismatch("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  Matrix aug(n, 2 * n, m.modulus());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.set(i, j, m(i, j));
    aug.set(i, n + i, 1);
  }
  auto res = rref(std::move(aug));
  // [m | I] always has rank n; m is invertible iff its pivots are 0..n-1.
  if (n > 0 && res.pivots[n - 1] != n - 1)
    throw Singular("matrix of rank < " + std::to_string(n));
  return res.reduced.block(0, n, n, n);
}

inline bool is_invertible(const Matrix& m) {
  return m.is_square() && rank(m) == m.rows();
}

/// Columns form a basis of {x : m x = 0}.
inline Matrix null_space(const Matrix& m) {
  auto res = rref(m);
  const std::size_t cols = m.cols();
  std::vector<bool> is_pivot(cols, false);
  for (auto c : res.pivots) is_pivot[c] = true;
  Matrix basis(cols, cols - res.rank, m.modulus());
  std::size_t b = 0;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    basis.set(free, b, 1);
    for (std::size_t r = 0; r < res.rank; ++r)
      basis.set(res.pivots[r], b,
                -static_cast<std::int64_t>(res.reduced(r, free)));
    ++b;
  }
  return basis;
}

/// Columns form a basis of the column space of m (its pivot columns).
inline Matrix column_basis(const Matrix& m) {
  auto res = rref(m);
  Matrix basis(m.rows(), res.rank, m.modulus());
  for (std::size_t b = 0; b < res.rank; ++b)
    for (std::size_t i = 0; i < m.rows(); ++i)
      basis.set(i, b, m(i, res.pivots[b]));
  return basis;
}

/// [left | right] side by side.
inline Matrix hconcat(const Matrix& left, const Matrix& right) {
  if (left.rows() != right.rows() || left.modulus() != right.modulus())
    throw DimensionMismatch("hconcat row mismatch");
  Matrix out(left.rows(), left.cols() + right.cols(), left.modulus());
  for (std::size_t i = 0; i < left.rows(); ++i) {
    for (std::size_t j = 0; j < left.cols(); ++j) out.set(i, j, left(i, j));
    for (std::size_t j = 0; j < right.cols(); ++j)
      out.set(i, left.cols() + j, right(i, j));
  }
  return out;
}

}  // namespace ghc::gf
