#pragma once

// Invariant factors of integer lattices: a dense Smith normal form and a
// streaming reducer that splits off unit pivots before falling back to the
// dense form on whatever is left.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <utility>
#include <vector>

#include "ghc/errors.hpp"

namespace ghc::smith {

/// Z^free_rank (+) Z/t_1 (+) ... with t_1 | t_2 | ... and every t_i > 1.
struct AbelianInvariants {
  std::size_t free_rank = 0;
  std::vector<std::int64_t> torsion;

  bool trivial() const { return free_rank == 0 && torsion.empty(); }
  friend bool operator==(const AbelianInvariants&, const AbelianInvariants&) = default;
};

namespace detail {

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw InternalCheckFailed("integer overflow in Smith form");
  return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r))
    throw InternalCheckFailed("integer overflow in Smith form");
  return r;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw InternalCheckFailed("integer overflow in Smith form");
  return r;
}

}  // namespace detail

using DenseMatrix = std::vector<std::vector<std::int64_t>>;

/// Nonzero invariant factors (positive, divisibility chain) of m.
inline std::vector<std::int64_t> smith_diagonal(DenseMatrix m) {
  using detail::checked_mul;
  using detail::checked_sub;
  using detail::checked_add;
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::vector<std::int64_t> diag;
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    // smallest nonzero |entry| in the trailing block
    std::size_t pr = rows, pc = cols;
    std::int64_t best = 0;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (m[i][j] != 0 && (best == 0 || std::llabs(m[i][j]) < best)) {
          best = std::llabs(m[i][j]);
          pr = i;
          pc = j;
        }
    if (best == 0) break;
    std::swap(m[t], m[pr]);
    for (auto& row : m) std::swap(row[t], row[pc]);

    while (true) {
      bool changed = false;
      // clear column t below the pivot
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (m[i][t] == 0) continue;
        const std::int64_t quot = m[i][t] / m[t][t];
        for (std::size_t j = t; j < cols; ++j)
          m[i][j] = checked_sub(m[i][j], checked_mul(quot, m[t][j]));
        if (m[i][t] != 0) {
          std::swap(m[t], m[i]);
          changed = true;
        }
      }
      // clear row t right of the pivot
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (m[t][j] == 0) continue;
        const std::int64_t quot = m[t][j] / m[t][t];
        for (std::size_t i = t; i < rows; ++i)
          m[i][j] = checked_sub(m[i][j], checked_mul(quot, m[i][t]));
        if (m[t][j] != 0) {
          for (auto& row : m) std::swap(row[t], row[j]);
          changed = true;
        }
      }
      if (changed) continue;
      // pivot must divide the whole trailing block
      bool fixed = false;
      for (std::size_t i = t + 1; i < rows && !fixed; ++i)
        for (std::size_t j = t + 1; j < cols && !fixed; ++j)
          if (m[i][j] % m[t][t] != 0) {
            for (std::size_t jj = t; jj < cols; ++jj)
              m[t][jj] = checked_add(m[t][jj], m[i][jj]);
            fixed = true;
          }
      if (!fixed) break;
    }
    diag.push_back(std::llabs(m[t][t]));
  }
  return diag;
}

inline AbelianInvariants invariants_from_diagonal(
    std::size_t dimension, const std::vector<std::int64_t>& diag) {
  AbelianInvariants out;
  out.free_rank = dimension - diag.size();
  for (auto d : diag)
    if (d > 1) out.torsion.push_back(d);
  std::sort(out.torsion.begin(), out.torsion.end());
  return out;
}

/// Quotient Z^dimension / span(rows) for a dense relation matrix.
inline AbelianInvariants dense_quotient(std::size_t dimension,
                                        const DenseMatrix& relations) {
  return invariants_from_diagonal(dimension, smith_diagonal(relations));
}

using SparseVector = std::vector<std::pair<std::size_t, std::int64_t>>;

/// Streams relation vectors of Z^dimension and reports the quotient by their
/// span. Any vector with a +-1 coordinate outside the current pivots becomes
/// a new pivot; the basis is kept fully reduced (each pivot coordinate is zero
/// in every other basis row), so projection away from pivots is exact.
class LatticeReducer {
 public:
  explicit LatticeReducer(std::size_t dimension)
      : dim_(dimension), pivot_row_(dimension, kNone), scratch_(dimension, 0) {}

  void add(const SparseVector& v) {
    for (auto [i, c] : v) scratch_[i] = detail::checked_add(scratch_[i], c);
    touched_.clear();
    for (auto [i, c] : v) touched_.push_back(i);
    reduce_scratch();
    // find a unit entry among non-pivot coordinates
    std::size_t unit = kNone;
    for (std::size_t i : support_)
      if (std::llabs(scratch_[i]) == 1) {
        unit = i;
        break;
      }
    if (support_.empty()) return;
    if (unit == kNone) {
      SparseVector r;
      for (std::size_t i : support_) r.emplace_back(i, scratch_[i]);
      for (std::size_t i : support_) scratch_[i] = 0;
      residuals_.push_back(std::move(r));
      return;
    }
    const std::int64_t sign = scratch_[unit];
    SparseVector row;
    for (std::size_t i : support_) row.emplace_back(i, scratch_[i] * sign);
    for (std::size_t i : support_) scratch_[i] = 0;
    // eliminate the new pivot coordinate from existing rows
    for (std::size_t b : rows_with_coord(unit)) eliminate(basis_[b], unit, row);
    pivot_row_[unit] = basis_.size();
    basis_.push_back(std::move(row));
    pivot_coord_.push_back(unit);
  }

  AbelianInvariants quotient() const {
    // project residuals away from the final pivots
    std::vector<std::size_t> free_index(dim_, kNone);
    std::size_t nfree = 0;
    for (std::size_t i = 0; i < dim_; ++i)
      if (pivot_row_[i] == kNone) free_index[i] = nfree++;
    DenseMatrix dense;
    for (const auto& r : residuals_) {
      std::vector<std::int64_t> x(dim_, 0);
      for (auto [i, c] : r) x[i] = c;
      for (auto [i, c] : r) {
        if (pivot_row_[i] == kNone || x[i] == 0) continue;
        const std::int64_t f = x[i];
        for (auto [j, bc] : basis_[pivot_row_[i]])
          x[j] = detail::checked_sub(x[j], detail::checked_mul(f, bc));
      }
      std::vector<std::int64_t> proj(nfree, 0);
      bool any = false;
      for (std::size_t i = 0; i < dim_; ++i)
        if (free_index[i] != kNone && x[i] != 0) {
          proj[free_index[i]] = x[i];
          any = true;
        }
      if (any) dense.push_back(std::move(proj));
    }
    auto diag = smith_diagonal(std::move(dense));
    std::vector<std::int64_t> all(basis_.size(), 1);
    all.insert(all.end(), diag.begin(), diag.end());
    return invariants_from_diagonal(dim_, all);
  }

  std::size_t unit_pivots() const { return basis_.size(); }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  // Reduces scratch_ (support in touched_) by the basis; leaves the nonzero
  // support in support_.
  void reduce_scratch() {
    // basis rows vanish on other pivots, so one pass over the pivot
    // coordinates present initially is enough
    std::vector<std::size_t> frontier = touched_;
    for (std::size_t i : frontier) {
      if (pivot_row_[i] == kNone || scratch_[i] == 0) continue;
      const std::int64_t f = scratch_[i];
      for (auto [j, bc] : basis_[pivot_row_[i]]) {
        if (scratch_[j] == 0) touched_.push_back(j);
        scratch_[j] = detail::checked_sub(scratch_[j], detail::checked_mul(f, bc));
      }
    }
    std::sort(touched_.begin(), touched_.end());
    touched_.erase(std::unique(touched_.begin(), touched_.end()), touched_.end());
    support_.clear();
    for (std::size_t i : touched_)
      if (scratch_[i] != 0) support_.push_back(i);
  }

  std::vector<std::size_t> rows_with_coord(std::size_t coord) const {
    std::vector<std::size_t> out;
    for (std::size_t b = 0; b < basis_.size(); ++b)
      for (auto [j, c] : basis_[b])
        if (j == coord) {
          out.push_back(b);
          break;
        }
    return out;
  }

  // target -= target[coord] * row, where row[coord] = 1
  static void eliminate(SparseVector& target, std::size_t coord,
                        const SparseVector& row) {
    std::int64_t f = 0;
    for (auto [j, c] : target)
      if (j == coord) f = c;
    if (f == 0) return;
    SparseVector merged;
    merged.reserve(target.size() + row.size());
    std::size_t a = 0, b = 0;
    while (a < target.size() || b < row.size()) {
      if (b == row.size() || (a < target.size() && target[a].first < row[b].first)) {
        merged.push_back(target[a++]);
      } else if (a == target.size() || row[b].first < target[a].first) {
        merged.emplace_back(row[b].first, -detail::checked_mul(f, row[b].second));
        ++b;
      } else {
        auto v = detail::checked_sub(target[a].second,
                                     detail::checked_mul(f, row[b].second));
        if (v != 0) merged.emplace_back(target[a].first, v);
        ++a;
        ++b;
      }
    }
    target = std::move(merged);
  }

  std::size_t dim_;
  std::vector<std::size_t> pivot_row_;
  std::vector<std::size_t> pivot_coord_;
  std::vector<SparseVector> basis_;  // sorted by coordinate
  std::vector<SparseVector> residuals_;
  std::vector<std::int64_t> scratch_;
  std::vector<std::size_t> touched_;
  std::vector<std::size_t> support_;
};

/// Quotient of Z^dimension by the span of sparse relation vectors.
inline AbelianInvariants sparse_quotient(std::size_t dimension,
                                         const std::vector<SparseVector>& relations) {
  LatticeReducer red(dimension);
  for (const auto& r : relations) red.add(r);
  return red.quotient();
}

}  // namespace ghc::smith
