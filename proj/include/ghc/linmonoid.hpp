#pragma once

// Idempotents, Green's classes and Rees coordinates of the full matrix monoid
// M_n(GF(q)).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ghc/errors.hpp"
#include "ghc/gf.hpp"

namespace ghc::linmonoid {

using gf::Matrix;

inline constexpr std::uint64_t kDefaultEnumerationBudget = 4'000'000;

struct IdempotentRecord {
  Matrix matrix;  // n x n, matrix^2 = matrix
  std::size_t rank = 0;
  Matrix v;   // n x k, canonical column-space representative
  Matrix wT;  // k x n, wT * v = I_k
  std::string rclass;  // key of column_rref(v)
  std::string lclass;  // key of rref(wT)
};

/// Key of the right column space spanned by the columns of v.
inline std::string column_class_key(const Matrix& v) {
  return gf::column_rref(v).reduced.key();
}

/// Key of the left row space spanned by the rows of wT.
inline std::string row_class_key(const Matrix& wT) {
  auto res = gf::rref(wT);
  return res.reduced.block(0, 0, res.rank, wT.cols()).key();
}

inline std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp,
                                 std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

/// All k x n matrices of rank k in reduced row echelon form, ordered by pivot
/// set (lexicographic) and then by free entries.
inline std::vector<Matrix> row_space_representatives(std::size_t n,
                                                     std::uint32_t q,
                                                     std::size_t k) {
  gf::check_modulus(q);
  if (k > n) throw InvalidInput("rank exceeds dimension");
  std::vector<Matrix> out;
  std::vector<std::size_t> piv(k);
  for (std::size_t i = 0; i < k; ++i) piv[i] = i;
  while (true) {
    // free slots: (row r, column c) with c > piv[r] and c not a pivot
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = piv[r] + 1; c < n; ++c)
        if (std::find(piv.begin(), piv.end(), c) == piv.end())
          slots.emplace_back(r, c);
    std::vector<std::uint32_t> digits(slots.size(), 0);
    while (true) {
      Matrix y(k, n, q);
      for (std::size_t r = 0; r < k; ++r) y.set(r, piv[r], 1);
      for (std::size_t s = 0; s < slots.size(); ++s)
        y.set(slots[s].first, slots[s].second, digits[s]);
      out.push_back(std::move(y));
      std::size_t d = slots.size();
      while (d > 0) {
        if (++digits[d - 1] < q) break;
        digits[d - 1] = 0;
        --d;
      }
      if (d == 0) break;
    }
    // next k-subset of [0, n)
    std::size_t i = k;
    while (i > 0 && piv[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++piv[i - 1];
    for (std::size_t j = i; j < k; ++j) piv[j] = piv[j - 1] + 1;
  }
  return out;
}

/// Canonical column-space representatives (transposes of the row reps).
inline std::vector<Matrix> column_space_representatives(std::size_t n,
                                                        std::uint32_t q,
                                                        std::size_t k) {
  auto rows = row_space_representatives(n, q, k);
  std::vector<Matrix> out;
  out.reserve(rows.size());
  for (const auto& y : rows) out.push_back(y.transpose());
  return out;
}

/// Rank-k idempotents of M_n(GF(q)). For each canonical v the solutions of
/// wT v = I_k are affine: entries of wT off the pivot rows of v are free and
/// the pivot columns are then forced.
inline std::vector<IdempotentRecord> enumerate_idempotents(
    std::size_t n, std::uint32_t q, std::size_t k,
    std::uint64_t budget = kDefaultEnumerationBudget) {
  gf::check_modulus(q);
  if (k > n) throw InvalidInput("rank exceeds dimension");
  const auto vreps = column_space_representatives(n, q, k);
  const std::uint64_t per_class = checked_pow(q, k * (n - k), budget);
  if (per_class > budget || vreps.size() > budget / per_class)
    throw InfeasibleSize("rank-" + std::to_string(k) + " idempotents of M_" +
                         std::to_string(n) + "(F_" + std::to_string(q) +
                         ") exceed the enumeration budget of " +
                         std::to_string(budget));
  std::vector<IdempotentRecord> out;
  out.reserve(vreps.size() * per_class);
  for (const auto& v : vreps) {
    // pivot rows of v hold I_k
    std::vector<std::size_t> pivot_rows, free_rows;
    {
      auto res = gf::rref(v.transpose());
      pivot_rows = res.pivots;
      for (std::size_t i = 0; i < n; ++i)
        if (std::find(pivot_rows.begin(), pivot_rows.end(), i) ==
            pivot_rows.end())
          free_rows.push_back(i);
    }
    const std::string rkey = column_class_key(v);
    std::vector<std::uint32_t> digits(k * free_rows.size(), 0);
    while (true) {
      Matrix wT(k, n, q);
      for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t f = 0; f < free_rows.size(); ++f)
          wT.set(r, free_rows[f], digits[r * free_rows.size() + f]);
        // (wT v)_{r,c} = wT[r, pivot_rows[c]] + sum_f wT[r,f] v[f,c] = delta
        for (std::size_t c = 0; c < k; ++c) {
          std::int64_t acc = (r == c) ? 1 : 0;
          for (auto f : free_rows)
            acc -= static_cast<std::int64_t>(wT(r, f)) * v(f, c);
          wT.set(r, pivot_rows[c], acc);
        }
      }
      IdempotentRecord rec;
      rec.matrix = gf::mat_mul(v, wT);
      rec.rank = k;
      rec.v = v;
      rec.rclass = rkey;
      rec.lclass = row_class_key(wT);
      rec.wT = std::move(wT);
      out.push_back(std::move(rec));
      std::size_t d = digits.size();
      while (d > 0) {
        if (++digits[d - 1] < q) break;
        digits[d - 1] = 0;
        --d;
      }
      if (d == 0) break;
    }
  }
  return out;
}

struct Factorization {
  Matrix v;   // n x k
  Matrix wT;  // k x n
};

/// a = v wT with v the pivot columns of a and wT the nonzero rows of rref(a).
inline Factorization vw_factorize(const Matrix& a, std::size_t k) {
  auto res = gf::rref(a);
  if (res.rank != k)
    throw RankMismatch("matrix has rank " + std::to_string(res.rank) +
                       ", expected " + std::to_string(k));
  Factorization f;
  f.v = Matrix(a.rows(), k, a.modulus());
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t i = 0; i < a.rows(); ++i)
      f.v.set(i, c, a(i, res.pivots[c]));
  f.wT = res.reduced.block(0, 0, k, a.cols());
  return f;
}

inline IdempotentRecord make_record(const Matrix& e) {
  IdempotentRecord rec;
  rec.rank = gf::rank(e);
  auto f = vw_factorize(e, rec.rank);
  rec.matrix = e;
  rec.v = gf::column_rref(f.v).reduced;
  // v_orig = v x (read off the pivot rows of v), so e = v (x wT_orig)
  if (rec.rank > 0) {
    auto piv = gf::rref(rec.v.transpose()).pivots;
    Matrix x(rec.rank, rec.rank, e.modulus());
    for (std::size_t r = 0; r < rec.rank; ++r)
      for (std::size_t c = 0; c < rec.rank; ++c) x.set(r, c, f.v(piv[r], c));
    rec.wT = gf::mat_mul(x, f.wT);
  } else {
    rec.wT = f.wT;
  }
  rec.rclass = column_class_key(rec.v);
  rec.lclass = row_class_key(rec.wT);
  return rec;
}

inline bool green_r_equal(const IdempotentRecord& a, const IdempotentRecord& b) {
  return a.rclass == b.rclass;
}

inline bool green_l_equal(const IdempotentRecord& a, const IdempotentRecord& b) {
  return a.lclass == b.lclass;
}

struct ReesStructure {
  std::size_t k = 0;
  std::vector<Matrix> xset;  // n x k column-space representatives
  std::vector<Matrix> yset;  // k x n row-space representatives
  // sandwich[y][x]: y*x in GL_k, or nullopt for the adjoined zero
  std::vector<std::vector<std::optional<Matrix>>> sandwich;

  std::size_t nonzero_entries() const {
    std::size_t c = 0;
    for (const auto& row : sandwich)
      for (const auto& e : row) c += e.has_value();
    return c;
  }
};

inline ReesStructure rees_structure(std::size_t n, std::uint32_t q,
                                    std::size_t k,
                                    std::uint64_t budget = kDefaultEnumerationBudget) {
  if (k < 1 || k > n) throw InvalidInput("Rees structure needs 1 <= k <= n");
  ReesStructure rs;
  rs.k = k;
  rs.yset = row_space_representatives(n, q, k);
  if (rs.yset.size() > budget / rs.yset.size())
    throw InfeasibleSize("sandwich matrix exceeds budget");
  rs.xset.reserve(rs.yset.size());
  for (const auto& y : rs.yset) rs.xset.push_back(y.transpose());
  rs.sandwich.resize(rs.yset.size());
  for (std::size_t i = 0; i < rs.yset.size(); ++i) {
    rs.sandwich[i].reserve(rs.xset.size());
    for (const auto& x : rs.xset) {
      Matrix yx = gf::mat_mul(rs.yset[i], x);
      if (gf::is_invertible(yx))
        rs.sandwich[i].emplace_back(std::move(yx));
      else
        rs.sandwich[i].emplace_back(std::nullopt);
    }
  }
  return rs;
}

}  // namespace ghc::linmonoid
