#pragma once

// Biordered sets of finite semigroups: basic products, E-squares, rectangular
// band tests and singularizing idempotents.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ghc/errors.hpp"
#include "ghc/gf.hpp"
#include "ghc/linmonoid.hpp"

namespace ghc::biorder {

using gf::Matrix;
using linmonoid::IdempotentRecord;

/// Multiplication table of a finite semigroup, values 0-based, row-major.
struct SemigroupTable {
  std::size_t size = 0;
  std::vector<std::size_t> table;

  std::size_t operator()(std::size_t a, std::size_t b) const {
    return table[a * size + b];
  }
};

inline constexpr std::size_t kAssociativityBudget = 512;

struct AssociativityWitness {
  std::size_t a, b, c;
};

inline std::optional<AssociativityWitness> find_associativity_violation(
    const SemigroupTable& s) {
  for (std::size_t a = 0; a < s.size; ++a)
    for (std::size_t b = 0; b < s.size; ++b)
      for (std::size_t c = 0; c < s.size; ++c)
        if (s(s(a, b), c) != s(a, s(b, c))) return AssociativityWitness{a, b, c};
  return std::nullopt;
}

inline bool is_regular(const SemigroupTable& s) {
  for (std::size_t a = 0; a < s.size; ++a) {
    bool ok = false;
    for (std::size_t x = 0; x < s.size && !ok; ++x) ok = s(s(a, x), a) == a;
    if (!ok) return false;
  }
  return true;
}

enum class Backend { MatrixMonoid, Table };

struct ESquare {
  std::size_t e, f, g, h;  // e R f L g R h L e
  friend bool operator==(const ESquare&, const ESquare&) = default;
  friend auto operator<=>(const ESquare&, const ESquare&) = default;
};

enum class Direction { LeftRight, RightLeft, TopBottom, BottomTop };

inline constexpr std::array<Direction, 4> kDirectionScanOrder = {
    Direction::LeftRight, Direction::RightLeft, Direction::TopBottom,
    Direction::BottomTop};

inline const char* to_string(Direction d) {
  switch (d) {
    case Direction::LeftRight: return "left-right";
    case Direction::RightLeft: return "right-left";
    case Direction::TopBottom: return "top-bottom";
    case Direction::BottomTop: return "bottom-top";
  }
  return "?";
}

struct SingularizerWitness {
  std::size_t t;  // index into the singularizer pool
  Direction direction;
};

/// The idempotents E of a semigroup with basic products. Elements of E are
/// indexed 0..size()-1. The singularizer pool holds every idempotent of the
/// backing semigroup; its first size() entries are the elements of E, so a
/// pool index below size() is also an element index.
class BiorderedSet {
 public:
  static BiorderedSet from_matrix_monoid(
      std::size_t n, std::uint32_t q, const std::vector<std::size_t>& ranks,
      std::uint64_t budget = linmonoid::kDefaultEnumerationBudget) {
    gf::check_modulus(q);
    BiorderedSet E;
    E.backend_ = Backend::MatrixMonoid;
    E.n_ = n;
    E.q_ = q;
    std::vector<bool> chosen(n + 1, false);
    for (auto k : ranks) {
      if (k > n) throw InvalidInput("rank " + std::to_string(k) + " > n");
      chosen[k] = true;
    }
    std::uint64_t used = 0;
    auto take = [&](std::size_t k) {
      auto recs = linmonoid::enumerate_idempotents(n, q, k, budget - used);
      used += recs.size();
      for (auto& r : recs) E.records_.push_back(std::move(r));
    };
    for (std::size_t k = 0; k <= n; ++k)
      if (chosen[k]) take(k);
    E.size_ = E.records_.size();
    for (std::size_t k = 0; k <= n; ++k)
      if (!chosen[k]) take(k);
    for (std::size_t i = 0; i < E.records_.size(); ++i)
      E.pool_index_.emplace(E.records_[i].matrix.key(), i);
    std::vector<std::string> rkeys, lkeys;
    for (std::size_t i = 0; i < E.size_; ++i) {
      // classes never mix ranks; prefix the rank to keep keys of different
      // ranks apart (rank 0 has empty keys)
      const auto& r = E.records_[i];
      rkeys.push_back(std::to_string(r.rank) + "|" + r.rclass);
      lkeys.push_back(std::to_string(r.rank) + "|" + r.lclass);
    }
    E.assign_classes(rkeys, lkeys);
    return E;
  }

  static BiorderedSet from_table(SemigroupTable table) {
    if (table.size == 0 || table.table.size() != table.size * table.size)
      throw InvalidInput("table must be size x size");
    for (auto v : table.table)
      if (v >= table.size) throw InvalidInput("table entry out of range");
    if (table.size <= kAssociativityBudget) {
      if (auto w = find_associativity_violation(table))
        throw NotAssociative("(" + std::to_string(w->a) + "*" +
                             std::to_string(w->b) + ")*" + std::to_string(w->c) +
                             " != " + std::to_string(w->a) + "*(" +
                             std::to_string(w->b) + "*" + std::to_string(w->c) +
                             ")");
    }
    BiorderedSet E;
    E.backend_ = Backend::Table;
    for (std::size_t x = 0; x < table.size; ++x)
      if (table(x, x) == x) E.table_elements_.push_back(x);
    if (E.table_elements_.empty()) throw NoIdempotents("table has no idempotents");
    E.size_ = E.table_elements_.size();
    E.regular_ = is_regular(table);
    E.table_ = std::move(table);
    for (std::size_t i = 0; i < E.size_; ++i)
      E.pool_index_.emplace(std::to_string(E.table_elements_[i]), i);
    // R and L classes from basic products: e R f iff ef = f, fe = e
    std::vector<std::string> rkeys(E.size_), lkeys(E.size_);
    for (std::size_t i = 0; i < E.size_; ++i) {
      std::size_t rmin = i, lmin = i;
      for (std::size_t j = 0; j < E.size_; ++j) {
        const auto e = E.table_elements_[i], f = E.table_elements_[j];
        const auto& t = E.table_;
        if (t(e, f) == f && t(f, e) == e) rmin = std::min(rmin, j);
        if (t(e, f) == e && t(f, e) == f) lmin = std::min(lmin, j);
      }
      rkeys[i] = std::to_string(E.table_elements_[rmin]);
      lkeys[i] = std::to_string(E.table_elements_[lmin]);
    }
    E.assign_classes(rkeys, lkeys);
    return E;
  }

  Backend backend() const { return backend_; }
  std::size_t size() const { return size_; }
  std::size_t pool_size() const {
    return backend_ == Backend::Table ? size_ : records_.size();
  }
  /// False when the backing table is not regular (reported, not fatal).
  bool regular() const { return regular_; }
  std::size_t n() const { return n_; }
  std::uint32_t q() const { return q_; }

  std::size_t rclass_of(std::size_t i) const { return rclass_[i]; }
  std::size_t lclass_of(std::size_t i) const { return lclass_[i]; }
  std::size_t rclass_count() const { return rclass_keys_.size(); }
  std::size_t lclass_count() const { return lclass_keys_.size(); }
  const std::string& rclass_key(std::size_t c) const { return rclass_keys_[c]; }
  const std::string& lclass_key(std::size_t c) const { return lclass_keys_[c]; }

  /// Matrix backend only.
  const IdempotentRecord& record(std::size_t pool_index) const {
    return records_.at(pool_index);
  }
  /// Table backend only: semigroup element behind an E index.
  std::size_t table_element(std::size_t i) const { return table_elements_.at(i); }
  const SemigroupTable& table() const { return table_; }

  std::string label(std::size_t pool_index) const {
    if (backend_ == Backend::Table)
      return std::to_string(table_elements_[pool_index]);
    return records_[pool_index].matrix.key();
  }

  std::optional<std::size_t> find_pool_index(const Matrix& m) const {
    auto it = pool_index_.find(m.key());
    if (it == pool_index_.end()) return std::nullopt;
    return it->second;
  }

  /// True iff the product of the pool elements in `word` equals pool[target].
  bool word_equals(std::span<const std::size_t> word, std::size_t target) const {
    if (backend_ == Backend::Table) {
      std::size_t acc = table_elements_[word[0]];
      for (std::size_t i = 1; i < word.size(); ++i)
        acc = table_(acc, table_elements_[word[i]]);
      return acc == table_elements_[target];
    }
    Matrix acc = records_[word[0]].matrix;
    for (std::size_t i = 1; i < word.size(); ++i)
      acc = gf::mat_mul(acc, records_[word[i]].matrix);
    return acc == records_[target].matrix;
  }

  bool product_equals(std::size_t a, std::size_t b, std::size_t target) const {
    const std::array<std::size_t, 2> w{a, b};
    return word_equals(w, target);
  }

  /// (a, b) is a basic pair iff {ab, ba} meets {a, b}.
  bool is_basic_pair(std::size_t a, std::size_t b) const {
    return product_equals(a, b, a) || product_equals(a, b, b) ||
           product_equals(b, a, a) || product_equals(b, a, b);
  }

  /// Basic product of two pool elements, as a pool index; nullopt when the
  /// pair is not basic (the product is undefined in the biordered set).
  std::optional<std::size_t> product(std::size_t a, std::size_t b) const {
    if (!is_basic_pair(a, b)) return std::nullopt;
    if (backend_ == Backend::Table) {
      const auto v = table_(table_elements_[a], table_elements_[b]);
      auto it = pool_index_.find(std::to_string(v));
      if (it == pool_index_.end())
        throw InternalCheckFailed("basic product is not idempotent");
      return it->second;
    }
    auto idx = find_pool_index(gf::mat_mul(records_[a].matrix, records_[b].matrix));
    if (!idx) throw InternalCheckFailed("basic product is not idempotent");
    return idx;
  }

  bool r_related(std::size_t a, std::size_t b) const {
    return product_equals(a, b, b) && product_equals(b, a, a);
  }
  bool l_related(std::size_t a, std::size_t b) const {
    return product_equals(a, b, a) && product_equals(b, a, b);
  }

  /// D-classes of E: transitive closure of R union L. Returns class id per
  /// element, numbered by first occurrence.
  std::vector<std::size_t> d_classes() const {
    std::vector<std::size_t> parent(rclass_count() + lclass_count());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::size_t i = 0; i < size_; ++i) {
      auto a = find(rclass_[i]), b = find(rclass_count() + lclass_[i]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<std::size_t> out(size_);
    std::unordered_map<std::size_t, std::size_t> ids;
    for (std::size_t i = 0; i < size_; ++i) {
      auto root = find(rclass_[i]);
      auto [it, fresh] = ids.emplace(root, ids.size());
      out[i] = it->second;
    }
    return out;
  }

 private:
  void assign_classes(const std::vector<std::string>& rkeys,
                      const std::vector<std::string>& lkeys) {
    std::unordered_map<std::string, std::size_t> rid, lid;
    for (std::size_t i = 0; i < size_; ++i) {
      auto [ri, rnew] = rid.emplace(rkeys[i], rclass_keys_.size());
      if (rnew) rclass_keys_.push_back(rkeys[i]);
      rclass_.push_back(ri->second);
      auto [li, lnew] = lid.emplace(lkeys[i], lclass_keys_.size());
      if (lnew) lclass_keys_.push_back(lkeys[i]);
      lclass_.push_back(li->second);
    }
  }

  Backend backend_ = Backend::Table;
  std::size_t size_ = 0;
  bool regular_ = true;
  std::size_t n_ = 0;
  std::uint32_t q_ = 0;
  std::vector<IdempotentRecord> records_;
  std::vector<std::size_t> table_elements_;
  SemigroupTable table_;
  std::unordered_map<std::string, std::size_t> pool_index_;
  std::vector<std::size_t> rclass_, lclass_;
  std::vector<std::string> rclass_keys_, lclass_keys_;
};

/// The four relabelings of a square that keep the pattern e R f L g R h L e.
inline std::array<ESquare, 4> rotations(const ESquare& s) {
  return {ESquare{s.e, s.f, s.g, s.h}, ESquare{s.f, s.e, s.h, s.g},
          ESquare{s.g, s.h, s.e, s.f}, ESquare{s.h, s.g, s.f, s.e}};
}

inline ESquare canonical(const ESquare& s) {
  auto r = rotations(s);
  return *std::min_element(r.begin(), r.end());
}

inline bool is_esquare(const BiorderedSet& E, const ESquare& s) {
  const bool distinct = s.e != s.f && s.e != s.g && s.e != s.h && s.f != s.g &&
                        s.f != s.h && s.g != s.h;
  return distinct && E.rclass_of(s.e) == E.rclass_of(s.f) &&
         E.lclass_of(s.f) == E.lclass_of(s.g) &&
         E.rclass_of(s.g) == E.rclass_of(s.h) &&
         E.lclass_of(s.h) == E.lclass_of(s.e);
}

/// Every nondegenerate E-square once, in canonical orientation, sorted.
/// A square is a pair of R-classes times a pair of L-classes whose four
/// H-cells all hold an idempotent.
inline std::vector<ESquare> enumerate_esquares(const BiorderedSet& E) {
  const std::size_t nr = E.rclass_count(), nl = E.lclass_count();
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::vector<std::size_t>> cell(nr, std::vector<std::size_t>(nl, kNone));
  std::vector<std::vector<std::size_t>> lclasses_of_r(nr);
  for (std::size_t i = 0; i < E.size(); ++i) {
    cell[E.rclass_of(i)][E.lclass_of(i)] = i;
    lclasses_of_r[E.rclass_of(i)].push_back(E.lclass_of(i));
  }
  for (auto& ls : lclasses_of_r) std::sort(ls.begin(), ls.end());
  std::vector<ESquare> out;
  std::vector<std::size_t> common;
  for (std::size_t r1 = 0; r1 < nr; ++r1) {
    for (std::size_t r2 = r1 + 1; r2 < nr; ++r2) {
      common.clear();
      std::set_intersection(lclasses_of_r[r1].begin(), lclasses_of_r[r1].end(),
                            lclasses_of_r[r2].begin(), lclasses_of_r[r2].end(),
                            std::back_inserter(common));
      for (std::size_t a = 0; a < common.size(); ++a)
        for (std::size_t b = a + 1; b < common.size(); ++b) {
          const auto l1 = common[a], l2 = common[b];
          out.push_back(canonical(
              ESquare{cell[r1][l1], cell[r1][l2], cell[r2][l2], cell[r2][l1]}));
        }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// efghe = e in the backing semigroup.
inline bool is_rectangular_band(const ESquare& s, const BiorderedSet& E) {
  const std::array<std::size_t, 5> w{s.e, s.f, s.g, s.h, s.e};
  return E.word_equals(w, s.e);
}

/// (w1 v2)(w2 v2)^{-1}(w2 v1)(w1 v1)^{-1} = I_k with (v1, w1) the column and
/// row representatives of e and (v2, w2) those of g.
inline bool star_identity_holds(const Matrix& v1, const Matrix& w1T,
                                const Matrix& v2, const Matrix& w2T) {
  using gf::mat_inv;
  using gf::mat_mul;
  const Matrix lhs = mat_mul(mat_mul(mat_mul(mat_mul(w1T, v2), mat_inv(mat_mul(w2T, v2))),
                                     mat_mul(w2T, v1)),
                             mat_inv(mat_mul(w1T, v1)));
  return lhs == Matrix::identity(v1.cols(), v1.modulus());
}

inline bool star_identity_holds(const ESquare& s, const BiorderedSet& E) {
  if (E.backend() != Backend::MatrixMonoid)
    throw InvalidInput("the star identity needs the matrix backend");
  const auto& e = E.record(s.e);
  const auto& g = E.record(s.g);
  if (e.rank != g.rank || E.record(s.f).rank != e.rank ||
      E.record(s.h).rank != e.rank)
    throw InvalidInput("square mixes ranks");
  return star_identity_holds(e.v, e.wT, g.v, g.wT);
}

/// The four singularization equations for idempotent t in direction d.
inline bool singularizes(const BiorderedSet& E, const ESquare& s, std::size_t t,
                         Direction d) {
  auto eq = [&](std::size_t a, std::size_t b, std::size_t target) {
    return E.product_equals(a, b, target);
  };
  switch (d) {
    case Direction::LeftRight:
      return eq(t, s.e, s.e) && eq(t, s.h, s.h) && eq(s.e, t, s.f) && eq(s.h, t, s.g);
    case Direction::RightLeft:
      return eq(t, s.f, s.f) && eq(t, s.g, s.g) && eq(s.f, t, s.e) && eq(s.g, t, s.h);
    case Direction::TopBottom:
      return eq(s.e, t, s.e) && eq(s.f, t, s.f) && eq(t, s.e, s.h) && eq(t, s.f, s.g);
    case Direction::BottomTop:
      return eq(s.h, t, s.h) && eq(s.g, t, s.g) && eq(t, s.h, s.e) && eq(t, s.g, s.f);
  }
  return false;
}

/// Brute force over every idempotent of the backing semigroup, directions in
/// scan order, pool order within a direction.
inline std::optional<SingularizerWitness> find_singularizer(const ESquare& s,
                                                            const BiorderedSet& E) {
  for (auto d : kDirectionScanOrder)
    for (std::size_t t = 0; t < E.pool_size(); ++t)
      if (singularizes(E, s, t, d)) return SingularizerWitness{t, d};
  return std::nullopt;
}

struct ConstructedSingularizer {
  SingularizerWitness witness;
  Matrix eta;
};

/// Left-right singularizer of a rectangular-band square of rank-k matrix
/// idempotents. In the basis (col(e) | null(e)) the square reads
///   e = [I 0; 0 0], f = [I b; 0 0], h = [I 0; a 0], g = [I b; a ab]
/// with ba = 0, and eta = [I b; 0 c] works for any idempotent c with
/// col(c) = col(a).
inline ConstructedSingularizer construct_singularizer(const ESquare& s,
                                                      const BiorderedSet& E) {
  if (E.backend() != Backend::MatrixMonoid)
    throw InvalidInput("construct_singularizer needs the matrix backend");
  if (!is_rectangular_band(s, E))
    throw NotABand("efghe != e");
  using gf::mat_mul;
  const Matrix& e = E.record(s.e).matrix;
  const std::size_t n = e.rows(), k = E.record(s.e).rank;
  const std::uint32_t q = e.modulus();
  const Matrix basis = gf::hconcat(gf::column_basis(e), gf::null_space(e));
  const Matrix basis_inv = gf::mat_inv(basis);
  auto conj = [&](const Matrix& m) { return mat_mul(mat_mul(basis_inv, m), basis); };
  const Matrix f1 = conj(E.record(s.f).matrix);
  const Matrix h1 = conj(E.record(s.h).matrix);
  const Matrix b = f1.block(0, k, k, n - k);
  const Matrix a = h1.block(k, 0, n - k, k);

  // c = A (A_piv)^{-1} restricted to the pivot rows: idempotent, col(c) = col(a)
  Matrix c(n - k, n - k, q);
  if (!a.is_zero()) {
    const Matrix A = gf::column_basis(a);
    const auto piv = gf::rref(A.transpose()).pivots;
    Matrix A_piv(A.cols(), A.cols(), q);
    for (std::size_t r = 0; r < A.cols(); ++r)
      for (std::size_t j = 0; j < A.cols(); ++j) A_piv.set(r, j, A(piv[r], j));
    const Matrix A_piv_inv = gf::mat_inv(A_piv);
    Matrix left_inv(A.cols(), n - k, q);
    for (std::size_t r = 0; r < A.cols(); ++r)
      for (std::size_t j = 0; j < A.cols(); ++j)
        left_inv.set(r, piv[j], A_piv_inv(r, j));
    c = mat_mul(A, left_inv);
  }

  Matrix eta1(n, n, q);
  for (std::size_t i = 0; i < k; ++i) eta1.set(i, i, 1);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n - k; ++j) eta1.set(i, k + j, b(i, j));
  for (std::size_t i = 0; i < n - k; ++i)
    for (std::size_t j = 0; j < n - k; ++j) eta1.set(k + i, k + j, c(i, j));
  Matrix eta = mat_mul(mat_mul(basis, eta1), basis_inv);

  auto idx = E.find_pool_index(eta);
  if (!idx || !singularizes(E, s, *idx, Direction::LeftRight))
    throw InternalCheckFailed("constructed eta does not singularize the square");
  return {SingularizerWitness{*idx, Direction::LeftRight}, std::move(eta)};
}

}  // namespace ghc::biorder
