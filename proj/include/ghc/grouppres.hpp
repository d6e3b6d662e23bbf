#pragma once

// Finite groups given by multiplication tables, and finitely presented groups
// with Tietze simplification and abelianization.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "ghc/errors.hpp"
#include "ghc/gf.hpp"
#include "ghc/smith.hpp"

namespace ghc::grouppres {

inline constexpr std::size_t kGroupAssociativityBudget = 128;
inline constexpr std::uint64_t kDefaultGroupBudget = 1'000'000;

class GroupTable {
 public:
  GroupTable() = default;

  /// Validates identity and inverse laws always, associativity when the order
  /// is within kGroupAssociativityBudget.
  GroupTable(std::size_t order, std::vector<std::size_t> mult,
             std::vector<std::string> labels)
      : order_(order), mult_(std::move(mult)), labels_(std::move(labels)) {
    if (order_ == 0 || mult_.size() != order_ * order_ || labels_.size() != order_)
      throw InvalidInput("group table has inconsistent size");
    for (auto v : mult_)
      if (v >= order_) throw InvalidInput("group table entry out of range");
    identity_ = order_;
    for (std::size_t e = 0; e < order_ && identity_ == order_; ++e) {
      bool ok = true;
      for (std::size_t x = 0; x < order_ && ok; ++x)
        ok = (*this)(e, x) == x && (*this)(x, e) == x;
      if (ok) identity_ = e;
    }
    if (identity_ == order_) throw InvalidInput("group table has no identity");
    inverse_.assign(order_, order_);
    for (std::size_t x = 0; x < order_; ++x)
      for (std::size_t y = 0; y < order_; ++y)
        if ((*this)(x, y) == identity_ && (*this)(y, x) == identity_) inverse_[x] = y;
    for (auto inv : inverse_)
      if (inv == order_) throw InvalidInput("group table lacks an inverse");
    if (order_ <= kGroupAssociativityBudget)
      for (std::size_t a = 0; a < order_; ++a)
        for (std::size_t b = 0; b < order_; ++b)
          for (std::size_t c = 0; c < order_; ++c)
            if ((*this)((*this)(a, b), c) != (*this)(a, (*this)(b, c)))
              throw NotAssociative("group table is not associative");
    for (std::size_t i = 0; i < order_; ++i) index_.emplace(labels_[i], i);
  }

  std::size_t order() const { return order_; }
  std::size_t identity() const { return identity_; }
  std::size_t inverse(std::size_t x) const { return inverse_[x]; }
  std::size_t operator()(std::size_t a, std::size_t b) const {
    return mult_[a * order_ + b];
  }
  std::size_t mul(std::size_t a, std::size_t b) const { return (*this)(a, b); }
  const std::string& label(std::size_t x) const { return labels_[x]; }

  std::optional<std::size_t> index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t element_order(std::size_t x) const {
    std::size_t k = 1, acc = x;
    while (acc != identity_) {
      acc = (*this)(acc, x);
      ++k;
    }
    return k;
  }

 private:
  std::size_t order_ = 0;
  std::vector<std::size_t> mult_;
  std::vector<std::string> labels_;
  std::size_t identity_ = 0;
  std::vector<std::size_t> inverse_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// GF(q)^*, element i is the residue i + 1 and is labelled by it.
inline GroupTable units_group(std::uint32_t q) {
  gf::check_modulus(q);
  const std::size_t m = q - 1;
  std::vector<std::size_t> mult(m * m);
  std::vector<std::string> labels(m);
  for (std::size_t a = 0; a < m; ++a) {
    labels[a] = std::to_string(a + 1);
    for (std::size_t b = 0; b < m; ++b)
      mult[a * m + b] = (a + 1) * (b + 1) % q - 1;
  }
  return {m, std::move(mult), std::move(labels)};
}

/// GL_k(GF(q)); elements ordered by their row-major entries read as base-q
/// numbers and labelled by Matrix::key().
inline GroupTable gl_table(std::size_t k, std::uint32_t q,
                           std::uint64_t budget = kDefaultGroupBudget) {
  gf::check_modulus(q);
  if (k == 0) throw InvalidInput("GL_0 is not supported");
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < k * k; ++i) {
    total *= q;
    if (total > budget)
      throw InfeasibleSize("q^(k^2) exceeds the group budget");
  }
  std::vector<gf::Matrix> elems;
  for (std::uint64_t code = 0; code < total; ++code) {
    gf::Matrix m(k, k, q);
    std::uint64_t c = code;
    for (std::size_t idx = k * k; idx-- > 0;) {
      m.set(idx / k, idx % k, static_cast<std::int64_t>(c % q));
      c /= q;
    }
    if (gf::is_invertible(m)) elems.push_back(std::move(m));
  }
  const std::size_t order = elems.size();
  if (static_cast<std::uint64_t>(order) * order > budget * 4)
    throw InfeasibleSize("GL_k multiplication table exceeds the group budget");
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < order; ++i) {
    labels.push_back(elems[i].key());
    index.emplace(labels.back(), i);
  }
  std::vector<std::size_t> mult(order * order);
  for (std::size_t a = 0; a < order; ++a)
    for (std::size_t b = 0; b < order; ++b)
      mult[a * order + b] = index.at(gf::mat_mul(elems[a], elems[b]).key());
  return {order, std::move(mult), std::move(labels)};
}

/// Closure of elems under multiplication and inverses, sorted.
inline std::vector<std::size_t> subgroup_generated(const GroupTable& g,
                                                   const std::vector<std::size_t>& elems) {
  std::vector<bool> in(g.order(), false);
  std::vector<std::size_t> members{g.identity()};
  in[g.identity()] = true;
  std::vector<std::size_t> gens;
  for (auto x : elems) {
    gens.push_back(x);
    gens.push_back(g.inverse(x));
  }
  for (std::size_t i = 0; i < members.size(); ++i)
    for (auto s : gens) {
      auto y = g(members[i], s);
      if (!in[y]) {
        in[y] = true;
        members.push_back(y);
      }
    }
  std::sort(members.begin(), members.end());
  return members;
}

/// A word is a sequence of nonzero letters: +(i+1) is generator i, -(i+1) its
/// inverse.
using Word = std::vector<std::int64_t>;

struct Presentation {
  std::size_t generators = 0;
  std::vector<Word> relators;
  std::vector<std::string> labels;  // one per generator

  void validate() const {
    for (const auto& r : relators)
      for (auto x : r)
        if (x == 0 || static_cast<std::size_t>(std::llabs(x)) > generators)
          throw InvalidInput("relator letter out of range");
  }

  std::size_t total_length() const {
    std::size_t n = 0;
    for (const auto& r : relators) n += r.size();
    return n;
  }

  bool is_trivial() const {
    return generators == 0;
  }

  /// `gens: n` followed by one relator per line.
  std::string to_text() const {
    std::string s = "gens: " + std::to_string(generators) + "\n";
    for (const auto& r : relators) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(r[i]);
      }
      s += '\n';
    }
    return s;
  }
};

inline Presentation presentation_from_text(const std::string& text) {
  Presentation p;
  std::size_t pos = 0;
  bool header = false;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!header) {
      if (line.rfind("gens:", 0) != 0) throw InvalidInput("missing 'gens:' header");
      p.generators = std::stoul(line.substr(5));
      header = true;
      continue;
    }
    Word w;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && line[i] == ' ') ++i;
      if (i >= line.size()) break;
      std::size_t used = 0;
      w.push_back(std::stoll(line.substr(i), &used));
      i += used;
    }
    p.relators.push_back(std::move(w));
  }
  if (!header) throw InvalidInput("empty presentation text");
  for (std::size_t g = 0; g < p.generators; ++g) p.labels.push_back(std::to_string(g + 1));
  p.validate();
  return p;
}

/// Free and cyclic reduction.
inline Word cyclically_reduce(const Word& w) {
  Word out;
  for (auto x : w) {
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  std::size_t lo = 0, hi = out.size();
  while (hi - lo >= 2 && out[lo] == -out[hi - 1]) {
    ++lo;
    --hi;
  }
  return Word(out.begin() + lo, out.begin() + hi);
}

inline Word invert(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (auto& x : out) x = -x;
  return out;
}

/// Least rotation of w and of its inverse; equal for relators that are
/// conjugates of each other or of each other's inverse.
inline Word canonical_relator(const Word& w) {
  Word best = w;
  for (const Word& base : {w, invert(w)}) {
    for (std::size_t r = 0; r < base.size(); ++r) {
      Word rot(base.begin() + r, base.end());
      rot.insert(rot.end(), base.begin(), base.begin() + r);
      if (rot < best) best = std::move(rot);
    }
  }
  return best;
}

struct TietzeResult {
  Presentation presentation;
  bool budget_exceeded = false;
  std::size_t moves = 0;
};

inline constexpr std::size_t kDefaultTietzeBudget = 100'000;

/// Length-non-increasing Tietze moves to a fixpoint: cyclic reduction,
/// deletion of empty and duplicate relators, elimination of a generator by a
/// relator of length 1 (x = 1) or of length 2 on two distinct generators
/// (x = y^{+-1}). Of the two generators the one with the larger index goes.
inline TietzeResult tietze_simplify(const Presentation& input,
                                    std::size_t budget = kDefaultTietzeBudget) {
  input.validate();
  const std::size_t ngen = input.generators;
  std::vector<Word> rel;
  rel.reserve(input.relators.size());
  for (const auto& r : input.relators) rel.push_back(cyclically_reduce(r));
  std::vector<bool> alive(rel.size(), true);
  std::vector<bool> gen_alive(ngen, true);
  std::vector<std::vector<std::size_t>> occ(ngen);
  for (std::size_t i = 0; i < rel.size(); ++i)
    for (auto x : rel[i]) occ[std::llabs(x) - 1].push_back(i);

  TietzeResult result;
  std::deque<std::size_t> work;
  for (std::size_t i = 0; i < rel.size(); ++i) work.push_back(i);

  // replace generator z by the word `image` (empty, or a single letter)
  auto substitute = [&](std::size_t z, std::int64_t image_letter) {
    gen_alive[z] = false;
    const std::int64_t zl = static_cast<std::int64_t>(z) + 1;
    std::vector<std::size_t> ids = std::move(occ[z]);
    occ[z].clear();
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (auto id : ids) {
      if (!alive[id]) continue;
      Word w;
      bool hit = false;
      for (auto x : rel[id]) {
        if (x == zl || x == -zl) {
          hit = true;
          if (image_letter != 0) w.push_back(x > 0 ? image_letter : -image_letter);
        } else {
          w.push_back(x);
        }
      }
      if (!hit) continue;
      rel[id] = cyclically_reduce(w);
      if (image_letter != 0) occ[std::llabs(image_letter) - 1].push_back(id);
      work.push_back(id);
    }
  };

  while (!work.empty()) {
    const std::size_t id = work.front();
    work.pop_front();
    if (!alive[id]) continue;
    Word& r = rel[id];
    if (r.empty()) {
      alive[id] = false;
      continue;
    }
    if (r.size() == 1) {
      if (result.moves >= budget) {
        result.budget_exceeded = true;
        break;
      }
      ++result.moves;
      alive[id] = false;
      substitute(std::llabs(r[0]) - 1, 0);
      continue;
    }
    if (r.size() == 2 && std::llabs(r[0]) != std::llabs(r[1])) {
      if (result.moves >= budget) {
        result.budget_exceeded = true;
        break;
      }
      ++result.moves;
      const std::int64_t x = r[0], y = r[1];
      alive[id] = false;
      // x y = 1: the larger generator is the inverse of the other letter
      const bool drop_x = std::llabs(x) > std::llabs(y);
      const std::int64_t drop = drop_x ? x : y, keep = drop_x ? y : x;
      // drop^s = keep^{-1} with s = sign(drop), so drop = keep^{-s}
      const std::int64_t image = drop > 0 ? -keep : keep;
      substitute(std::llabs(drop) - 1, image);
      continue;
    }
  }

  // duplicates and renumbering
  std::vector<std::int64_t> renumber(ngen, 0);
  Presentation& out = result.presentation;
  for (std::size_t g = 0; g < ngen; ++g)
    if (gen_alive[g]) {
      renumber[g] = static_cast<std::int64_t>(++out.generators);
      out.labels.push_back(g < input.labels.size() ? input.labels[g]
                                                   : std::to_string(g + 1));
    }
  std::set<Word> seen;
  for (std::size_t i = 0; i < rel.size(); ++i) {
    if (!alive[i] || rel[i].empty()) continue;
    Word w;
    for (auto x : rel[i]) {
      const auto g = renumber[std::llabs(x) - 1];
      if (g == 0) throw InternalCheckFailed("relator references an eliminated generator");
      w.push_back(x > 0 ? g : -g);
    }
    Word c = canonical_relator(w);
    if (seen.insert(c).second) out.relators.push_back(std::move(w));
  }
  return result;
}

/// Abelianization via the exponent-sum matrix of the relators.
inline smith::AbelianInvariants abelian_invariants(const Presentation& p) {
  p.validate();
  std::vector<smith::SparseVector> rows;
  rows.reserve(p.relators.size());
  for (const auto& r : p.relators) {
    std::map<std::size_t, std::int64_t> sums;
    for (auto x : r) sums[std::llabs(x) - 1] += x > 0 ? 1 : -1;
    smith::SparseVector v;
    for (auto [g, c] : sums)
      if (c != 0) v.emplace_back(g, c);
    if (!v.empty()) rows.push_back(std::move(v));
  }
  return smith::sparse_quotient(p.generators, rows);
}

}  // namespace ghc::grouppres
