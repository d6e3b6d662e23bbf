#include <gtest/gtest.h>

#include <limits>
#include <numeric>
#include <random>

#include "ghc/smith.hpp"

using namespace ghc;
using smith::AbelianInvariants;
using smith::DenseMatrix;
using smith::SparseVector;

namespace {

SparseVector to_sparse(const std::vector<std::int64_t>& row) {
  SparseVector v;
  for (std::size_t i = 0; i < row.size(); ++i)
    if (row[i] != 0) v.emplace_back(i, row[i]);
  return v;
}

AbelianInvariants via_reducer(std::size_t dim, const DenseMatrix& rows) {
  std::vector<SparseVector> sparse;
  for (const auto& r : rows) sparse.push_back(to_sparse(r));
  return smith::sparse_quotient(dim, sparse);
}

}  // namespace

TEST(SmithDiagonal, Examples) {
  EXPECT_TRUE(smith::smith_diagonal({}).empty());
  EXPECT_EQ(smith::smith_diagonal({{2, 0}, {0, 3}}), (std::vector<std::int64_t>{1, 6}));
  EXPECT_EQ(smith::smith_diagonal({{2, 4}, {6, 8}}), (std::vector<std::int64_t>{2, 4}));
  EXPECT_EQ(smith::smith_diagonal({{0, 0}, {0, 0}}), (std::vector<std::int64_t>{}));
}

TEST(Quotient, Examples) {
  EXPECT_EQ(smith::dense_quotient(3, {}), (AbelianInvariants{3, {}}));
  EXPECT_EQ(smith::dense_quotient(1, {{2}}), (AbelianInvariants{0, {2}}));
  EXPECT_EQ(smith::dense_quotient(2, {{1, -1}}), (AbelianInvariants{1, {}}));
  EXPECT_TRUE(smith::dense_quotient(2, {{1, 0}, {0, 1}}).trivial());
  EXPECT_EQ(via_reducer(2, {{2, 0}, {0, 4}}), (AbelianInvariants{0, {2, 4}}));
  EXPECT_EQ(via_reducer(2, {{2, 2}, {0, 4}}), (AbelianInvariants{0, {2, 4}}));
}

// For a 2x2 matrix, d1 = gcd of entries and d1 d2 = |det|.
TEST(SmithDiagonal, MatchesDeterminantalDivisors) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> d(-9, 9);
  for (int trial = 0; trial < 2000; ++trial) {
    DenseMatrix m{{d(rng), d(rng)}, {d(rng), d(rng)}};
    const std::int64_t g = std::gcd(std::gcd(m[0][0], m[0][1]), std::gcd(m[1][0], m[1][1]));
    const std::int64_t det = std::llabs(m[0][0] * m[1][1] - m[0][1] * m[1][0]);
    std::vector<std::int64_t> expected;
    if (g != 0) expected.push_back(g);
    if (det != 0) expected.push_back(det / g);
    EXPECT_EQ(smith::smith_diagonal(m), expected);
  }
}

TEST(LatticeReducer, AgreesWithDenseOnRandomMatrices) {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t rows = 1 + rng() % 8, cols = 1 + rng() % 7;
    const int spread = trial % 3 == 0 ? 1 : 4;
    std::uniform_int_distribution<int> d(-spread, spread);
    DenseMatrix m(rows, std::vector<std::int64_t>(cols));
    for (auto& r : m)
      for (auto& x : r) x = rng() % 3 == 0 ? d(rng) : 0;
    EXPECT_EQ(via_reducer(cols, m), smith::dense_quotient(cols, m)) << "trial " << trial;
  }
}

TEST(LatticeReducer, CountsUnitPivots) {
  smith::LatticeReducer red(3);
  red.add({{0, 1}, {1, -1}});
  red.add({{1, 1}, {2, -1}});
  red.add({{0, 2}});
  EXPECT_EQ(red.unit_pivots(), 2u);
  EXPECT_EQ(red.quotient(), (AbelianInvariants{0, {2}}));
}

TEST(Arithmetic, OverflowIsReported) {
  const std::int64_t big = std::numeric_limits<std::int64_t>::max();
  EXPECT_THROW(smith::detail::checked_add(big, 1), InternalCheckFailed);
  EXPECT_THROW(smith::detail::checked_mul(big, 2), InternalCheckFailed);
  EXPECT_THROW(smith::detail::checked_sub(-big, 2), InternalCheckFailed);
}
