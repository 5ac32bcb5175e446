#include <gtest/gtest.h>

#include <random>

#include "ckalg/ktheory.hpp"
#include "fixtures.hpp"

using namespace ckalg;

namespace {

Integer determinant(IntegerMatrix m) {
  // fraction-free elimination
  const std::size_t n = m.size();
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && m[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return n == 0 ? Integer(1) : sign * m[n - 1][n - 1];
}

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

// d_k = D_k / D_{k-1} with D_k the gcd of all k x k minors.
std::vector<Integer> determinantal_factors(const IntegerMatrix& m) {
  const std::size_t rows = m.size(), cols = m[0].size();
  std::vector<Integer> out;
  Integer prev = 1;
  for (std::size_t k = 1; k <= std::min(rows, cols); ++k) {
    Integer g = 0;
    for (const auto& rs : subsets(rows, k))
      for (const auto& cs : subsets(cols, k)) {
        IntegerMatrix sub(k, std::vector<Integer>(k));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) sub[i][j] = m[rs[i]][cs[j]];
        g = gcd(g, abs(determinant(sub)));
      }
    if (g == 0) {
      out.push_back(0);
      prev = 0;
    } else {
      out.push_back(g / prev);
      prev = g;
    }
  }
  return out;
}

IntegerMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int lo = -9, int hi = 9) {
  std::uniform_int_distribution<int> e(lo, hi);
  IntegerMatrix m(rows, std::vector<Integer>(cols));
  for (auto& row : m)
    for (auto& x : row) x = e(rng);
  return m;
}

bool is_diagonal(const IntegerMatrix& d) {
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d[i].size(); ++j)
      if (i != j && d[i][j] != 0) return false;
  return true;
}

void expect_valid(const IntegerMatrix& m, const SmithDecomposition& s) {
  EXPECT_EQ(multiply(multiply(s.U, m), s.V), s.D);
  EXPECT_TRUE(is_diagonal(s.D));
  EXPECT_EQ(abs(determinant(s.U)), 1);
  EXPECT_EQ(abs(determinant(s.V)), 1);
  for (std::size_t i = 0; i + 1 < s.factors.size(); ++i) {
    EXPECT_GE(s.factors[i], 0);
    if (s.factors[i] == 0) EXPECT_EQ(s.factors[i + 1], 0);
    else EXPECT_EQ(s.factors[i + 1] % s.factors[i], 0);
  }
}

std::vector<Integer> ints(std::initializer_list<long> v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(Smith, Examples) {
  const IntegerMatrix diag{{2, 0}, {0, 3}};
  EXPECT_EQ(smith_normal_form(diag).factors, ints({1, 6}));
  const IntegerMatrix fib{{0, -1}, {-1, 1}};
  EXPECT_EQ(smith_normal_form(fib).factors, ints({1, 1}));
  const IntegerMatrix zero{{0, 0}, {0, 0}};
  const auto z = smith_normal_form(zero);
  EXPECT_EQ(z.factors, ints({0, 0}));
  EXPECT_EQ(z.U, integer_identity(2));
}

TEST(Smith, RandomMatricesMatchDeterminantalDivisors) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = random_matrix(rng, 4, 4);
    const auto s = smith_normal_form(m);
    expect_valid(m, s);
    EXPECT_EQ(s.factors, determinantal_factors(m));
  }
}

TEST(Smith, RectangularAndLowRank) {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 40; ++trial) {
    const auto a = random_matrix(rng, 3, 2, -4, 4);
    const auto b = random_matrix(rng, 2, 5, -4, 4);
    const auto m = multiply(a, b);  // 3 x 5, rank <= 2
    const auto s = smith_normal_form(m);
    expect_valid(m, s);
    EXPECT_EQ(s.factors.size(), 3u);
    EXPECT_EQ(s.factors.back(), 0);
    EXPECT_EQ(s.factors, determinantal_factors(m));
  }
}

TEST(Smith, FactorsIndependentOfRowAndColumnOrder) {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 50; ++trial) {
    auto m = random_matrix(rng, 4, 4);
    const auto base = smith_normal_form(m).factors;
    std::shuffle(m.begin(), m.end(), rng);
    std::vector<std::size_t> perm{0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), rng);
    IntegerMatrix p = m;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) p[i][j] = m[i][perm[j]];
    // unimodular mixing on top of the permutation
    p[0] = std::vector<Integer>{p[0][0] + 3 * p[1][0], p[0][1] + 3 * p[1][1], p[0][2] + 3 * p[1][2], p[0][3] + 3 * p[1][3]};
    EXPECT_EQ(smith_normal_form(p).factors, base);
  }
}

TEST(Smith, LargeEntriesStayExact) {
  IntegerMatrix m{{Integer("123456789012345678901234567890"), 7}, {11, Integer("98765432109876543210")}};
  const auto s = smith_normal_form(m);
  expect_valid(m, s);
  EXPECT_EQ(s.factors, determinantal_factors(m));
}

TEST(KGroups, Examples) {
  const auto fib = k_groups(fixtures::fibonacci());
  EXPECT_TRUE(fib.trivial());
  EXPECT_EQ(fib.k0_str(), "0");
  EXPECT_TRUE(k_groups(fixtures::full(2)).trivial());
  const auto f4 = k_groups(fixtures::full(4));
  EXPECT_EQ(f4.torsion, ints({3}));
  EXPECT_EQ(f4.k0_rank, 0);
  EXPECT_EQ(f4.k1_rank, 0);
  EXPECT_EQ(f4.k0_str(), "Z_3");
}

TEST(KGroups, CuntzAlgebrasAndIdentity) {
  for (int n = 2; n <= 6; ++n) {
    const auto g = k_groups(fixtures::full(n));
    if (n == 2) EXPECT_TRUE(g.torsion.empty());
    else EXPECT_EQ(g.torsion, ints({n - 1}));
  }
  const auto id = k_groups(ZeroOneMatrix::identity(3));
  EXPECT_EQ(id.k0_rank, 3);
  EXPECT_EQ(id.k1_rank, 3);
  EXPECT_EQ(id.k0_str(), "Z^3");
  EXPECT_EQ(id.k1_str(), "Z^3");
}

TEST(KGroups, InvariantUnderRelabelling) {
  std::mt19937_64 rng(109);
  std::bernoulli_distribution bit(0.6);
  int checked = 0;
  while (checked < 30) {
    std::vector<std::vector<int>> rows(4, std::vector<int>(4));
    for (auto& r : rows)
      for (auto& x : r) x = bit(rng);
    ZeroOneMatrix a = ZeroOneMatrix::identity(4);
    try {
      a = ZeroOneMatrix::validate(rows);
    } catch (const Error&) {
      continue;
    }
    std::vector<int> perm{0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::vector<int>> permuted(4, std::vector<int>(4));
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) permuted[i][j] = rows[static_cast<std::size_t>(perm[i])][static_cast<std::size_t>(perm[j])];
    const auto g = k_groups(a), h = k_groups(ZeroOneMatrix::validate(permuted));
    EXPECT_EQ(g.torsion, h.torsion);
    EXPECT_EQ(g.k0_rank, h.k0_rank);
    EXPECT_EQ(g.k1_rank, h.k1_rank);
    ++checked;
  }
}

TEST(O2, Examples) {
  const auto fib = is_O2(fixtures::fibonacci());
  EXPECT_TRUE(fib.value);
  EXPECT_EQ(fib.aperiodicity, 2);
  EXPECT_TRUE(is_O2(fixtures::full(2)).value);
  const auto f4 = is_O2(fixtures::full(4));
  EXPECT_FALSE(f4.value);
  EXPECT_NE(f4.explanation.find("Z_3"), std::string::npos);
  const auto flip = is_O2(fixtures::flip());
  EXPECT_FALSE(flip.value);
  EXPECT_FALSE(flip.aperiodicity.has_value());
}
