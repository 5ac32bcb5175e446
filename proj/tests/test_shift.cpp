#include <gtest/gtest.h>

#include "ckalg/quasifree.hpp"
#include "ckalg/shift.hpp"
#include "fixtures.hpp"

using namespace ckalg;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an ckalg::Error";
  return ErrorKind::Parse;
}

Word w(const char* digits) { return Word::from_digits(digits); }

// Random element of the level-k diagonal commutant.
CKElement random_commutant(const CKAlgebra& alg, std::mt19937_64& rng, int k) {
  const auto basis = diagonal_commutant_basis(alg, k);
  std::uniform_int_distribution<int> coef(-2, 2), root(0, 11);
  CKElement x = alg.zero();
  for (const auto& b : basis) x = x + (RootScalar(coef(rng)) * RootScalar::root_of_unity(12, root(rng))) * b;
  return x;
}

}  // namespace

TEST(Phi, Examples) {
  CKAlgebra fib(fixtures::fibonacci());
  EXPECT_EQ(phi(fib, fib.unit()), fib.unit());
  EXPECT_EQ(phi(fib, fib.p(1)), fib.term(w("11"), w("11")) + fib.term(w("21"), w("21")));
  EXPECT_EQ(phi(fib, fib.p(2)), fib.term(w("12"), w("12")));
}

TEST(Phi, PowerExamples) {
  CKAlgebra fib(fixtures::fibonacci());
  const auto x = fib.p(1) - fib.p(2);
  EXPECT_EQ(phi_power(fib, x, 0, true), x);
  EXPECT_EQ(phi_power(fib, fib.unit(), 2, true), fib.unit());
  CKElement expected = fib.zero();
  for (const Word& nu : admissible_words(fib.matrix(), 2))
    for (int l = 1; l <= 2; ++l)
      if (fib.matrix()(nu.back(), l)) expected = expected + RootScalar(l == 1 ? 1 : -1) * fib.term(nu.appended(l), nu.appended(l));
  EXPECT_EQ(phi_power(fib, x, 2, true), expected);
}

TEST(Phi, ClosedFormMatchesIterate) {
  std::mt19937_64 rng(51);
  for (const auto& a : {fixtures::fibonacci(), fixtures::three_classes()}) {
    CKAlgebra alg(a);
    for (int k = 0; k <= 5; ++k) {
      const auto x = fixtures::random_element(alg, rng, 3, 2);
      EXPECT_NO_THROW(phi_power(alg, x, k, true));
    }
  }
}

TEST(Phi, MultiplicativeOnCommutantAndUnital) {
  std::mt19937_64 rng(53);
  for (const auto& a : {fixtures::fibonacci(), fixtures::three_classes(), fixtures::full(2)}) {
    CKAlgebra alg(a);
    EXPECT_EQ(phi(alg, alg.unit()), alg.unit());
    for (int trial = 0; trial < 10; ++trial) {
      const auto x = random_commutant(alg, rng, 1 + trial % 2);
      const auto y = random_commutant(alg, rng, 1);
      EXPECT_EQ(phi(alg, x * y), phi(alg, x) * phi(alg, y));
      EXPECT_EQ(phi(alg, x.adjoint()), phi(alg, x).adjoint());
    }
  }
}

TEST(Phi, PositiveOnRandomSquares) {
  std::mt19937_64 rng(57);
  CKAlgebra alg(fixtures::three_classes());
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = fixtures::random_element(alg, rng, 3, 2, true);
    const auto y = phi(alg, x.adjoint() * x);
    const CoreLayout layout(alg.matrix(), static_cast<int>(y.max_word_length()) + 1);
    for (const auto& b : to_blocks(y, layout).blocks) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(b);
      EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9);
    }
  }
}

TEST(Injectivity, Examples) {
  CKAlgebra fib(fixtures::fibonacci());
  EXPECT_EQ(injectivity_witness(fib, fib.unit()).letter, 1);
  const auto wp2 = injectivity_witness(fib, fib.p(2));
  EXPECT_EQ(wp2.letter, 1);
  EXPECT_EQ(wp2.certificate, fib.term(w("12"), w("12")));
  EXPECT_EQ(injectivity_witness(fib, fib.p(1) - fib.p(2)).letter, 1);
  EXPECT_EQ(kind_of([&] { injectivity_witness(fib, fib.zero()); }), ErrorKind::ZeroInput);
  EXPECT_EQ(kind_of([&] { injectivity_witness(fib, fib.term(w("1"), w("2"))); }), ErrorKind::NotInCommutant);
}

TEST(Injectivity, RandomCommutantElements) {
  std::mt19937_64 rng(59);
  for (const auto& a : {fixtures::fibonacci(), fixtures::three_classes()}) {
    CKAlgebra alg(a);
    for (int trial = 0; trial < 15; ++trial) {
      const auto x = random_commutant(alg, rng, 1 + trial % 2);
      if (x.is_zero()) continue;
      const auto wit = injectivity_witness(alg, x);
      EXPECT_FALSE(wit.certificate.is_zero());
    }
  }
}

TEST(Corner, Examples) {
  CKAlgebra fib(fixtures::fibonacci());
  const auto r12 = corner_formula_check(fib, 2, 1, 2, fib.unit());
  EXPECT_TRUE(r12.equal);
  EXPECT_EQ(r12.words, std::vector<Word>{w("11")});
  const auto r22 = corner_formula_check(fib, 2, 2, 2, fib.unit());
  EXPECT_TRUE(r22.equal);
  EXPECT_EQ(r22.words, std::vector<Word>{w("21")});
  const auto zero = corner_formula_check(fib, 1, 1, 1, fib.p(2));
  EXPECT_TRUE(zero.equal);
  EXPECT_TRUE(zero.lhs.is_zero());
  EXPECT_TRUE(zero.rhs.is_zero());
  EXPECT_EQ(kind_of([&] { corner_formula_check(fib, 3, 1, 1, fib.unit()); }), ErrorKind::IndexOutOfRange);
}

TEST(Corner, AllClassPairsRandomDiagonal) {
  std::mt19937_64 rng(61);
  for (const auto& a : {fixtures::fibonacci(), fixtures::three_classes()}) {
    CKAlgebra alg(a);
    const int classes = static_cast<int>(a.column_classes().size());
    for (int k = 1; k <= 3; ++k) {
      const auto x = random_commutant(alg, rng, 1);
      for (int i = 1; i <= classes; ++i)
        for (int j = 1; j <= classes; ++j) EXPECT_TRUE(corner_formula_check(alg, i, j, k, x).equal) << i << j << k;
    }
  }
}

TEST(Fullness, Examples) {
  CKAlgebra fib(fixtures::fibonacci());
  const auto a = fullness_witness(fib, 2, 1, fib.p(2));
  EXPECT_EQ(a.s, 1);
  EXPECT_EQ(a.t, 1);
  EXPECT_EQ(a.m, 2);
  EXPECT_EQ(a.mu, w("11"));
  EXPECT_EQ(a.certificate, fib.p(2));
  const auto b = fullness_witness(fib, 2, 2, fib.p(2));
  EXPECT_EQ(b.s, 2);
  EXPECT_EQ(b.mu, w("21"));
  const auto c = fullness_witness(fib, 1, 2, fib.unit());
  EXPECT_EQ(c.certificate, fib.q(c.t));
  EXPECT_EQ(kind_of([&] { fullness_witness(fib, 1, 1, fib.p(2)); }), ErrorKind::ZeroCorner);
  CKAlgebra flip(fixtures::flip());
  EXPECT_EQ(kind_of([&] { fullness_witness(flip, 1, 1, flip.unit()); }), ErrorKind::NotAperiodic);
}

TEST(Preimage, Examples) {
  CKAlgebra perm(fixtures::flip());
  const auto v = solve_phi_preimage(perm, 1);
  EXPECT_TRUE(v.solvable);
  EXPECT_EQ(v.candidate, perm.p(2));
  EXPECT_EQ(v.image, perm.p(1));

  CKAlgebra fib(fixtures::fibonacci());
  const auto f = solve_phi_preimage(fib, 1);
  EXPECT_FALSE(f.solvable);
  EXPECT_EQ(f.candidate, fib.unit());
  EXPECT_EQ(f.image, fib.unit());
  const auto rep = surjectivity_report(fib);
  EXPECT_FALSE(rep.all_solvable);
  EXPECT_FALSE(rep.permutation);
  EXPECT_TRUE(surjectivity_report(CKAlgebra(ZeroOneMatrix::identity(3))).all_solvable);
}

TEST(Dilation, Examples) {
  CKAlgebra fib(fixtures::fibonacci());
  const auto x = fib.p(1) - RootScalar(2) * fib.p(2);
  const auto a = dilation_make(fib, 0, x);
  EXPECT_TRUE(dilation_equals(fib, a, dilation_make(fib, 1, phi(fib, x))));
  EXPECT_TRUE(dilation_equals(fib, dilation_apply_inverse(dilation_apply(fib, a)), a));
  EXPECT_TRUE(dilation_equals(fib, dilation_apply(fib, dilation_apply_inverse(a)), a));
  EXPECT_FALSE(dilation_equals(fib, dilation_make(fib, 0, fib.p(1)), dilation_make(fib, 0, fib.p(2))));
  EXPECT_EQ(kind_of([&] { dilation_equals(fib, a, dilation_make(fib, 9, x)); }), ErrorKind::ProbeExceeded);
  EXPECT_EQ(kind_of([&] { dilation_make(fib, 0, fib.s(1)); }), ErrorKind::NotInCommutant);
}

TEST(Dilation, EquivalenceOnProbedPairs) {
  std::mt19937_64 rng(67);
  CKAlgebra alg(fixtures::three_classes());
  for (int trial = 0; trial < 6; ++trial) {
    const auto x = random_commutant(alg, rng, 1);
    const DilationElement a{0, x}, b{2, phi_power(alg, x, 2)}, c{3, phi_power(alg, x, 3)};
    EXPECT_TRUE(dilation_equals(alg, a, a));
    EXPECT_EQ(dilation_equals(alg, a, b), dilation_equals(alg, b, a));
    EXPECT_TRUE(dilation_equals(alg, a, b) && dilation_equals(alg, b, c) && dilation_equals(alg, a, c));
  }
}
