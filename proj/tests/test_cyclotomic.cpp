#include <gtest/gtest.h>

#include <random>

#include "ckalg/cyclotomic.hpp"

using namespace ckalg;

TEST(Cyclotomic, PolynomialsOfSmallOrders) {
  // Phi_12 = x^4 - x^2 + 1
  const auto& p12 = detail::cyclotomic_polynomial(12);
  ASSERT_EQ(p12.size(), 5u);
  EXPECT_EQ(p12[0], 1);
  EXPECT_EQ(p12[1], 0);
  EXPECT_EQ(p12[2], -1);
  EXPECT_EQ(p12[3], 0);
  EXPECT_EQ(p12[4], 1);
  EXPECT_EQ(detail::cyclotomic_polynomial(7).size(), 7u);
}

TEST(Cyclotomic, RootsOfUnity) {
  const auto z3 = RootScalar::root_of_unity(3, 1);
  EXPECT_EQ(z3 * z3 * z3, RootScalar(1));
  EXPECT_EQ(z3.conj(), z3 * z3);
  EXPECT_EQ(RootScalar(1) + z3 + z3 * z3, RootScalar(0));
  EXPECT_EQ(RootScalar::root_of_unity(2, 1), RootScalar(-1));
  EXPECT_EQ(RootScalar::root_of_unity(12, 4), z3);
  EXPECT_EQ(RootScalar::root_of_unity(4, 1) * RootScalar::root_of_unity(4, 1), RootScalar(-1));
}

TEST(Cyclotomic, SquareRootOfThreeInZeta12) {
  const auto z = RootScalar::root_of_unity(12, 1);
  const auto sqrt3 = z + z.conj();
  EXPECT_EQ(sqrt3 * sqrt3, RootScalar(3));
  EXPECT_NEAR(sqrt3.to_complex().real(), std::sqrt(3.0), 1e-12);
}

TEST(Cyclotomic, FieldAxiomsAgainstComplexEmbedding) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> num(-5, 5), den(1, 4), pw(0, 23);
  const int orders[] = {1, 2, 3, 4, 6, 8, 12, 24};
  auto random = [&]() {
    RootScalar x(0);
    for (int t = 0; t < 3; ++t) x += RootScalar::rational(num(rng), den(rng)) * RootScalar::root_of_unity(orders[rng() % 8], pw(rng));
    return x;
  };
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random(), b = random(), c = random();
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ((a * b).conj(), a.conj() * b.conj());
    EXPECT_NEAR(std::abs((a * b).to_complex() - a.to_complex() * b.to_complex()), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(a.conj().to_complex() - std::conj(a.to_complex())), 0.0, 1e-9);
    EXPECT_EQ(a.minimized(), a);
  }
}

TEST(Cyclotomic, Rendering) {
  EXPECT_EQ(RootScalar::rational(-3, 4).str(), "-3/4");
  EXPECT_EQ(RootScalar::root_of_unity(12, 4).str(), "(z3^1)");
  EXPECT_EQ(RootScalar::root_of_unity(4, 2).str(), "-1");
  EXPECT_EQ((RootScalar::rational(1, 2) + RootScalar::root_of_unity(4, 1)).str(), "(1/2 + z4^1)");
}
