#include <gtest/gtest.h>

#include "ckalg/cocycle.hpp"
#include "ckalg/rokhlin.hpp"
#include "ckalg/witness.hpp"
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

}  // namespace

TEST(Chain, Examples) {
  CKAlgebra fib(fixtures::fibonacci());
  const auto u = fib.p(1) - fib.p(2);
  EXPECT_EQ(CocycleChain::build(fib, u, 0).entries(), std::vector<CKElement>{fib.unit()});
  const auto chain = CocycleChain::build(fib, u, 2);
  EXPECT_EQ(chain.at(2), fib.term(w("11"), w("11")) - fib.term(w("12"), w("12")) - fib.term(w("21"), w("21")));

  CKAlgebra full(fixtures::full(2));
  const auto z = RootScalar::root_of_unity(3, 1);
  const auto gauge = CocycleChain::build(full, full.scalar(z), 4);
  RootScalar zk(1);
  for (int k = 0; k <= 4; ++k, zk = zk * z) EXPECT_EQ(gauge.at(k), full.scalar(zk));
}

TEST(Chain, ClosedFormUpToSix) {
  CKAlgebra three(fixtures::three_classes());
  const auto u = RootScalar::root_of_unity(4, 1) * three.p(1) - three.p(2) + three.p(3);
  EXPECT_NO_THROW(CocycleChain::build(three, u, 6));
}

TEST(Chain, IdentitiesHold) {
  CKAlgebra fib(fixtures::fibonacci());
  const auto rep = chain_identities(fib, CocycleChain::build(fib, fib.p(1) - fib.p(2), 4), 2);
  EXPECT_EQ(rep.powers_checked, 5);
  EXPECT_EQ(rep.cocycle_checked, 15);
  EXPECT_EQ(rep.commutators_checked, 10);
  EXPECT_EQ(rep.intertwinings_checked, 2);
  CKAlgebra full(fixtures::full(2));
  EXPECT_NO_THROW(chain_identities(full, CocycleChain::build(full, full.scalar(RootScalar::root_of_unity(3, 1)), 4), 3));
}

TEST(Chain, CorruptedEntryIsCaught) {
  CKAlgebra fib(fixtures::fibonacci());
  const auto u = fib.p(1) - fib.p(2);
  auto entries = CocycleChain::build(fib, u, 3).entries();
  entries[2] = RootScalar(-1) * entries[2];
  EXPECT_EQ(kind_of([&] { chain_identities(fib, CocycleChain::from_entries(u, entries), 2); }), ErrorKind::IdentityFailed);
}

TEST(Path, Examples) {
  BlockMatrix minus{{-Eigen::MatrixXcd::Identity(1, 1)}};
  const auto p = UnitaryPath::of(minus, 2);
  EXPECT_NEAR(std::abs(p.at(0.5).blocks[0](0, 0) - Complex(0, 1)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(p.at(0.0).blocks[0](0, 0) + 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(p.at(1.0).blocks[0](0, 0) - 1.0), 0.0, 1e-12);

  CKAlgebra full(fixtures::full(2));
  const auto z3 = RootScalar::root_of_unity(3, 1);
  const auto u3 = z3 * full.p(1) + z3.conj() * full.p(2);
  const auto p3 = unitary_path(full, u3, 3);
  auto angles = p3.angles();
  std::sort(angles.begin(), angles.end());
  ASSERT_EQ(angles.size(), 2u);
  EXPECT_NEAR(angles[0], -1.0 / 3, 1e-12);
  EXPECT_NEAR(angles[1], 1.0 / 3, 1e-12);
  EXPECT_NEAR(p3.lipschitz_constant(), kTwoPi / 3, 1e-12);

  const auto one = unitary_path(full, full.unit(), 1);
  for (double s : {0.0, 0.3, 1.0}) EXPECT_LT((one.at(s) - BlockMatrix::identity(one.at(s).sizes())).norm(), 1e-12);
  EXPECT_EQ(kind_of([&] { unitary_path(full, u3, 2); }), ErrorKind::NotFiniteOrder);
}

TEST(Path, EndpointsAndLipschitzOnGrid) {
  CKAlgebra full(fixtures::full(3));
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 2 + trial % 3;
    const CKElement u = random_finite_order_unitary(full, rng, n, random_commutant_unitary(full, rng).element()).element();
    const auto path = unitary_path(full, u, n);
    const CoreLayout layout(full.matrix(), 2);
    EXPECT_LT((path.at(0.0) - to_blocks(u, layout)).norm(), 1e-10);
    EXPECT_LT((path.at(1.0) - BlockMatrix::identity(layout.sizes())).norm(), 1e-10);
    for (int i = 0; i < 100; ++i) {
      const double s = i / 100.0, t = (i + 1) / 100.0;
      EXPECT_LE((path.at(s) - path.at(t)).norm(), kTwoPi * (t - s) + 1e-12);
    }
  }
}

TEST(Averaging, ScalarModelDefects) {
  // u = -1: for even r the first tower carries u_r = 1 and the second tower
  // steps through the path of u_{r+1} = -1 in r + 1 pieces.
  const auto r10 = build_averaged_unitary(RokhlinModel::scalar(10, 2));
  EXPECT_NEAR(r10.defect, 2 * std::sin(kTwoPi / 44), 1e-12);
  EXPECT_NEAR(r10.defect_tower0, 0.0, 1e-12);
  EXPECT_LE(r10.defect, r10.bound);
  const auto r20 = build_averaged_unitary(RokhlinModel::scalar(20, 2));
  EXPECT_NEAR(r20.defect, 2 * std::sin(kTwoPi / 84), 1e-12);
  const auto r5 = build_averaged_unitary(RokhlinModel::scalar(5, 2));
  EXPECT_NEAR(r5.defect, 2 * std::sin(kTwoPi / 20), 1e-12);
  const auto trivial = build_averaged_unitary(RokhlinModel::scalar(10, 1));
  EXPECT_NEAR(trivial.defect, 0.0, 1e-12);
  EXPECT_LT((trivial.z - BlockMatrix::identity(trivial.z.sizes())).norm(), 1e-12);
}

TEST(Averaging, BoundHoldsForBothFamilies) {
  for (int r : {3, 5, 10, 20})
    for (int n : {2, 3, 4})
      for (const auto& m : {RokhlinModel::scalar(r, n), RokhlinModel::two_by_two(r, n)}) {
        const auto rep = build_averaged_unitary(m);
        EXPECT_LE(rep.defect, rep.bound + 1e-12) << r << " " << n;
        EXPECT_LT(rep.unitarity, 1e-10);
      }
}

TEST(Averaging, InvalidModels) {
  auto m = RokhlinModel::scalar(4, 2);
  m.perm[0] = 2;
  EXPECT_EQ(kind_of([&] { build_averaged_unitary(m); }), ErrorKind::ModelInvariantViolated);
  auto m2 = RokhlinModel::scalar(4, 3);
  m2.order = 2;
  EXPECT_EQ(kind_of([&] { build_averaged_unitary(m2); }), ErrorKind::ModelInvariantViolated);
  auto m3 = RokhlinModel::scalar(4, 2);
  m3.tower1.pop_back();
  EXPECT_EQ(kind_of([&] { build_averaged_unitary(m3); }), ErrorKind::ModelInvariantViolated);
}

TEST(Innerness, Examples) {
  CKAlgebra fib(fixtures::fibonacci());
  const auto u = fib.p(1) - fib.p(2);
  const auto a = innerness_defect(fib, fib.unit(), u);
  EXPECT_NEAR(a.defect, 2.0, 1e-12);
  EXPECT_TRUE(a.ad_matches);
  const auto b = innerness_defect(fib, u, u);
  EXPECT_NEAR(b.defect, 2.0, 1e-12);
  const auto c = innerness_defect(fib, u, fib.unit());
  EXPECT_NEAR(c.defect, core_norm(fib.unit() - u * phi(fib, u).adjoint()), 1e-15);
  EXPECT_GT(c.defect, 0.0);
  EXPECT_EQ(kind_of([&] { innerness_defect(fib, fib.p(1), u); }), ErrorKind::NotUnitary);
}

TEST(Innerness, AdMatchesLambdaForCommutantUnitaries) {
  std::mt19937_64 rng(73);
  for (const auto& a : {fixtures::full(2), fixtures::fibonacci()}) {
    CKAlgebra alg(a);
    for (int trial = 0; trial < 5; ++trial) {
      const auto wq = random_commutant_unitary(alg, rng).element();
      EXPECT_TRUE(innerness_defect(alg, wq, alg.unit()).ad_matches);
    }
  }
}

TEST(Witness, TrivialGenerator) {
  CKAlgebra fib(fixtures::fibonacci());
  const auto spec = parse_action("group: 1\n0 0\n", 2);
  const auto trace = witness_search(fib, spec, fib.unit(), 2, 1e-9, {200, 2, 0, 1});
  EXPECT_NEAR(trace[0].defect, 0.0, 1e-12);
  EXPECT_LT((trace[0].w - BlockMatrix::identity({1})).norm(), 1e-12);
}

TEST(Witness, TraceIsMonotoneAndStartsAtTwo) {
  CKAlgebra fib(fixtures::fibonacci());
  const auto spec = parse_action("group: 2\n0 1\n", 2);
  const auto trace = witness_search(fib, spec, spec.unitary(fib, 0), 4, 1e-6, {400, 2, 0, 1});
  ASSERT_EQ(trace.size(), 5u);
  EXPECT_EQ(trace[0].defect, 2.0);
  for (std::size_t k = 1; k < trace.size(); ++k) EXPECT_LE(trace[k].defect, trace[k - 1].defect);
}

TEST(Witness, DeterministicAcrossJobCounts) {
  CKAlgebra full(fixtures::full(2));
  const auto spec = parse_action("group: 2\n0 1\n", 2);
  const auto u = spec.unitary(full, 0);
  const auto a = witness_search(full, spec, u, 3, 1e-6, {300, 3, 5, 1});
  const auto b = witness_search(full, spec, u, 3, 1e-6, {300, 3, 5, 3});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].defect, b[k].defect);
}

TEST(Witness, CandidatesStayInFixedPointCommutant) {
  CKAlgebra fib(fixtures::fibonacci());
  const auto spec = parse_action("group: 2\n0 1\n", 2);
  const auto trace = witness_search(fib, spec, spec.unitary(fib, 0), 3, 1e-6, {300, 2, 1, 1});
  const auto& top = trace.back();
  const CoreLayout layout(fib.matrix(), top.level);
  // numeric image of lambda_u on the core multiplies (mu, nu) by eta_mu conj(eta_nu)
  for (std::size_t b = 0; b < layout.block_count(); ++b) {
    const auto& words = layout.block_words(b);
    for (std::size_t r = 0; r < words.size(); ++r)
      for (std::size_t c = 0; c < words.size(); ++c) {
        const bool same_char = spec.character(0, words[r]) == spec.character(0, words[c]);
        const bool same_class = fib.matrix().columns_equal(words[r].front(), words[c].front());
        if (!same_char || !same_class) EXPECT_LT(std::abs(top.w.blocks[b](static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))), 1e-12);
      }
  }
  const auto prod = top.w * top.w.adjoint() - BlockMatrix::identity(layout.sizes());
  EXPECT_LT(prod.norm(), 1e-9);
}
