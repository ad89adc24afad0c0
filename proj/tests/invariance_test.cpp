#include <gtest/gtest.h>

#include "gieseker/jobs.hpp"

using namespace gieseker;

namespace {

GiesekerGermDatum worked_datum(int precision = 12) {
  LocalChartGerm g;
  g.p = 7;
  g.e = 3;
  g.zeta = Fp(2, 7);
  g.alpha = {0, 1, 1};
  g.F = QuotientMatrix::identity(3, 7);
  for (int j = 1; j < 3; ++j) {
    g.F.u(j, j) = LaurentSeries::monomial(Fp::one(7), 1, precision);
    g.F.v(j, j) = LaurentSeries::monomial(Fp::one(7), -1, precision);
  }
  return forward(g);
}

GiesekerGermDatum random_datum(Sampler& rng, int r_max, int e, int precision = 12) {
  return forward(random_germ(rng, rng.uniform_int(1, r_max), e, precision));
}

void expect_all(const std::vector<CheckResult>& checks) {
  for (const auto& c : checks) EXPECT_TRUE(c.passed) << c.name;
}

PowerSeries P(Residue p, std::vector<std::int64_t> c, int prec) { return PowerSeries::from_coeffs(p, c, prec); }

int hp(int e) { return invariant_precision(12, e); }

}  // namespace

TEST(Reparam, IdentityChangesNothing) {
  const auto d = worked_datum();
  const auto res = reparam_transform(d, {PowerSeries::one(7, 6), PowerSeries::one(7, 6)});
  expect_all(res.checks);
  EXPECT_EQ(res.datum.H.h1, d.H.h1);
  EXPECT_EQ(res.datum.H.h2, d.H.h2);
  EXPECT_EQ(res.fiber_p1, identity_const(3, 7));
  EXPECT_EQ(res.fiber_p2, identity_const(3, 7));
}

TEST(Reparam, WorkedGermScalesTwistedColumns) {
  const auto d = worked_datum();
  const PowerSeries pi = P(7, {1, 1}, 3);
  const auto res = reparam_transform(d, {pi, PowerSeries::one(7, 3)});
  expect_all(res.checks);
  const LaurentSeries one_plus_s = pi.to_laurent();
  EXPECT_EQ(res.datum.H.h1(0, 0), LaurentSeries::one(7, 3));
  EXPECT_EQ(res.datum.H.h1(1, 1), one_plus_s);
  EXPECT_EQ(res.datum.H.h1(2, 2), one_plus_s);
  EXPECT_TRUE(res.datum.H.h1(0, 1).is_zero());
  EXPECT_EQ(res.datum.H.h2, d.H.h2);
  EXPECT_TRUE(same_point(res.datum.point, d.point));
}

TEST(Reparam, FiberMapsUseConstantTerms) {
  const auto d = worked_datum();
  const auto res = reparam_transform(d, {P(7, {2, 5}, 3), P(7, {3}, 3)});
  expect_all(res.checks);
  // pi(0) = 2 gives 2^-1 = 4 on the twisted slots, omega(0) = 3 gives 3
  EXPECT_EQ(res.fiber_p1, const_matrix(7, {{1, 0, 0}, {0, 4, 0}, {0, 0, 4}}));
  EXPECT_EQ(res.fiber_p2, const_matrix(7, {{1, 0, 0}, {0, 3, 0}, {0, 0, 3}}));
}

TEST(Reparam, RejectsNonUnits) {
  EXPECT_THROW(reparam_transform(worked_datum(), {P(7, {0, 1}, 3), PowerSeries::one(7, 3)}), DomainError);
}

TEST(BranchSwap, WorkedExponents) {
  const auto d = worked_datum();
  const auto sw = swap_branches(d);
  EXPECT_EQ(sw.exps.a, (std::vector<int>{0, 2, 2}));
  EXPECT_EQ(sw.lambda, (std::vector<int>{0, 2, 1}));
  const auto res = branch_swap_transform(d);
  expect_all(res.checks);
  EXPECT_EQ(res.datum.partition.block_sizes, (std::vector<int>{1, 2}));
  EXPECT_EQ(res.datum.action.zeta, Fp(4, 7));
}

TEST(BranchSwap, UntwistedIsPureRelabeling) {
  Sampler rng(8, 13);
  LocalChartGerm g;
  g.p = 13;
  g.e = 1;
  g.zeta = Fp(1, 13);
  g.alpha = {0, 0, 0};
  g.F = {rng.invertible_laurent(3, 6), rng.invertible_laurent(3, 6)};
  const auto d = forward(g);
  const auto sw = swap_branches(d);
  EXPECT_EQ(sw.lambda, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(sw.h.h1, d.H.h2);
  EXPECT_EQ(sw.h.h2, d.H.h1);
  expect_all(branch_swap_transform(d).checks);
}

TEST(BranchSwap, EmptyFirstBlockReflectsAllBlocks) {
  Sampler rng(21, 13);
  LocalChartGerm g = random_germ(rng, 3, 4, 12, false);
  // force exponents (1, 2, 3): three singleton blocks after an empty D_1
  const ExponentVector exps{4, {1, 2, 3}, {1, 2, 3}};
  const GlueMatrices h{rng.invertible_laurent(3, hp(4)), rng.invertible_laurent(3, hp(4))};
  g.alpha = exps.alpha;
  g.F = assemble_F(h, exps);
  const auto d = forward(g);
  ASSERT_EQ(d.partition.block_sizes, (std::vector<int>{0, 1, 1, 1}));
  const auto res = branch_swap_transform(d);
  expect_all(res.checks);
  EXPECT_EQ(res.datum.exps.a, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(swap_branches(d).lambda, (std::vector<int>{2, 1, 0}));
}

TEST(BranchSwap, DoubleSwapReturns) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Sampler rng(seed, 13);
    const auto d = random_datum(rng, 4, seed % 2 ? 3 : 6);
    const auto once = branch_swap_transform(d);
    expect_all(once.checks);
    const auto twice = branch_swap_transform(once.datum);
    expect_all(twice.checks);
    EXPECT_EQ(twice.datum.partition, d.partition);
    EXPECT_TRUE(same_point(twice.datum.point, d.point));
    EXPECT_EQ(twice.datum.H.h1, d.H.h1);
  }
}

TEST(XiChange, IdentityChangesNothing) {
  const auto d = worked_datum();
  const auto id = LaurentMatrix::identity(3, LaurentSeries::exact_zero(7));
  const auto res = xi_triv_transform(d, {id, id});
  expect_all(res.checks);
  EXPECT_EQ(res.datum.H.h1, d.H.h1);
}

TEST(XiChange, DiagonalChangeScalesH) {
  const auto d = worked_datum();
  auto m1 = LaurentMatrix::identity(3, LaurentSeries::exact_zero(7));
  m1(0, 0) = P(7, {1, 1}, 3).to_laurent();
  const auto res = xi_triv_transform(d, {m1, LaurentMatrix::identity(3, LaurentSeries::exact_zero(7))});
  expect_all(res.checks);
  EXPECT_EQ(res.datum.H.h1(0, 0), P(7, {1, 1}, 3).to_laurent());
  EXPECT_EQ(res.datum.H.h1(1, 1), LaurentSeries::one(7, 3));
  EXPECT_TRUE(same_point(res.datum.point, d.point));
}

TEST(XiChange, RejectsSingular) {
  const auto zero = LaurentMatrix(3, 3, LaurentSeries::exact_zero(7));
  EXPECT_THROW(xi_triv_transform(worked_datum(), {zero, zero}), DomainError);
}

TEST(EtaChange, IdentityGivesIdentityA) {
  const auto d = worked_datum();
  EtaTrivChange chg{{identity_const(1, 7), identity_const(2, 7)},
                    PowerMatrix(3, 3, PowerSeries(7, 4)),
                    PowerMatrix(3, 3, PowerSeries(7, 4))};
  EXPECT_EQ(assemble_A(chg, d.exps, d.partition, 6), NodalMatrix::identity(3, 7, 6));
  const auto res = eta_triv_transform(d, chg);
  expect_all(res.checks);
  EXPECT_EQ(res.datum.H.h1, d.H.h1);
}

TEST(EtaChange, ConstantTermPatternFollowsExponents) {
  const auto d = worked_datum();
  EtaTrivChange chg{{identity_const(1, 7), identity_const(2, 7)},
                    PowerMatrix(3, 3, PowerSeries(7, 4)),
                    PowerMatrix(3, 3, PowerSeries(7, 4))};
  // a_2 > a_1: B1 may have a constant term at (1, 2), B2 at (2, 1)
  chg.b1(0, 1) = P(7, {3, 1}, 4);
  chg.b2(1, 0) = P(7, {5}, 4);
  EXPECT_NO_THROW(validate_change(chg, d.exps, d.partition));
  const NodalMatrix a = assemble_A(chg, d.exps, d.partition, 8);
  EXPECT_TRUE(satisfies_change_condition(a, d.exps, d.action));
  expect_all(eta_triv_transform(d, chg).checks);
  EtaTrivChange bad = chg;
  bad.b1(1, 0) = P(7, {1}, 4);
  EXPECT_THROW(validate_change(bad, d.exps, d.partition), DomainError);
  bad = chg;
  bad.b2(1, 2) = P(7, {1}, 4);  // equal exponents
  EXPECT_THROW(validate_change(bad, d.exps, d.partition), DomainError);
}

TEST(EtaChange, BlockUnipotentConstantPart) {
  const auto d = worked_datum();
  EtaTrivChange chg{{const_matrix(7, {{2}}), const_matrix(7, {{1, 1}, {0, 1}})},
                    PowerMatrix(3, 3, PowerSeries(7, 4)),
                    PowerMatrix(3, 3, PowerSeries(7, 4))};
  const auto res = eta_triv_transform(d, chg);
  expect_all(res.checks);
  const ConstMatrix g = assemble_A0(chg, d.partition, 7);
  EXPECT_TRUE(same_point(transport(d.point, g, g), d.point));
}

TEST(EtaChange, ConditionFailsForWrongPattern) {
  // a constant (2,1) entry in A breaks the twisted equivariance
  const auto d = worked_datum();
  NodalMatrix a = NodalMatrix::identity(3, 7, 6);
  a.u(1, 0) = PowerSeries::constant(Fp(1, 7), 6);
  a.v(1, 0) = PowerSeries::constant(Fp(1, 7), 6);
  EXPECT_FALSE(satisfies_change_condition(a, d.exps, d.action));
}

class TransformProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(TransformProperties, ReparamKeepsPoint) {
  Sampler rng(GetParam(), 13);
  const int e = GetParam() % 2 ? 3 : 4;
  const auto d = random_datum(rng, 4, e);
  const auto res = reparam_transform(d, {rng.unit_series(hp(e)), rng.unit_series(hp(e))});
  expect_all(res.checks);
  EXPECT_TRUE(same_point(res.datum.point, d.point));
}

TEST_P(TransformProperties, BranchSwapChecks) {
  Sampler rng(GetParam(), 13);
  const auto d = random_datum(rng, 4, GetParam() % 2 ? 6 : 2);
  expect_all(branch_swap_transform(d).checks);
}

TEST_P(TransformProperties, XiChangeKeepsPoint) {
  Sampler rng(GetParam(), 13);
  const auto d = random_datum(rng, 4, 3);
  const int r = d.rank();
  const auto res = xi_triv_transform(d, {rng.invertible_laurent(r, hp(3)), rng.invertible_laurent(r, hp(3))});
  expect_all(res.checks);
}

TEST_P(TransformProperties, EtaChangeKeepsPoint) {
  Sampler rng(GetParam(), 13);
  const int e = GetParam() % 3 == 0 ? 6 : 4;
  const auto d = random_datum(rng, 4, e);
  const auto chg = sample_eta_change(d.exps, d.partition, rng, hp(e));
  EXPECT_TRUE(satisfies_change_condition(assemble_A(chg, d.exps, d.partition, 12), d.exps, d.action));
  expect_all(eta_triv_transform(d, chg).checks);
}

TEST_P(TransformProperties, CompositeSequences) {
  const jobs::TrialSetup setup{4, {2, 3, 4, 6}, {}};
  Sampler pick(GetParam() * 7919, 13);
  jobs::TrialSetup s = setup;
  const int len = pick.uniform_int(2, 6);
  for (int k = 0; k < len; ++k) s.transforms.push_back(jobs::transform_names()[pick.uniform_int(0, 3)]);
  JobContext ctx;
  ctx.p = 13;
  ctx.precision = 12;
  bool ok = true;
  const auto report = jobs::run_invariance_trial(GetParam(), s, ctx, ok);
  EXPECT_TRUE(ok) << report.dump();
}

INSTANTIATE_TEST_SUITE_P(Seeds, TransformProperties, ::testing::Range<std::uint64_t>(1, 41));
