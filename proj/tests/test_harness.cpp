#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "opmean/harness.hpp"

namespace {

using namespace opmean;

SpdMatrix scalar1(double v) { return SpdMatrix{{v}}; }

// ||AB - BA||_max
double commutator_norm(const SymMatrix& a, const SymMatrix& b) {
  return max_abs_diff(a.matrix() * b.matrix(), b.matrix() * a.matrix());
}

TEST(Generators, GenSpdIsDeterministic) {
  const GenSpec s{2, 1, 123, 100};
  const auto a = gen_spd(s);
  const auto b = gen_spd(s);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, gen_spd(s.with_seed(124)));
}

TEST(Generators, UnitConditionGivesIdentityMultiple) {
  const auto a = gen_spd(GenSpec{4, 1, 5, 1.0});
  EXPECT_LE(max_abs_diff(a, SymMatrix::identity(4)), 1e-14);
}

TEST(Generators, OutputIsSpdWithinConditionBound) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = gen_spd(GenSpec{6, 1, seed, 1e3});
    EXPECT_TRUE(is_spd(a));
    const auto e = sym_eigen(a).values;
    EXPECT_LE(e.back() / e.front(), 1e3 * (1 + 1e-10));
  }
}

TEST(Generators, CommutingTuplesCommute) {
  const auto t = gen_tuple(GenSpec{5, 3, 9, 100, Structure::commuting});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) EXPECT_LE(commutator_norm(t[i], t[j]), 1e-12);
}

TEST(Generators, GenericSingletonIsGenSpdDraw) {
  const GenSpec s{3, 1, 77, 100};
  const auto t = gen_tuple(s);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0], gen_spd(s));
}

TEST(Generators, BlockTuplesAreBlockDiagonal) {
  const auto t = gen_tuple(GenSpec{4, 3, 1, 100, Structure::block});
  for (const auto& a : t)
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 2; j < 4; ++j) EXPECT_EQ(a(i, j), 0.0);
  EXPECT_THROW(gen_tuple(GenSpec{1, 2, 1, 100, Structure::block}), input_error);
}

TEST(Generators, SpecValidation) {
  EXPECT_THROW(gen_spd(GenSpec{0, 1, 1, 10}), input_error);
  EXPECT_THROW(gen_spd(GenSpec{65, 1, 1, 10}), input_error);
  EXPECT_THROW(gen_spd(GenSpec{2, 1, 1, 0.5}), input_error);
  EXPECT_THROW(gen_spd(GenSpec{2, 1, 1, 1e7}), input_error);
}

TEST(ScalarMean, Kinds) {
  const std::vector<double> xs{1.0, 4.0};
  EXPECT_NEAR(scalar_mean(MeanKind::inductive, xs), 2.0, 1e-15);
  EXPECT_NEAR(scalar_mean(MeanKind::arithmetic, xs), 2.5, 1e-15);
  EXPECT_NEAR(scalar_mean(MeanKind::harmonic, xs), 1.6, 1e-15);
}

TEST(Monotone, ArithmeticNeverFails) {
  const auto r = check_monotone(MeanKind::arithmetic, GenSpec{4, 3, 1, 100}, 50, 1e-8);
  EXPECT_EQ(r.failures, 0);
}

TEST(Monotone, InductiveSmallDims) {
  for (std::size_t dim = 2; dim <= 4; ++dim) {
    const auto r = check_monotone(MeanKind::inductive, GenSpec{dim, 3, 100 + dim, 100}, 100, 1e-8);
    EXPECT_EQ(r.failures, 0) << format_report(r);
  }
}

TEST(Monotone, ScalarInstance) {
  const auto lo = inductive_mean(SpdTuple{scalar1(1), scalar1(4)});
  const auto hi = inductive_mean(SpdTuple{scalar1(2), scalar1(8)});
  EXPECT_NEAR(lo(0, 0), 2.0, 1e-15);
  EXPECT_NEAR(hi(0, 0), 4.0, 1e-15);
  EXPECT_TRUE(loewner_leq(lo, hi, 0.0));
}

TEST(Concavity, ArithmeticIsAffine) {
  const auto r = check_concavity(MeanKind::arithmetic, GenSpec{3, 3, 2, 100}, 50, 1e-12);
  EXPECT_EQ(r.failures, 0);
}

TEST(Concavity, InductiveThreeVariables) {
  const auto r = check_concavity(MeanKind::inductive, GenSpec{3, 3, 3, 100}, 100, 1e-8);
  EXPECT_EQ(r.failures, 0) << format_report(r);
}

TEST(Concavity, ScalarGeometricMean) {
  // (s t)^{1/2} is concave: at l in (0,1) the mixed mean dominates the mixed means.
  for (double l : {0.1, 0.3, 0.5, 0.9}) {
    const double a1 = 1, b1 = 9, a2 = 4, b2 = 1;
    const double mixed_of_means = l * std::sqrt(a1 * b1) + (1 - l) * std::sqrt(a2 * b2);
    const double mean_of_mixed = std::sqrt((l * a1 + (1 - l) * a2) * (l * b1 + (1 - l) * b2));
    EXPECT_LE(mixed_of_means, mean_of_mixed);
    const double computed =
        inductive_mean(SpdTuple{scalar1(l * a1 + (1 - l) * a2), scalar1(l * b1 + (1 - l) * b2)})(0, 0);
    EXPECT_NEAR(computed, mean_of_mixed, 1e-14);
  }
}

TEST(Congruence, IdentityFactorIsExact) {
  const auto t = gen_tuple(GenSpec{3, 3, 4, 100});
  EXPECT_EQ(inductive_mean(detail::congruent_tuple(Matrix::identity(3), t)), inductive_mean(t));
}

TEST(Congruence, OrthogonalFactorIsUnitaryInvariance) {
  CounterRng rng(5, Purpose::factor);
  const Matrix u = detail::random_orthogonal(rng, 4);
  const auto t = gen_tuple(GenSpec{4, 3, 5, 100});
  for (MeanKind kind : kAllKinds)
    EXPECT_LE(relative_max_diff(mean(kind, detail::congruent_tuple(u, t)), congruence(u, mean(kind, t))), 1e-10)
        << to_string(kind);
}

TEST(Congruence, DiagonalFactorOnCommutingDiagonals) {
  // C = diag(2, 1) scales entry (0,0) by 4: G(4a, 4b) = 4 G(a, b) entrywise.
  const SpdTuple t{SpdMatrix{{1.0, 0.0}, {0.0, 9.0}}, SpdMatrix{{4.0, 0.0}, {0.0, 1.0}}};
  const auto g = inductive_mean(detail::congruent_tuple(Matrix{{2.0, 0.0}, {0.0, 1.0}}, t));
  EXPECT_NEAR(g(0, 0), 4.0 * 2.0, 1e-14);
  EXPECT_NEAR(g(1, 1), 3.0, 1e-14);
}

TEST(Congruence, RandomFactorsAllKinds) {
  for (MeanKind kind : kAllKinds) {
    const auto r = check_congruence(kind, GenSpec{3, 3, 6, 100}, 50, 1e-8);
    EXPECT_EQ(r.failures, 0) << format_report(r);
  }
}

TEST(SelfDual, Examples) {
  const auto a = gen_spd(GenSpec{3, 1, 8, 100});
  EXPECT_LE(relative_max_diff(inductive_mean(SpdTuple{inverse(a)}), inverse(a)), 0.0);
  EXPECT_NEAR(inductive_mean(SpdTuple{scalar1(0.5), scalar1(0.125)})(0, 0), 0.25, 1e-15);
  for (MeanKind kind : kAllKinds) {
    const auto r = check_self_dual(kind, GenSpec{3, 3, 9, 100}, 30, 1e-8);
    EXPECT_EQ(r.failures, 0) << format_report(r);
  }
}

TEST(Determinant, Examples) {
  EXPECT_NEAR(determinant(inductive_mean(SpdTuple{scalar1(2), scalar1(8), scalar1(4)})), 4.0, 1e-14);
  const auto i = SpdMatrix::identity(3);
  EXPECT_NEAR(determinant(variant_mean(SpdTuple{i, i, i})), 1.0, 1e-15);
  for (MeanKind kind : kGeometricKinds) {
    const auto r = check_determinant(kind, GenSpec{4, 4, 10, 100}, 30, 1e-8);
    EXPECT_EQ(r.failures, 0) << format_report(r);
  }
}

TEST(Hga, Examples) {
  const SpdTuple s{scalar1(1), scalar1(4)};
  EXPECT_TRUE(loewner_leq(harmonic_mean(s), inductive_mean(s), 0.0));
  EXPECT_TRUE(loewner_leq(inductive_mean(s), arithmetic_mean(s), 0.0));
  const auto a = gen_spd(GenSpec{3, 1, 11, 100});
  const SpdTuple same{a, a, a};
  for (MeanKind kind : kAllKinds) EXPECT_LE(relative_max_diff(mean(kind, same), a), 1e-12) << to_string(kind);
  for (MeanKind kind : kGeometricKinds) {
    const auto r = check_hga(kind, GenSpec{4, 5, 12, 100}, 30, 1e-8);
    EXPECT_EQ(r.failures, 0) << format_report(r);
  }
}

TEST(Updating, Examples) {
  const auto a = gen_spd(GenSpec{3, 1, 13, 100});
  EXPECT_LE(relative_max_diff(inductive_mean(SpdTuple{a, SpdMatrix::identity(3)}), power(a, 0.5)), 1e-13);
  // G_3(2, 8, 1) = G_2(2, 8)^{2/3} = 4^{2/3}.
  EXPECT_NEAR(inductive_mean(SpdTuple{scalar1(2), scalar1(8), scalar1(1)})(0, 0), std::pow(4.0, 2.0 / 3.0), 1e-14);
  for (MeanKind kind : {MeanKind::inductive, MeanKind::variant}) {
    const auto r = check_updating(kind, GenSpec{3, 2, 14, 100}, 50, 1e-8);
    EXPECT_EQ(r.failures, 0) << format_report(r);
  }
  EXPECT_THROW(check_updating(MeanKind::karcher, GenSpec{}, 1, 1e-8), input_error);
}

TEST(BlockRegularity, Examples) {
  // 1 (+) 1 blocks: entrywise scalar means.
  const SpdTuple t{SpdMatrix{{1.0, 0.0}, {0.0, 2.0}}, SpdMatrix{{4.0, 0.0}, {0.0, 8.0}}};
  const auto g = inductive_mean(t);
  EXPECT_NEAR(g(0, 0), 2.0, 1e-14);
  EXPECT_NEAR(g(1, 1), 4.0, 1e-14);

  const auto x = gen_tuple(GenSpec{2, 3, 15, 100});
  const SpdTuple doubled = x.map([](const SpdMatrix& a) { return SpdMatrix(direct_sum(a, a)); });
  const auto m = variant_mean(doubled);
  EXPECT_LE(max_abs_diff(principal_block(m, 0, 2), principal_block(m, 2, 2)), 1e-13);

  for (MeanKind kind : kAllKinds) {
    const auto r = check_block_regularity(kind, GenSpec{4, 3, 16, 100}, 30, 1e-8);
    EXPECT_EQ(r.failures, 0) << format_report(r);
  }
}

TEST(BlockRegularity, ArithmeticIsExact) {
  const auto r = check_block_regularity(MeanKind::arithmetic, GenSpec{5, 4, 17, 100}, 50, 0.0);
  EXPECT_EQ(r.failures, 0);
  EXPECT_LE(r.worst_violation, 1e-14);
}

TEST(Jensen, IdentityAndScalarContractions) {
  const auto f = inductive_auxiliary(2);
  const auto t = gen_tuple(GenSpec{3, 2, 18, 100});
  EXPECT_LE(relative_max_diff(f(detail::congruent_tuple(Matrix::identity(3), t)), f(t)), 1e-14);

  // C = I/2 on scalars: F(a/4, b/4) = (ab/16)^{1/3} >= (ab)^{1/3} / 4.
  const auto g = inductive_auxiliary(2);
  const double lhs = g(SpdTuple{scalar1(0.25), scalar1(0.5)})(0, 0);
  const double rhs = 0.25 * g(SpdTuple{scalar1(1.0), scalar1(2.0)})(0, 0);
  EXPECT_NEAR(lhs, std::cbrt(0.125), 1e-14);
  EXPECT_GE(lhs, rhs);
}

TEST(Jensen, RandomContractions) {
  for (MeanKind kind : {MeanKind::inductive, MeanKind::variant}) {
    const auto r = check_jensen_contraction(kind, GenSpec{3, 2, 19, 100}, 100, 1e-8);
    EXPECT_EQ(r.failures, 0) << format_report(r);
  }
  EXPECT_THROW(check_jensen_contraction(MeanKind::karcher, GenSpec{}, 1, 1e-8), input_error);
}

TEST(Reports, FailuresCarryReproducibleWitness) {
  // A negative tolerance makes every trial fail.
  const GenSpec spec{3, 3, 20, 100};
  const auto r = check_congruence(MeanKind::inductive, spec, 10, -1.0);
  EXPECT_EQ(r.failures, 10);
  ASSERT_TRUE(r.witness_seed.has_value());
  EXPECT_GT(r.worst_violation, 0.0);
  const auto replay = check_congruence(MeanKind::inductive, spec.with_seed(*r.witness_seed), 1, -1.0);
  EXPECT_EQ(replay.worst_violation, r.worst_violation);

  const auto ok = check_congruence(MeanKind::inductive, spec, 10, 1e-8);
  EXPECT_FALSE(ok.witness_seed.has_value());
  EXPECT_LE(ok.worst_violation, 0.0);
}

TEST(Reports, Deterministic) {
  const GenSpec spec{4, 3, 21, 100};
  const auto a = check_concavity(MeanKind::variant, spec, 10, 1e-8);
  const auto b = check_concavity(MeanKind::variant, spec, 10, 1e-8);
  EXPECT_EQ(a.worst_violation, b.worst_violation);
  EXPECT_EQ(format_report(a), format_report(b));
}

TEST(Reports, LineFormat) {
  CheckReport r{"hga", "karcher", 5, 1, 2.5e-3, 99};
  EXPECT_EQ(format_report(r),
            "check=hga kind=karcher trials=5 failures=1 worst_violation=2.500000e-03 witness_seed=99");
}

TEST(Suite, EmptyUnknownAndAll) {
  const GenSpec spec{3, 3, 7, 100};
  EXPECT_TRUE(run_suite({}, spec, 5, 1e-8).empty());
  const std::vector<std::string> bad{"nosuch"};
  EXPECT_THROW(run_suite(bad, spec, 5, 1e-8), input_error);
  EXPECT_THROW(run_suite(std::vector<std::string>{"all"}, spec, 0, 1e-8), input_error);

  const std::vector<std::string> all{"all"};
  const auto reports = run_suite(all, spec, 10, 1e-8);
  EXPECT_GT(reports.size(), check_names().size());
  for (const auto& r : reports) EXPECT_TRUE(r.passed()) << format_report(r);
  EXPECT_TRUE(all_passed(reports));
}

TEST(Suite, KindsFilter) {
  const std::vector<std::string> names{"hga", "updating"};
  const std::vector<MeanKind> kinds{MeanKind::inductive, MeanKind::arithmetic};
  const auto reports = run_suite(names, GenSpec{2, 2, 3, 10}, 3, 1e-8, kinds);
  ASSERT_EQ(reports.size(), 2u);  // hga and updating skip arithmetic
  EXPECT_EQ(reports[0].check_name, "hga");
  EXPECT_EQ(reports[1].check_name, "updating");
}

}  // namespace
