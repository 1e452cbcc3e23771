#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "lambda_lab/mapcalc.hpp"
#include "lambda_lab/reference_values.hpp"

using namespace lambda_lab;
namespace ref = lambda_lab::reference;

namespace {

LaurentSeries identity() { return LaurentSeries::monomial(1, 1.0, 0.0, 1.0); }
LaurentSeries mobius_fixture() { return mobius_series(0.0, -1.0, 2.0, 0.5); }

}  // namespace

TEST(MapCalc, IdentityReproducesSharpValues) {
    const std::pair<double, double> cases[] = {
        {0.5, ref::bound_half}, {std::exp(-std::numbers::pi), ref::bound_exp_minus_pi}, {0.9, ref::bound_0_9}};
    for (const auto& [beta, value] : cases) {
        const auto r = lambda_via_map(build_map(identity(), beta));
        EXPECT_NEAR(r.lambda / value, 1.0, 1e-12);
        EXPECT_NEAR(r.boundary_length, 2.0 * std::numbers::pi, 1e-13);
        EXPECT_NEAR(r.defect, 0.0, 1e-9 * value);
        EXPECT_TRUE(*r.equality);
    }
}

TEST(MapCalc, MobiusFixture) {
    const auto m = build_map(mobius_fixture(), 0.5);
    EXPECT_NEAR(std::abs(m.g.coeff(0)), 2.0, 1e-12);
    EXPECT_NEAR(std::abs(m.g.coeff(1)), 1.0, 1e-12);
    const auto r = lambda_via_map(m);
    EXPECT_NEAR(r.boundary_length, 2.0 * std::numbers::pi / 3.0, 1e-12);
    EXPECT_NEAR(r.lambda, ref::mobius_fixture_lambda, 1e-9);
    EXPECT_GT(r.defect, 0.0);
    EXPECT_FALSE(*r.equality);
    EXPECT_GT(*r.holder_defect, 0.0);
    EXPECT_LT(*r.b_tail_norm, 1e-20);
}

TEST(MapCalc, LengthMatchesCurveLength) {
    const auto m = build_map(mobius_fixture(), 0.5);
    EXPECT_NEAR(boundary_length_via_map(m), BoundaryCurve::from_series(m.f, 1.0).length(), 1e-10);
}

TEST(MapCalc, RigidityClassification) {
    const auto mob = classify_rigidity(build_map(mobius_fixture(), 0.5));
    EXPECT_TRUE(mob.is_mobius);
    EXPECT_FALSE(mob.is_similarity);
    EXPECT_EQ(mob.form, "mobius");
    EXPECT_LT(std::abs(mob.C3 - 2.0), 1e-10);
    EXPECT_LT(std::abs(mob.C2 + 1.0), 1e-10);
    EXPECT_LT(std::abs(mob.C1), 1e-10);

    const auto aff = classify_rigidity(build_map(LaurentSeries(0, {cplx(1.0, 2.0), cplx(0.0, 3.0)}, 0.0, 1.0), 0.4));
    EXPECT_TRUE(aff.is_similarity);
    EXPECT_EQ(aff.form, "affine");
    EXPECT_LT(std::abs(aff.C2 - cplx(0.0, 3.0)), 1e-12);

    const auto gen = classify_rigidity(build_map(LaurentSeries(0, {0.0, 1.0, 0.2}, 0.0, 1.0), 0.4));
    EXPECT_FALSE(gen.is_mobius);
    EXPECT_EQ(gen.form, "none");
}

TEST(MapCalc, ProfileIsNonnegativeAndVanishesForMobius) {
    const std::vector<double> ts{-0.6, -0.3, -0.1};
    const auto pm = profile(build_map(mobius_fixture(), 0.5), ts);
    for (double b : pm.B) EXPECT_NEAR(b, 0.0, 1e-12);
    const auto pg = profile(build_map(LaurentSeries(0, {0.0, 1.0, 0.2, 0.05}, 0.0, 1.0), 0.5), ts);
    for (double b : pg.B) EXPECT_GT(b, 0.0);
    EXPECT_THROW(profile(build_map(identity(), 0.5), {-1.0}), ValidationError);
}

TEST(MapCalc, DiskMode) {
    const auto aff = lambda_via_map(build_map(LaurentSeries(0, {cplx(0.5, -1.0), cplx(2.0, 1.0)}, 0.0, 1.0), 0.0));
    EXPECT_NEAR(aff.lambda, 0.0, 1e-12);
    EXPECT_EQ(aff.lower_bound, 0.0);
    const auto quad = lambda_via_map(build_map(LaurentSeries(0, {0.0, 1.0, 0.3}, 0.0, 1.0), 0.0));
    EXPECT_GT(quad.lambda, 0.0);
}

TEST(MapCalc, OuterNormalization) {
    // beta/z sends the unit circle to the inner boundary
    const LaurentSeries inv(-1, {0.5}, 0.4, 1.0);
    EXPECT_THROW(build_map(inv, 0.5), ValidationError);
    const auto m = build_map(inv, 0.5, false);
    EXPECT_FALSE(m.outer_normalized);
    EXPECT_THROW(lambda_via_map(m), ValidationError);
    const auto fixed = build_map(renormalize_outer(inv, 0.5), 0.5);
    EXPECT_TRUE(fixed.outer_normalized);
    EXPECT_NEAR(lambda_via_map(fixed).lambda / ref::bound_half, 1.0, 1e-12);
}

TEST(MapCalc, OddWindingRejected) {
    EXPECT_THROW(build_map(LaurentSeries::monomial(2, 0.5, 0.4, 1.0), 0.5), NumericalError);
}

TEST(MapCalc, PullbackIsSimilarityCovariant) {
    const LaurentSeries f(0, {cplx(1.0, 1.0), cplx(0.0, 2.0)}, 0.0, 1.0);
    const auto m = build_map(f, 0.5);
    const auto pts = pullback_v(m, {cplx(0.75, 0.0), cplx(0.0, 0.6)});
    EXPECT_NEAR(pts[0].second, 2.0 * ref::v_annulus_half_075, 1e-14);
    EXPECT_LT(std::abs(pts[0].first - cplx(1.0, 2.5)), 1e-14);
    EXPECT_THROW(pullback_v(m, {cplx(0.3, 0.0)}), ValidationError);
}

TEST(MapCalc, SimilarityInvariance) {
    const LaurentSeries f(-1, {0.02, 0.0, 1.0, cplx(0.05, 0.02)}, 0.4, 1.0);
    const LaurentSeries g(-1, {cplx(0.0, 0.06), 2.0, cplx(0.0, 3.0), cplx(-0.06, 0.15)}, 0.4, 1.0);  // 3i f + 2
    const double a = lambda_via_map(build_map(f, 0.5)).lambda;
    const double b = lambda_via_map(build_map(g, 0.5)).lambda;
    EXPECT_NEAR(a / b, 1.0, 1e-12);
    EXPECT_GT(a, ref::bound_half);
}
