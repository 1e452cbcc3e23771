#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "lambda_lab/liouville.hpp"
#include "lambda_lab/reference_values.hpp"

using namespace lambda_lab;

namespace {

const std::vector<double> coarse_schedule{0.08, 0.04};

}  // namespace

TEST(Liouville, AnnulusAgainstClosedForm) {
    const auto sol = solve_liouville(Annulus{0.5}, 1.0 / 128, coarse_schedule);
    ASSERT_EQ(sol.stages.size(), 3u);
    EXPECT_TRUE(sol.stages.back().final_stage);
    for (std::size_t m = 1; m < sol.stages.size(); ++m) {
        EXPECT_TRUE(sol.stages[m].monotone_ok);
        EXPECT_LE(sol.stages[m].max_increase, 1e-6);
    }
    for (double r : {0.6, 0.75, 0.9}) {
        for (double th : {0.3, 2.0, 4.5}) {
            const double exact = -std::log(v_annulus(0.5, r));
            EXPECT_NEAR(sol.u.sample(std::polar(r, th)), exact, 2e-3) << r << ' ' << th;
        }
    }
    const auto v = to_v(sol.u);
    EXPECT_EQ(v.kind(), FieldKind::v);
    EXPECT_NEAR(v.sample(cplx(0.75, 0.0)), reference::v_annulus_half_075, 2e-4);
    EXPECT_LT(residual_v(v), 0.05);
}

TEST(Liouville, DiskAgainstClosedForm) {
    const auto sol = solve_liouville(UnitDisk{}, 1.0 / 128, coarse_schedule);
    for (double r : {0.0, 0.4, 0.8}) EXPECT_NEAR(sol.u.sample(std::polar(r, 1.0)), -std::log(v_disk(r)), 2e-3) << r;
}

TEST(Liouville, ScheduleValidation) {
    EXPECT_THROW(solve_liouville(Annulus{0.5}, 1.0 / 64, {0.04, 0.08}), ValidationError);
    EXPECT_THROW(solve_liouville(Annulus{0.5}, 1.0 / 64, {0.04, -0.01}), ValidationError);
    EXPECT_THROW(solve_liouville(Annulus{1.2}, 1.0 / 64, coarse_schedule), ValidationError);
}

TEST(Liouville, PuncturedDiskBarriersAndInitIndependence) {
    const Punctured spec{BoundaryCurve::circle(0.0, 1.0), {cplx(0.0, 0.0)}};
    const auto a = solve_liouville(spec, 1.0 / 128, coarse_schedule);
    ASSERT_EQ(a.barriers.size(), 1u);
    EXPECT_TRUE(a.barriers[0].ok);
    EXPECT_GE(a.barriers[0].min_lower_slack, 0.0);
    EXPECT_GE(a.barriers[0].min_upper_slack, 0.0);
    for (double r : {0.3, 0.6}) EXPECT_NEAR(a.u.sample(cplx(r, 0.0)), u_punctured_disk(1.0, 0.0, cplx(r, 0.0)), 5e-3);

    LiouvilleOptions opt;
    opt.init = LiouvilleOptions::Init::barrier_max;
    const auto b = solve_liouville(spec, 1.0 / 128, coarse_schedule, opt);
    double diff = 0.0;
    for (std::size_t i = 0; i < a.u.values().size(); ++i) {
        const double x = a.u.values()[i], y = b.u.values()[i];
        if (!std::isnan(x) && !std::isnan(y)) diff = std::max(diff, std::abs(x - y));
    }
    EXPECT_LE(diff, 1e-6);
}

TEST(Modulus, RoundAnnulus) {
    const auto m = modulus(Annulus{0.5});
    EXPECT_NEAR(m.beta, 0.5, 1e-3);
    ASSERT_EQ(m.grid_levels.size(), 2u);
    EXPECT_NEAR(m.flux, 2.0 * std::numbers::pi / std::log(2.0), 0.01);
}

TEST(Modulus, RejectsSimplyConnected) { EXPECT_THROW(modulus(UnitDisk{}), ValidationError); }
