#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "lambda_lab/models.hpp"
#include "lambda_lab/reference_values.hpp"

using namespace lambda_lab;
namespace ref = lambda_lab::reference;

TEST(Models, ConstantsAtHalf) {
    const auto k = constants(0.5);
    EXPECT_NEAR(k.c3, ref::c3_half, 1e-14);
    EXPECT_NEAR(k.lambda_bound / ref::bound_half, 1.0, 1e-14);
    EXPECT_EQ(k.kappa, 1.0);
    // lambda_bound = -4 pi^2 c3 for the round annulus (L = 2 pi, c3 constant)
    EXPECT_NEAR(k.lambda_bound, -4.0 * std::numbers::pi * std::numbers::pi * k.c3, 1e-11);
}

TEST(Models, BoundApproachesGapConstant) {
    EXPECT_NEAR(constants(0.0).lambda_bound, ref::bound_limit, 1e-14);
    double prev = constants(0.9).lambda_bound;
    for (double b : {0.5, 0.1, 1e-3, 1e-6, 1e-12}) {
        const double v = constants(b).lambda_bound;
        EXPECT_LT(v, prev);
        EXPECT_GT(v, ref::bound_limit);
        prev = v;
    }
}

TEST(Models, RejectsBetaOutOfRange) {
    EXPECT_THROW(constants(1.0), ValidationError);
    EXPECT_THROW(constants(-0.5), ValidationError);
    EXPECT_THROW(v_annulus(0.5, 0.4), ValidationError);
}

TEST(Models, AnnulusDefiningFunction) {
    EXPECT_NEAR(v_annulus(0.5, 0.75), ref::v_annulus_half_075, 1e-15);
    EXPECT_NEAR(v_annulus(0.5, 1.0), 0.0, 1e-16);
    EXPECT_NEAR(v_annulus(0.5, 0.5), 0.0, 1e-16);
    // boundary values: d v/d r = -1 and Delta v = v'' + v'/r = -2 at r = 1
    const auto [d1, d2] = v_annulus_derivatives(0.5, 1.0);
    EXPECT_NEAR(d1, -1.0, 1e-14);
    EXPECT_NEAR(d2 + d1, -2.0, 1e-14);
}

TEST(Models, AnnulusSolvesTheDefiningEquation) {
    // v Delta v - |grad v|^2 = -1
    for (double r : {0.55, 0.7, 0.85, 0.99}) {
        const double v = v_annulus(0.5, r);
        const auto [d1, d2] = v_annulus_derivatives(0.5, r);
        EXPECT_NEAR(v * (d2 + d1 / r) - d1 * d1, -1.0, 1e-12) << r;
    }
}

TEST(Models, AnnulusExpansionAlongTheNormal) {
    // v(1 - d) = d - d^2/2 + c3 d^3 + ...: compare against the reference Taylor data
    for (double d : {1e-3, 5e-3, 1e-2}) {
        double series = 0.0;
        for (int k = 5; k >= 0; --k) series = series * d + ref::v_annulus_half_taylor[k];
        EXPECT_NEAR(v_annulus(0.5, 1.0 - d), series, 2e-13 + 10.0 * std::pow(d, 6));
    }
    EXPECT_NEAR(ref::v_annulus_half_taylor[3], ref::c3_half, 1e-15);
}

TEST(Models, DiskDefiningFunction) {
    EXPECT_NEAR(v_disk(0.0), 0.5, 1e-16);
    EXPECT_NEAR(v_disk(1.0), 0.0, 1e-16);
    for (double r : {0.1, 0.5, 0.9}) {
        // v = (1 - r^2)/2: v Delta v - |grad v|^2 = -2v - r^2 = -1
        EXPECT_NEAR(v_disk(r) * -2.0 - r * r, -1.0, 1e-15);
    }
}

TEST(Models, PuncturedDiskAndShell) {
    EXPECT_NEAR(u_punctured_disk(1.0, 0.0, cplx(1.0 / std::numbers::e, 0.0)), ref::u_punctured_1_inv_e, 1e-15);
    EXPECT_NEAR(u_punctured_disk(2.0, 0.0, cplx(0.0, 2.0 / std::numbers::e)), ref::u_punctured_2_2_inv_e, 1e-15);
    EXPECT_NEAR(u_shell(0.25, 0.0, cplx(0.5, 0.0)), ref::u_shell_quarter_half, 1e-14);
    EXPECT_THROW(u_punctured_disk(1.0, 0.0, 0.0), ValidationError);
    EXPECT_THROW(u_shell(0.25, 0.0, cplx(0.2, 0.0)), ValidationError);
}

TEST(Models, PuncturedDiskSolvesLiouville) {
    // radial Laplacian u'' + u'/rho against e^{2u} by central differences
    const double h = 1e-4;
    for (double rho : {0.05, 0.2, 0.6}) {
        auto u = [&](double s) { return u_punctured_disk(1.0, 0.0, cplx(s, 0.0)); };
        const double lap = (u(rho + h) - 2 * u(rho) + u(rho - h)) / (h * h) + (u(rho + h) - u(rho - h)) / (2 * h * rho);
        EXPECT_NEAR(lap / std::exp(2 * u(rho)), 1.0, 1e-5) << rho;
    }
}

TEST(Models, GrowthBarrier) {
    std::vector<std::pair<cplx, double>> ok, bad;
    for (double rho : {0.1, 0.3}) {
        const cplx x(rho, 0.0);
        ok.emplace_back(x, u_punctured_disk(1.0, 0.0, x) + 0.1);
        bad.emplace_back(x, -10.0);
    }
    EXPECT_TRUE(growth_barrier_check(ok, 0.0, 1.0));
    EXPECT_FALSE(growth_barrier_check(bad, 0.0, 1.0));
}
