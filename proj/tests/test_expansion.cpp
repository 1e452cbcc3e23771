#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "lambda_lab/expansion.hpp"
#include "lambda_lab/reference_values.hpp"

using namespace lambda_lab;
namespace ref = lambda_lab::reference;

namespace {

/// The closed-form annulus v sampled on the nodes of a fine grid.
ScalarField analytic_annulus_v(double h) {
    auto grid = std::make_shared<const Grid>(rasterize(Annulus{0.5}, h, 0.0));
    return sample_function(grid, FieldKind::v, [](cplx z) { return v_annulus(0.5, std::abs(z)); });
}

}  // namespace

TEST(Expansion, FitRecoversAnnulusCoefficient) {
    const auto v = analytic_annulus_v(1.0 / 256);
    const auto fr = frames(BoundaryCurve::circle(0.0, 1.0), 32);
    const auto p = extract_c3_fit(v, fr, default_window(v));
    EXPECT_TRUE(p.kappa_ok);
    for (double c : p.c3) EXPECT_NEAR(c, ref::c3_half, 2e-3);  // d^6 truncation over the window
    const auto r = lambda_numeric(p, constants(0.5).lambda_bound);
    EXPECT_NEAR(r.lambda / ref::bound_half, 1.0, 1e-3);
    EXPECT_NEAR(r.boundary_length, 2.0 * std::numbers::pi, 1e-12);
}

TEST(Expansion, FluxRecoversAnnulusCoefficient) {
    const auto v = analytic_annulus_v(1.0 / 256);
    const auto fr = frames(BoundaryCurve::circle(0.0, 1.0), 32);
    const auto p = extract_c3_flux(v, fr, default_flux_depth(v));
    for (std::size_t k = 0; k < fr.size(); ++k) {
        EXPECT_NEAR(p.c3[k], ref::c3_half, 0.05 * std::abs(ref::c3_half));
        EXPECT_NEAR(p.intercept[k], -2.0, 0.05);
    }
}

TEST(Expansion, WindowAndFrameValidation) {
    const auto v = analytic_annulus_v(1.0 / 128);
    const auto fr = frames(BoundaryCurve::circle(0.0, 1.0), 16);
    const double h = v.grid().h;
    EXPECT_THROW(extract_c3_fit(v, fr, {2.0 * h, 0.08}), ValidationError);
    EXPECT_THROW(extract_c3_fit(v, fr, {6.0 * h, 0.6}), ValidationError);
    EXPECT_THROW(extract_c3_flux(v, fr, 3.0 * h), ValidationError);
    EXPECT_THROW(extract_c3_fit(v, frames(BoundaryCurve::circle(0.0, 0.5), 16), default_window(v)), ValidationError);
    const ScalarField plain(v.grid_ptr(), FieldKind::plain, v.values());
    EXPECT_THROW(extract_c3_fit(plain, fr, default_window(v)), ValidationError);
}

TEST(Expansion, LambdaFunctionalOnSyntheticProfile) {
    ExpansionProfile p;
    p.frames = frames(BoundaryCurve::circle(0.0, 1.0), 64);
    p.c3.assign(p.frames.size(), ref::c3_half);
    const auto r = lambda_numeric(p, ref::bound_half);
    EXPECT_NEAR(r.lambda / ref::bound_half, 1.0, 1e-13);
    EXPECT_NEAR(r.defect, 0.0, 1e-10);
    EXPECT_THROW(lambda_numeric(ExpansionProfile{}), ValidationError);
}

TEST(Expansion, DiscreteLaplacianOfQuadratic) {
    auto grid = std::make_shared<const Grid>(rasterize(UnitDisk{}, 1.0 / 64, 0.0));
    const auto f = sample_function(grid, FieldKind::plain, [](cplx z) { return std::norm(z); });
    const auto lap = discrete_laplacian(f);
    int n = 0;
    for (double x : lap.values())
        if (!std::isnan(x)) {
            EXPECT_NEAR(x, 4.0, 1e-9);
            ++n;
        }
    EXPECT_GT(n, 1000);
}
