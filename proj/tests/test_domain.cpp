#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "lambda_lab/domain.hpp"
#include "lambda_lab/mapcalc.hpp"

using namespace lambda_lab;

namespace {

bool fails_with(const DomainSpec& s, const std::string& msg) {
    for (const auto& f : validate(s).failures())
        if (f.find(msg) != std::string::npos) return true;
    return false;
}

BoundaryCurve mobius_outer() { return BoundaryCurve::from_series(mobius_series(0.0, -1.0, 2.0, 0.5), 1.0); }

}  // namespace

TEST(Curve, CircleGeometry) {
    const auto c = BoundaryCurve::circle(cplx(1.0, -2.0), 0.5);
    EXPECT_EQ(c.orientation(), Orientation::positive);
    EXPECT_NEAR(c.signed_area(), std::numbers::pi * 0.25, 1e-14);
    EXPECT_NEAR(c.length(), std::numbers::pi, 1e-12);
    EXPECT_LT(std::abs(c.centroid() - cplx(1.0, -2.0)), 1e-14);
    for (const auto& f : frames(c, 16)) {
        EXPECT_NEAR(f.curvature, 2.0, 1e-12);
        EXPECT_NEAR(f.arc_weight, std::numbers::pi / 16, 1e-12);
        EXPECT_LT(std::abs(f.point + 0.5 * f.inward_normal - cplx(1.0, -2.0)), 1e-12);
    }
    EXPECT_EQ(c.reversed().orientation(), Orientation::negative);
}

TEST(Curve, DeclaredOrientationMustMatchArea) {
    EXPECT_THROW(BoundaryCurve(0.0, {1.0}, {cplx(0.0, 1.0)}, Orientation::negative), ValidationError);
}

TEST(Curve, ProjectionOnEllipse) {
    const auto e = BoundaryCurve::ellipse(0.0, 2.0, 1.0);
    const auto p = e.project(cplx(0.0, 0.2));
    EXPECT_NEAR(p.distance, 0.8, 1e-10);
    const auto q = e.project(cplx(3.0, 0.0));
    EXPECT_NEAR(q.distance, 1.0, 1e-10);
}

TEST(Curve, ProjectionFromNearCentreOfMobiusImage) {
    // The image of the unit circle is the circle |w + 2/3| = 1/3; points near its
    // centre have an almost flat distance function along the curve.
    const auto c = mobius_outer();
    const auto inner = BoundaryCurve::from_series(mobius_series(0.0, -1.0, 2.0, 0.5), 0.5);
    for (const auto& z : inner.dense_samples()) {
        const auto p = c.project(z);
        EXPECT_NEAR(p.distance, 1.0 / 3.0 - std::abs(z + 2.0 / 3.0), 1e-10);
    }
}

TEST(Curve, AreaCentroidAndScaleOfMobiusImage) {
    const auto c = mobius_outer();
    EXPECT_LT(std::abs(c.centroid() - cplx(-2.0 / 3.0, 0.0)), 1e-12);
    EXPECT_NEAR(c.scale(), 1.0 / 3.0, 1e-10);
}

TEST(Curve, SelfIntersectionDetected) {
    // limacon e^{it} + 1.5 e^{2it} has an inner loop
    const BoundaryCurve loop(0.0, {1.0, 1.5}, {cplx(0.0, 1.0), cplx(0.0, 1.5)});
    EXPECT_FALSE(check_curve(loop).simple);
    EXPECT_TRUE(check_curve(BoundaryCurve::ellipse(0.0, 2.0, 1.0)).simple);
}

TEST(Domain, SignedDistanceClosedForms) {
    EXPECT_NEAR(signed_distance(UnitDisk{}, cplx(0.3, 0.4)), 0.5, 1e-15);
    EXPECT_NEAR(signed_distance(Annulus{0.5}, cplx(0.6, 0.0)), 0.1, 1e-15);
    EXPECT_NEAR(signed_distance(Annulus{0.5}, cplx(0.0, 0.9)), 0.1, 1e-15);
    EXPECT_LT(signed_distance(Annulus{0.5}, cplx(0.2, 0.0)), 0.0);
}

TEST(Domain, CurveBoundedDistanceMatchesCircles) {
    const CurveBounded cb{BoundaryCurve::circle(0.0, 1.0), BoundaryCurve::circle(0.0, 0.5)};
    DomainGeometry g(cb);
    for (double r : {0.55, 0.7, 0.95}) EXPECT_NEAR(g.signed_distance(std::polar(r, 1.1)), std::min(1.0 - r, r - 0.5), 1e-10);
    EXPECT_TRUE(g.doubly_connected());
}

TEST(Domain, ValidationMessages) {
    EXPECT_TRUE(fails_with(Annulus{1.0}, "beta out of range"));
    EXPECT_TRUE(fails_with(Annulus{-0.1}, "beta out of range"));
    EXPECT_TRUE(validate(Annulus{0.5}).passed());
    EXPECT_TRUE(fails_with(Punctured{BoundaryCurve::circle(0.0, 1.0), {cplx(2.0, 0.0)}}, "puncture outside"));
    EXPECT_TRUE(fails_with(Punctured{BoundaryCurve::circle(0.0, 1.0), {cplx(0.1, 0.0), cplx(0.1, 0.0)}}, "coincide"));
    EXPECT_TRUE(fails_with(CurveBounded{BoundaryCurve::circle(0.0, 1.0), BoundaryCurve::circle(0.9, 0.5)},
                           "inner curve not strictly inside"));
    EXPECT_THROW(require_valid(Annulus{1.5}), ValidationError);
}

TEST(Domain, MappedAnnulusNeedsValidity) {
    const LaurentSeries narrow(0, {0.0, 1.0}, 0.6, 1.0);
    EXPECT_TRUE(fails_with(MappedAnnulus{narrow, 0.5}, "does not contain"));
    EXPECT_TRUE(validate(MappedAnnulus{mobius_series(0.0, -1.0, 2.0, 0.5), 0.5}).passed());
}

TEST(Domain, ScaleIsOuterRadius) {
    EXPECT_NEAR(domain_scale(UnitDisk{}), 1.0, 1e-15);
    EXPECT_NEAR(domain_scale(Annulus{0.3}), 1.0, 1e-15);
    EXPECT_NEAR(domain_scale(MappedAnnulus{mobius_series(0.0, -1.0, 2.0, 0.5), 0.5}), 1.0 / 3.0, 1e-10);
}

TEST(Domain, JsonRoundTrip) {
    const DomainSpec specs[] = {UnitDisk{}, Annulus{0.25}, MappedAnnulus{mobius_series(0.0, -1.0, 2.0, 0.5), 0.5},
                                Punctured{BoundaryCurve::circle(0.0, 1.0), {cplx(0.1, 0.2)}},
                                CurveBounded{BoundaryCurve::ellipse(0.0, 2.0, 1.0), BoundaryCurve::circle(0.0, 0.5)}};
    for (const auto& s : specs) {
        const auto j = to_json(s);
        EXPECT_EQ(to_json(domain_from_json(j)), j);
    }
    EXPECT_THROW(domain_from_json(nlohmann::json{{"variant", "torus"}}), ValidationError);
    EXPECT_THROW(domain_from_json(nlohmann::json{{"variant", "annulus"}}), ValidationError);
}
