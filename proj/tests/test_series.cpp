#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "lambda_lab/series.hpp"

using namespace lambda_lab;

namespace {

LaurentSeries sample_series() {
    return LaurentSeries(-2, {cplx(0.1, 0.2), 0.0, cplx(1.0, -0.5), 2.0, cplx(0.0, 0.3)}, 0.5, 1.0);
}

}  // namespace

TEST(Series, EvaluatesPositiveAndPrincipalParts) {
    const auto s = sample_series();
    const cplx z = std::polar(0.7, 0.9);
    const cplx expect = cplx(0.1, 0.2) / (z * z) + cplx(1.0, -0.5) + 2.0 * z + cplx(0.0, 0.3) * z * z;
    EXPECT_LT(std::abs(s(z) - expect), 1e-14);
}

TEST(Series, CircleRoundTripRecoversCoefficients) {
    const auto s = sample_series();
    for (double r : {0.5, 0.75, 1.0}) {
        const auto c = eval_circle(s, r, 16);
        const auto back = coeffs_from_circle(c, -2, 2);
        for (int k = -2; k <= 2; ++k) EXPECT_LT(std::abs(back.coeff(k) - s.coeff(k)), 1e-13) << "k=" << k;
    }
}

TEST(Series, RejectsAliasingAndNonPowerOfTwo) {
    const auto c = eval_circle(sample_series(), 1.0, 16);
    EXPECT_THROW(coeffs_from_circle(c, -8, 8), NumericalError);
    EXPECT_THROW(eval_circle(sample_series(), 1.0, 8), ValidationError);

    CircleSamples odd{1.0, std::vector<cplx>(12, 1.0)};
    EXPECT_THROW(coeffs_from_circle(odd, -1, 1), ValidationError);
}

TEST(Series, ValidityIsClosed) {
    const auto s = sample_series();
    EXPECT_TRUE(s.in_validity(0.5));
    EXPECT_TRUE(s.in_validity(1.0));
    EXPECT_FALSE(s.in_validity(0.49));
    EXPECT_THROW(LaurentSeries(-1, {1.0, 1.0}, 0.0, 1.0), ValidationError);
}

TEST(Series, WindingOfMonomials) {
    for (int k = -3; k <= 3; ++k) {
        const auto m = LaurentSeries::monomial(k, cplx(0.3, 1.0), 0.5, 2.0);
        EXPECT_EQ(winding_number(m, 1.0), k);
    }
    // zeros of z^2 - 1/4 lie inside |z| = 1, outside |z| = 0.4
    const LaurentSeries p(0, {-0.25, 0.0, 1.0}, 0.0, 2.0);
    EXPECT_EQ(winding_number(p, 1.0), 2);
    EXPECT_EQ(winding_number(p, 0.4), 0);
}

TEST(Series, WindingRejectsZeroOnCircle) {
    const LaurentSeries p(0, {-1.0, 1.0}, 0.0, 2.0);
    EXPECT_THROW(winding_number(p, 1.0), NumericalError);
}

TEST(Series, Derivative) {
    const auto d = derivative(sample_series());
    EXPECT_LT(std::abs(d.coeff(-3) - (-2.0) * cplx(0.1, 0.2)), 1e-15);
    EXPECT_LT(std::abs(d.coeff(0) - 2.0), 1e-15);
    EXPECT_LT(std::abs(d.coeff(1) - cplx(0.0, 0.6)), 1e-15);
}

TEST(Series, SqrtReciprocalDerivativeIdentity) {
    const auto g = sqrt_reciprocal_derivative(LaurentSeries::monomial(1, 1.0, 0.0, 1.0));
    EXPECT_LT(std::abs(g.coeff(0) - 1.0), 1e-14);
    EXPECT_LT(g.norm2() - 1.0, 1e-14);
}

TEST(Series, SqrtReciprocalDerivativeOfMobius) {
    // f = -1/(z+2) = sum_k (-1)^{k+1} z^k / 2^{k+1}: f' = (z+2)^{-2}, so g = z + 2
    std::vector<cplx> c;
    for (int k = 0; k < 60; ++k) c.push_back(std::pow(-1.0, k + 1) / std::pow(2.0, k + 1));
    const auto g = sqrt_reciprocal_derivative(LaurentSeries(0, c, 0.0, 1.0));
    EXPECT_LT(std::abs(g.coeff(0) - 2.0), 1e-12);
    EXPECT_LT(std::abs(g.coeff(1) - 1.0), 1e-12);
    EXPECT_LE(g.kmax(), 1);
}

TEST(Series, SqrtReciprocalDerivativeEvenWinding) {
    // f = z^3 / 3 on an annulus: f' = z^2 has winding 2 and g = 1/z
    const auto g = sqrt_reciprocal_derivative(LaurentSeries::monomial(3, 1.0 / 3.0, 0.5, 1.0));
    EXPECT_EQ(g.kmin(), -1);
    EXPECT_EQ(g.kmax(), -1);
    EXPECT_LT(std::abs(g.coeff(-1) - 1.0), 1e-13);
}

TEST(Series, SqrtReciprocalDerivativeOddWinding) {
    EXPECT_THROW(sqrt_reciprocal_derivative(LaurentSeries::monomial(2, 0.5, 0.5, 1.0)), NumericalError);
}

TEST(Series, SqrtReciprocalDerivativeWithPrincipalPart) {
    // z + c/z^2 with a zero of f' at radius (2|c|)^{1/3} well inside the annulus
    const cplx c(0.02, 0.01);
    const LaurentSeries f(-2, {c, 0.0, 0.0, 1.0}, 0.45, 1.0);
    const auto g = sqrt_reciprocal_derivative(f);
    const auto fp = derivative(f);
    for (double r : {0.45, 0.7, 1.0}) {
        for (int j = 0; j < 17; ++j) {
            const cplx z = std::polar(r, 0.37 * j);
            EXPECT_LT(std::abs(g(z) * g(z) * fp(z) - 1.0), 1e-10);
        }
    }
}

TEST(Series, JsonRoundTrip) {
    const auto s = sample_series();
    const auto back = laurent_from_json(to_json(s));
    EXPECT_EQ(back.kmin(), s.kmin());
    EXPECT_EQ(back.kmax(), s.kmax());
    for (int k = s.kmin(); k <= s.kmax(); ++k) EXPECT_EQ(back.coeff(k), s.coeff(k));
    EXPECT_THROW(laurent_from_json(nlohmann::json{{"kmin", 0}}), ValidationError);
}
