#pragma once
// Closed-form reference values at 40 digits, generated by
// tests/oracles/gen_values.py (mpmath); do not edit by hand.
namespace lambda_lab::reference {
inline constexpr double bound_half = 141.74257663147566550;
inline constexpr double bound_exp_minus_pi = 13.159472534785811492;
inline constexpr double bound_0_9 = 5856.5338121249371074;
inline constexpr double bound_limit = 6.5797362673929057459;
inline constexpr double c3_half = -3.5903814092039700642;
inline constexpr double mobius_fixture_lambda = 236.23762771912610917;
inline constexpr double v_annulus_half_075 = 0.15961692161376922268;
inline constexpr double u_shell_quarter_half = 1.5112428064310645012;
inline constexpr double u_punctured_1_inv_e = 1.0000000000000000000;
inline constexpr double u_punctured_2_2_inv_e = -0.38629436111989061883;
inline constexpr double bound_decades[6] = {
    18.828065576914230198,
    9.6418185947732368589,
    7.9406617462286084628,
    7.3452568492379885241,
    7.0696694397737587240,
    6.9199676371018314251,
};
inline constexpr double v_annulus_half_taylor[6] = {
    0.0,
    1.0000000000000000000,
    -0.50000000000000000000,
    -3.5903814092039700642,
    -1.7951907046019850321,
    2.6106181058458562577,
};
}  // namespace lambda_lab::reference
