"""Regenerates include/lambda_lab/reference_values.hpp from closed forms at 40 digits.

    python3 tests/oracles/gen_values.py > include/lambda_lab/reference_values.hpp
"""
from mpmath import mp, mpf, pi, log, exp, sin, taylor

mp.dps = 40


def factor(beta):
    return (pi / log(beta)) ** 2 + 1


def bound(beta):
    return 2 * pi**2 / 3 * factor(beta)


def c3(beta):
    return -factor(beta) / 6


def v_annulus(beta, r):
    lb = log(beta)
    return -r * (lb / pi) * sin(pi * log(r) / lb)


def u_shell(r, rho):
    L = log(1 / r)
    return -log((rho / pi) * L * sin(pi * log(1 / rho) / L))


def u_punctured(r, rho):
    q = rho / r
    return -log(-q * log(q)) - 2 * log(r)


def mobius_fixture_lambda(beta):
    # f = -1/(z+2): 1/sqrt(f') = z + 2, so sum |b_k|^2 = 5, B = 0, and the
    # boundary length is the integral of dtheta / |e^{i theta} + 2|^2 = 2 pi / 3.
    length = 2 * pi / 3
    i6 = factor(beta) * 2 * pi * 5
    return length * i6 / 6


def expansion_coeffs(beta, n):
    # v along the inward normal at r = 1: v(1 - d) as a power series in d
    return taylor(lambda d: v_annulus(beta, 1 - d), 0, n)


def emit(name, value):
    print(f"inline constexpr double {name} = {mp.nstr(value, 20, strip_zeros=False)};")


print("#pragma once")
print("// Closed-form reference values at 40 digits, generated by")
print("// tests/oracles/gen_values.py (mpmath); do not edit by hand.")
print("namespace lambda_lab::reference {")
emit("bound_half", bound(mpf("0.5")))
emit("bound_exp_minus_pi", bound(exp(-pi)))
emit("bound_0_9", bound(mpf("0.9")))
emit("bound_limit", 2 * pi**2 / 3)
emit("c3_half", c3(mpf("0.5")))
emit("mobius_fixture_lambda", mobius_fixture_lambda(mpf("0.5")))
emit("v_annulus_half_075", v_annulus(mpf("0.5"), mpf("0.75")))
emit("u_shell_quarter_half", u_shell(mpf("0.25"), mpf("0.5")))
emit("u_punctured_1_inv_e", u_punctured(mpf(1), 1 / exp(1)))
emit("u_punctured_2_2_inv_e", u_punctured(mpf(2), 2 / exp(1)))
print("inline constexpr double bound_decades[6] = {")
for k in range(1, 7):
    print(f"    {mp.nstr(bound(mpf(10) ** -k), 20, strip_zeros=False)},")
print("};")
print("inline constexpr double v_annulus_half_taylor[6] = {")
for c in expansion_coeffs(mpf("0.5"), 5):
    print(f"    {mp.nstr(c, 20, strip_zeros=False)},")
print("};")
print("}  // namespace lambda_lab::reference")
