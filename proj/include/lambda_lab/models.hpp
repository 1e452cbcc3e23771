#pragma once

// Closed-form solutions and sharp constants: the annulus and disk boundary
// defining functions, the punctured-disk and shell solutions of
// Delta u = e^{2u}, and the lower bound for lambda on doubly-connected domains.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "lambda_lab/error.hpp"

namespace lambda_lab {

using cplx = std::complex<double>;

struct ModelConstants {
    double beta = 0.0;
    double c3 = 0.0;
    double lambda_bound = 0.0;
    double kappa = 1.0;
};

/// (pi / ln beta)^2 + 1, with the beta -> 0 limit 1.
inline double modulus_factor(double beta) {
    if (beta == 0.0) return 1.0;
    const double a = std::numbers::pi / std::log(beta);
    return a * a + 1.0;
}

inline ModelConstants constants(double beta) {
    if (!(beta >= 0.0 && beta < 1.0)) {
        throw ValidationError("constants: beta must lie in [0, 1), got " + std::to_string(beta));
    }
    const double m = modulus_factor(beta);
    return {beta, -m / 6.0, 2.0 * std::numbers::pi * std::numbers::pi / 3.0 * m, 1.0};
}

/// v(r) = -r (ln beta / pi) sin(pi ln r / ln beta) on beta <= r <= 1.
inline double v_annulus(double beta, double r) {
    if (!(beta > 0.0 && beta < 1.0)) throw ValidationError("v_annulus: beta must lie in (0, 1)");
    if (!(r >= beta && r <= 1.0)) throw ValidationError("v_annulus: r must lie in [beta, 1]");
    const double lb = std::log(beta);
    return -r * (lb / std::numbers::pi) * std::sin(std::numbers::pi * std::log(r) / lb);
}

/// dv/dr and d2v/dr2 of v_annulus, used by residual checks.
inline std::pair<double, double> v_annulus_derivatives(double beta, double r) {
    const double lb = std::log(beta);
    const double a = std::numbers::pi / lb;
    const double phase = a * std::log(r);
    // v = -(r/a) sin(a ln r)
    const double d1 = -(std::sin(phase) + a * std::cos(phase)) / a;
    const double d2 = -(a * std::cos(phase) - a * a * std::sin(phase)) / (a * r);
    return {d1, d2};
}

/// (1 - r^2) / 2.
inline double v_disk(double r) {
    if (!(r >= 0.0 && r <= 1.0)) throw ValidationError("v_disk: r must lie in [0, 1]");
    return 0.5 * (1.0 - r * r);
}

/// -log(-(|x-p|/r) log(|x-p|/r)) - 2 ln r.
inline double u_punctured_disk(double r, cplx p, cplx x) {
    const double rho = std::abs(x - p);
    if (!(r > 0.0)) throw ValidationError("u_punctured_disk: r must be positive");
    if (!(rho > 0.0) || !(rho < r)) throw ValidationError("u_punctured_disk: need 0 < |x-p| < r");
    const double q = rho / r;
    return -std::log(-q * std::log(q)) - 2.0 * std::log(r);
}

/// -log((|x-p|/pi) log(1/r) sin(pi log(1/|x-p|) / log(1/r))) on the shell r < |x-p| < 1.
inline double u_shell(double r, cplx p, cplx x) {
    const double rho = std::abs(x - p);
    if (!(r > 0.0 && r < 1.0)) throw ValidationError("u_shell: inner radius must lie in (0, 1)");
    if (!(rho > r && rho < 1.0)) throw ValidationError("u_shell: need r < |x-p| < 1");
    const double L = std::log(1.0 / r);
    return -std::log((rho / std::numbers::pi) * L * std::sin(std::numbers::pi * std::log(1.0 / rho) / L));
}

/// True iff u(x) >= -log(-r |x-p| log(|x-p|/r)) - 1e-8 at every sample.
inline bool growth_barrier_check(const std::vector<std::pair<cplx, double>>& u_values, cplx p, double r) {
    for (const auto& [x, u] : u_values) {
        const double rho = std::abs(x - p);
        if (!(rho > 0.0 && rho < r)) throw ValidationError("growth_barrier_check: sample outside B_r(p) - {p}");
        const double bound = -std::log(-r * rho * std::log(rho / r));
        if (!(u - bound >= -1e-8)) return false;
    }
    return true;
}

}  // namespace lambda_lab
