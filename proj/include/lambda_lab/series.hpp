#pragma once

// Laurent-series calculus on annuli: synthesis on circles, coefficient recovery,
// winding numbers, and the square root g with g^2 = 1/f'.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lambda_lab/error.hpp"
#include "lambda_lab/fft.hpp"

namespace lambda_lab {

using cplx = std::complex<double>;

/// Finitely banded Laurent series sum_{k=kmin}^{kmax} b_k z^k, declared valid on
/// the closed annulus r_inner <= |z| <= r_outer.
class LaurentSeries {
public:
    LaurentSeries() = default;

    LaurentSeries(int kmin, std::vector<cplx> coeffs, double r_inner, double r_outer)
        : kmin_(kmin), coeffs_(std::move(coeffs)), r_inner_(r_inner), r_outer_(r_outer) {
        if (coeffs_.empty()) {
            coeffs_.push_back(0.0);
            kmin_ = 0;
        }
        if (!(r_inner >= 0.0) || !(r_outer > r_inner)) {
            throw ValidationError("LaurentSeries: need 0 <= r_inner < r_outer");
        }
        if (r_inner == 0.0 && kmin_ < 0) {
            // Negative powers with zero coefficients are harmless; anything else is not a disk series.
            trim(0.0);
            if (kmin_ < 0) {
                throw ValidationError("LaurentSeries: principal part on a disk (r_inner = 0)");
            }
        }
    }

    /// Single-term series c z^k.
    static LaurentSeries monomial(int k, cplx c, double r_inner, double r_outer) {
        return LaurentSeries(k, {c}, r_inner, r_outer);
    }

    int kmin() const { return kmin_; }
    int kmax() const { return kmin_ + static_cast<int>(coeffs_.size()) - 1; }
    int band() const { return kmax() - kmin(); }
    double r_inner() const { return r_inner_; }
    double r_outer() const { return r_outer_; }
    const std::vector<cplx>& coeffs() const { return coeffs_; }

    cplx coeff(int k) const {
        if (k < kmin() || k > kmax()) return 0.0;
        return coeffs_[static_cast<std::size_t>(k - kmin_)];
    }

    /// Evaluates by Horner's rule separately on the analytic part and on the
    /// principal part (in 1/z).
    cplx operator()(cplx z) const {
        cplx pos = 0.0;
        const int lo = std::max(0, kmin());
        for (int k = kmax(); k >= lo; --k) pos = pos * z + coeff(k);
        if (lo > 0) pos *= std::pow(z, lo);
        cplx neg = 0.0;
        if (kmin() < 0) {
            const cplx w = 1.0 / z;
            for (int k = kmin(); k <= -1; ++k) neg = neg * w + coeff(k);
            neg *= w;
        }
        return pos + neg;
    }

    double abs_sum(double r) const {
        double s = 0.0;
        for (int k = kmin(); k <= kmax(); ++k) s += std::abs(coeff(k)) * std::pow(r, k);
        return s;
    }

    /// Sum of |b_k|^2.
    double norm2() const {
        double s = 0.0;
        for (const auto& c : coeffs_) s += std::norm(c);
        return s;
    }

    bool in_validity(double r, double slack = 1e-12) const {
        return r >= r_inner_ * (1.0 - slack) && r <= r_outer_ * (1.0 + slack);
    }

    /// Removes leading/trailing coefficients with |b_k| r^k <= threshold (r = reference radius).
    void trim(double threshold, double r = 1.0) {
        auto small = [&](int k) { return std::abs(coeff(k)) * std::pow(r, k) <= threshold; };
        int lo = kmin(), hi = kmax();
        while (lo < hi && small(lo)) ++lo;
        while (hi > lo && small(hi)) --hi;
        std::vector<cplx> kept(coeffs_.begin() + (lo - kmin_), coeffs_.begin() + (hi - kmin_) + 1);
        kmin_ = lo;
        coeffs_ = std::move(kept);
    }

    LaurentSeries with_validity(double r_inner, double r_outer) const {
        LaurentSeries s = *this;
        s.r_inner_ = r_inner;
        s.r_outer_ = r_outer;
        return s;
    }

private:
    int kmin_ = 0;
    std::vector<cplx> coeffs_{0.0};
    double r_inner_ = 0.0;
    double r_outer_ = 1.0;
};

/// Values of a function at the n angles 2 pi j / n on the circle |z| = radius.
struct CircleSamples {
    double radius = 1.0;
    std::vector<cplx> values;

    std::size_t n() const { return values.size(); }
    cplx point(std::size_t j) const {
        double th = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n());
        return std::polar(radius, th);
    }
};

inline bool is_power_of_two(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

inline std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

inline std::size_t min_recovery_samples(int kmin, int kmax) {
    return static_cast<std::size_t>(2 * (kmax - kmin) + 2);
}

/// Synthesises sum_k b_k z^k on |z| = r at n equispaced angles by one inverse FFT.
inline CircleSamples eval_circle(const LaurentSeries& s, double r, std::size_t n) {
    if (!s.in_validity(r)) {
        throw ValidationError("eval_circle: radius " + std::to_string(r) + " outside validity annulus");
    }
    if (!is_power_of_two(n) || n < min_recovery_samples(s.kmin(), s.kmax())) {
        throw ValidationError("eval_circle: n must be a power of two >= 2*band + 2");
    }
    std::vector<cplx> bins(n, 0.0);
    const auto nn = static_cast<long>(n);
    for (int k = s.kmin(); k <= s.kmax(); ++k) {
        long m = ((k % nn) + nn) % nn;
        bins[static_cast<std::size_t>(m)] += s.coeff(k) * std::pow(r, k);
    }
    return CircleSamples{r, fft::backward(std::move(bins))};
}

/// Recovers b_k for k in [kmin, kmax] from samples on one circle.
inline LaurentSeries coeffs_from_circle(const CircleSamples& c, int kmin, int kmax, double r_inner,
                                        double r_outer) {
    if (kmax < kmin) throw ValidationError("coeffs_from_circle: empty band");
    if (!is_power_of_two(c.n())) throw ValidationError("coeffs_from_circle: n must be a power of two");
    if (c.n() < min_recovery_samples(kmin, kmax)) {
        throw NumericalError("coeffs_from_circle: aliasing, band [" + std::to_string(kmin) + ", " +
                             std::to_string(kmax) + "] too wide for n = " + std::to_string(c.n()));
    }
    auto spec = fft::forward(c.values);
    const auto nn = static_cast<long>(c.n());
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(kmax - kmin + 1));
    for (int k = kmin; k <= kmax; ++k) {
        long m = ((k % nn) + nn) % nn;
        out.push_back(spec[static_cast<std::size_t>(m)] / static_cast<double>(nn) / std::pow(c.radius, k));
    }
    return LaurentSeries(kmin, std::move(out), r_inner, r_outer);
}

/// Validity defaults to the sampled circle itself (or the disk it bounds when
/// the band has no principal part).
inline LaurentSeries coeffs_from_circle(const CircleSamples& c, int kmin, int kmax) {
    const double rin = kmin >= 0 ? 0.0 : c.radius * (1.0 - 1e-12);
    return coeffs_from_circle(c, kmin, kmax, rin, c.radius * (1.0 + 1e-12));
}

/// Total argument change around the sampled circle divided by 2 pi.
inline int winding_number(const CircleSamples& c) {
    if (c.n() < 2) throw ValidationError("winding_number: need at least two samples");
    double vmax = 0.0;
    for (const auto& v : c.values) vmax = std::max(vmax, std::abs(v));
    double total = 0.0;
    for (std::size_t j = 0; j < c.n(); ++j) {
        const cplx a = c.values[j];
        const cplx b = c.values[(j + 1) % c.n()];
        if (std::abs(a) <= 1e-12 * std::max(1.0, vmax)) {
            throw NumericalError("winding_number: sample " + std::to_string(j) + " is within 1e-12 of zero");
        }
        double step = std::arg(b / a);
        if (std::abs(step) >= std::numbers::pi * (1.0 - 1e-9)) {
            throw NumericalError("winding_number: argument jump >= pi between consecutive samples");
        }
        total += step;
    }
    return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

/// Winding number of s on |z| = r, doubling the sample count until every
/// argument step is below pi/2 (cap 2^20 samples).
inline int winding_number(const LaurentSeries& s, double r, std::size_t n0 = 64) {
    std::size_t n = std::max(n0, next_power_of_two(min_recovery_samples(s.kmin(), s.kmax())));
    constexpr std::size_t cap = std::size_t{1} << 20;
    for (; n <= cap; n *= 2) {
        auto c = eval_circle(s, r, n);
        double vmax = 0.0;
        for (const auto& v : c.values) vmax = std::max(vmax, std::abs(v));
        double worst = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const cplx a = c.values[j];
            if (std::abs(a) <= 1e-12 * std::max(1.0, vmax)) {
                throw NumericalError("winding_number: series vanishes on |z| = " + std::to_string(r));
            }
            worst = std::max(worst, std::abs(std::arg(c.values[(j + 1) % n] / a)));
        }
        if (worst < std::numbers::pi / 2) return winding_number(c);
    }
    throw NumericalError("winding_number: argument steps stay >= pi/2 at the sample cap");
}

/// Term-wise derivative: coefficient k b_k moves to index k-1.
inline LaurentSeries derivative(const LaurentSeries& s) {
    std::vector<cplx> out;
    int lo = s.kmin() - 1;
    for (int k = s.kmin(); k <= s.kmax(); ++k) out.push_back(static_cast<double>(k) * s.coeff(k));
    LaurentSeries d(lo, std::move(out), s.r_inner(), s.r_outer());
    // b_0 contributes nothing; drop the exact zero it leaves at index -1 (or at the ends).
    if (d.band() > 0) {
        int kmin = d.kmin(), kmax = d.kmax();
        std::vector<cplx> c = d.coeffs();
        auto first = std::find_if(c.begin(), c.end(), [](cplx v) { return v != cplx(0.0); });
        if (first == c.end()) return LaurentSeries(0, {0.0}, s.r_inner(), s.r_outer());
        auto last = std::find_if(c.rbegin(), c.rend(), [](cplx v) { return v != cplx(0.0); });
        int lo2 = kmin + static_cast<int>(first - c.begin());
        int hi2 = kmax - static_cast<int>(last - c.rbegin());
        return LaurentSeries(lo2, std::vector<cplx>(c.begin() + (lo2 - kmin), c.begin() + (hi2 - kmin) + 1),
                             s.r_inner(), s.r_outer());
    }
    return d;
}

namespace detail {

inline double sample_radius(const LaurentSeries& s) {
    if (s.r_inner() < 1.0 && s.r_outer() >= 1.0) return 1.0;
    if (s.r_inner() == 0.0) return s.r_outer();
    return std::sqrt(s.r_inner() * s.r_outer());
}

}  // namespace detail

/// Returns g with g^2 f' = 1, built as z^{-w/2} exp(-L/2) where w is the winding of f'
/// on the mid-circle and L a continuous logarithm of z^{-w} f'. The sign of g is fixed
/// so that its largest-modulus coefficient has argument in (-pi/2, pi/2].
inline LaurentSeries sqrt_reciprocal_derivative(const LaurentSeries& f) {
    const LaurentSeries fp = derivative(f);
    if (fp.norm2() == 0.0) throw NumericalError("sqrt_reciprocal_derivative: f' vanishes identically");

    // g is built on the closed annulus r_lo <= |z| <= r_hi: the inner validity
    // radius (or the centre, for disk series) up to the sample radius. Nonnegative
    // powers are read off the outer circle and negative powers off the inner one,
    // so that neither side amplifies the other's rounding noise.
    const bool disk = f.r_inner() == 0.0;
    const double r_hi = detail::sample_radius(f);
    const double r_lo = disk ? 0.0 : std::min(f.r_inner(), r_hi);
    const double r_mid = 0.5 * (r_lo + r_hi);
    const int w = winding_number(fp, r_mid);
    if (w % 2 != 0) {
        throw NumericalError("sqrt_reciprocal_derivative: odd winding " + std::to_string(w) +
                             " of f' admits no single-valued square root");
    }
    for (double r : {r_lo, r_hi}) {
        if (r > 0.0 && winding_number(fp, r) != w) {
            throw NumericalError("sqrt_reciprocal_derivative: f' has zeros between |z| = " + std::to_string(r_mid) +
                                 " and |z| = " + std::to_string(r));
        }
    }
    const int half = w / 2;
    if (disk && w != 0) {
        throw NumericalError("sqrt_reciprocal_derivative: f' has " + std::to_string(w) + " zero(s) in the disk");
    }

    std::size_t n = std::max<std::size_t>(64, next_power_of_two(4 * static_cast<std::size_t>(fp.band() + 2 + std::abs(half))));
    constexpr std::size_t cap = std::size_t{1} << 18;
    auto branch_samples = [&](double r, std::size_t n) {
        auto c = eval_circle(fp, r, n);
        std::vector<cplx> gv(n);
        double arg_acc = 0.0;
        cplx prev = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const cplx z = c.point(j);
            const cplx q = c.values[j] * std::pow(z, -w);
            if (std::abs(q) == 0.0) throw NumericalError("sqrt_reciprocal_derivative: f' vanishes on sample circle");
            if (j == 0) {
                arg_acc = std::arg(q);
            } else {
                arg_acc += std::arg(q / prev);
            }
            prev = q;
            const cplx L(std::log(std::abs(q)), arg_acc);
            gv[j] = std::pow(z, -half) * std::exp(-0.5 * L);
        }
        // After one loop the accumulated argument must return to its start (winding of q is zero).
        const cplx q0 = c.values[0] * std::pow(c.point(0), -w);
        if (std::abs(arg_acc + std::arg(q0 / prev) - std::arg(q0)) > 1e-6) {
            throw NumericalError("sqrt_reciprocal_derivative: branch tracking did not close");
        }
        return CircleSamples{r, std::move(gv)};
    };

    LaurentSeries g;
    for (;; n *= 2) {
        if (n > cap) throw NumericalError("sqrt_reciprocal_derivative: coefficients of g do not decay");
        const int kk = static_cast<int>(n / 2) - 1;
        const int lo = disk ? 0 : -kk / 2, hi = disk ? kk : kk / 2;
        const auto chi = coeffs_from_circle(branch_samples(r_hi, n), lo, hi, f.r_inner(), f.r_outer());
        std::vector<cplx> c(chi.coeffs());
        if (!disk && r_lo < r_hi) {
            const auto clo = coeffs_from_circle(branch_samples(r_lo, n), lo, hi, f.r_inner(), f.r_outer());
            // the two circles may have picked opposite branches
            cplx dot = 0.0;
            for (int k = lo; k <= hi; ++k) {
                dot += chi.coeff(k) * std::conj(clo.coeff(k)) * std::pow(r_lo, k) * std::pow(r_hi, k);
            }
            const double sgn = dot.real() >= 0.0 ? 1.0 : -1.0;
            for (int k = lo; k < 0; ++k) c[static_cast<std::size_t>(k - lo)] = sgn * clo.coeff(k);
        }
        auto weight = [&](int k) { return std::pow(k >= 0 ? r_hi : r_lo, k); };
        double peak = 0.0, tail = 0.0;
        for (int k = lo; k <= hi; ++k) {
            const double m = std::abs(c[static_cast<std::size_t>(k - lo)]) * weight(k);
            peak = std::max(peak, m);
            if (std::abs(k) > (disk ? kk / 2 : kk / 4)) tail = std::max(tail, m);
        }
        if (tail <= 1e-15 * peak) {
            int a0 = lo, b0 = hi;
            auto small = [&](int k) { return std::abs(c[static_cast<std::size_t>(k - lo)]) * weight(k) <= 1e-14 * peak; };
            while (a0 < b0 && small(a0)) ++a0;
            while (b0 > a0 && small(b0)) --b0;
            g = LaurentSeries(a0, std::vector<cplx>(c.begin() + (a0 - lo), c.begin() + (b0 - lo) + 1), f.r_inner(),
                              r_hi);
            break;
        }
    }

    // Branch normalisation.
    int kbest = g.kmin();
    for (int k = g.kmin(); k <= g.kmax(); ++k) {
        if (std::abs(g.coeff(k)) > std::abs(g.coeff(kbest))) kbest = k;
    }
    double a = std::arg(g.coeff(kbest));
    if (!(a > -std::numbers::pi / 2 && a <= std::numbers::pi / 2)) {
        std::vector<cplx> neg = g.coeffs();
        for (auto& v : neg) v = -v;
        g = LaurentSeries(g.kmin(), std::move(neg), g.r_inner(), g.r_outer());
    }

    // Post-condition: g^2 f' = 1 at fresh points on the sample and mid circles.
    const std::size_t checks = 4 * n;
    for (double r : {r_lo, r_mid, r_hi}) {
        if (r == 0.0) continue;
        for (std::size_t j = 0; j < checks; ++j) {
            double th = 2.0 * std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(checks);
            cplx z = std::polar(r, th);
            cplx gz = g(z);
            cplx err = gz * gz * fp(z) - 1.0;
            if (std::abs(err) > 1e-10) {
                throw NumericalError("sqrt_reciprocal_derivative: g^2 f' - 1 = " + std::to_string(std::abs(err)) +
                                     " at |z| = " + std::to_string(r));
            }
        }
    }
    return g;
}

// JSON: {"kmin": -2, "coeffs": [[re,im],...], "rin": 0.5, "rout": 1.0}

inline nlohmann::json to_json_value(cplx c) { return nlohmann::json::array({c.real(), c.imag()}); }

inline cplx complex_from_json(const nlohmann::json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2) throw ValidationError("expected [re, im] pair");
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

inline nlohmann::json to_json(const LaurentSeries& s) {
    nlohmann::json c = nlohmann::json::array();
    for (const auto& v : s.coeffs()) c.push_back(to_json_value(v));
    return {{"kmin", s.kmin()}, {"coeffs", c}, {"rin", s.r_inner()}, {"rout", s.r_outer()}};
}

inline LaurentSeries laurent_from_json(const nlohmann::json& j) {
    try {
        std::vector<cplx> c;
        for (const auto& e : j.at("coeffs")) c.push_back(complex_from_json(e));
        return LaurentSeries(j.at("kmin").get<int>(), std::move(c), j.at("rin").get<double>(),
                             j.at("rout").get<double>());
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("LaurentSeries JSON: ") + e.what());
    }
}

}  // namespace lambda_lab
