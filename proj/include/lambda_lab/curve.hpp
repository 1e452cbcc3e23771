#pragma once

// Closed boundary curves given as trigonometric polynomials, with frames
// (normal, curvature, arc weight) and nearest-point projection.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lambda_lab/error.hpp"
#include "lambda_lab/series.hpp"

namespace lambda_lab {

enum class Orientation { positive, negative };

inline const char* to_string(Orientation o) { return o == Orientation::positive ? "positive" : "negative"; }

/// gamma(t) and its first two derivatives.
struct CurveJet {
    cplx p;
    cplx d1;
    cplx d2;
};

struct BoundaryFrame {
    cplx point;
    cplx inward_normal;  // towards the region enclosed by the curve
    double curvature = 0.0;  // as boundary of the enclosed region; 1/R for any circle
    double arc_weight = 0.0;
    double param = 0.0;
};

struct Projection {
    double param = 0.0;
    cplx foot;
    double distance = 0.0;
};

/// gamma(t) = c0 + sum_{k=1}^K (a_k cos kt + b_k sin kt) with complex a_k, b_k.
class BoundaryCurve {
public:
    BoundaryCurve() = default;

    BoundaryCurve(cplx c0, std::vector<cplx> cos_coeffs, std::vector<cplx> sin_coeffs)
        : c0_(c0), cos_(std::move(cos_coeffs)), sin_(std::move(sin_coeffs)) {
        const std::size_t k = std::max(cos_.size(), sin_.size());
        cos_.resize(k, 0.0);
        sin_.resize(k, 0.0);
        if (k == 0) throw ValidationError("BoundaryCurve: no oscillating terms");
        const double area = signed_area();
        if (!(std::abs(area) > 0.0) || !std::isfinite(area)) {
            throw ValidationError("BoundaryCurve: zero enclosed area");
        }
        orientation_ = area > 0 ? Orientation::positive : Orientation::negative;
        build_samples();
    }

    /// Same, but rejects a declared orientation that disagrees with the signed area.
    BoundaryCurve(cplx c0, std::vector<cplx> cos_coeffs, std::vector<cplx> sin_coeffs, Orientation declared)
        : BoundaryCurve(c0, std::move(cos_coeffs), std::move(sin_coeffs)) {
        if (declared != orientation_) {
            throw ValidationError(std::string("BoundaryCurve: declared orientation ") + to_string(declared) +
                                  " contradicts signed area " + std::to_string(signed_area()));
        }
    }

    static BoundaryCurve circle(cplx center, double radius, Orientation o = Orientation::positive) {
        if (!(radius > 0)) throw ValidationError("circle: radius must be positive");
        double sgn = o == Orientation::positive ? 1.0 : -1.0;
        return BoundaryCurve(center, {radius}, {cplx(0.0, sgn * radius)});
    }

    static BoundaryCurve ellipse(cplx center, double a, double b) {
        return BoundaryCurve(center, {a}, {cplx(0.0, b)});
    }

    /// The closed curve t -> f(r e^{it}).
    static BoundaryCurve from_series(const LaurentSeries& f, double r) {
        const int K = std::max(std::abs(f.kmin()), std::abs(f.kmax()));
        std::vector<cplx> a(static_cast<std::size_t>(std::max(K, 1)), 0.0), b(a.size(), 0.0);
        for (int k = 1; k <= K; ++k) {
            cplx p = f.coeff(k) * std::pow(r, k);
            cplx m = f.coeff(-k) * std::pow(r, -k);
            a[static_cast<std::size_t>(k - 1)] = p + m;
            b[static_cast<std::size_t>(k - 1)] = cplx(0.0, 1.0) * (p - m);
        }
        return BoundaryCurve(f.coeff(0), std::move(a), std::move(b));
    }

    int degree() const { return static_cast<int>(cos_.size()); }
    cplx constant() const { return c0_; }
    const std::vector<cplx>& cos_coeffs() const { return cos_; }
    const std::vector<cplx>& sin_coeffs() const { return sin_; }
    Orientation orientation() const { return orientation_; }

    CurveJet jet(double t) const {
        CurveJet j{c0_, 0.0, 0.0};
        const cplx e1 = std::polar(1.0, t);
        cplx ek = 1.0;
        for (int k = 1; k <= degree(); ++k) {
            ek *= e1;
            const double c = ek.real(), s = ek.imag(), kk = k;
            const cplx a = cos_[static_cast<std::size_t>(k - 1)], b = sin_[static_cast<std::size_t>(k - 1)];
            j.p += a * c + b * s;
            j.d1 += kk * (-a * s + b * c);
            j.d2 += -kk * kk * (a * c + b * s);
        }
        return j;
    }

    cplx point(double t) const { return jet(t).p; }

    /// (1/2) closed integral of Im(conj(gamma) gamma'), exact by the trapezoid rule.
    double signed_area() const {
        const int n = 4 * degree() + 8;
        double s = 0.0;
        for (int j = 0; j < n; ++j) {
            auto q = jet(2.0 * std::numbers::pi * j / n);
            s += (std::conj(q.p) * q.d1).imag();
        }
        return 0.5 * s * 2.0 * std::numbers::pi / n;
    }

    double length() const {
        const int n = std::max(256, 32 * degree());
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += std::abs(jet(2.0 * std::numbers::pi * j / n).d1);
        return s * 2.0 * std::numbers::pi / n;
    }

    /// gamma(-t): same trace, opposite orientation.
    BoundaryCurve reversed() const {
        std::vector<cplx> s = sin_;
        for (auto& v : s) v = -v;
        return BoundaryCurve(c0_, cos_, std::move(s));
    }

    /// Area centroid of the enclosed region (Green's theorem on the dense samples,
    /// exact for trig polynomials at this sample count).
    cplx centroid() const {
        const std::size_t n = samples_.size();
        double A = 0.0, cx = 0.0, cy = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
            const auto q = jet(t);
            const double x = q.p.real(), y = q.p.imag();
            A += x * q.d1.imag() - y * q.d1.real();
            cx += x * x * q.d1.imag();
            cy -= y * y * q.d1.real();
        }
        A *= 0.5;
        return cplx(cx / (2.0 * A), cy / (2.0 * A));
    }

    const std::vector<cplx>& dense_samples() const { return samples_; }

    /// Polygon winding of the dense samples around z (nonzero means enclosed).
    bool encloses(cplx z) const {
        double total = 0.0;
        const std::size_t n = samples_.size();
        for (std::size_t j = 0; j < n; ++j) {
            total += std::arg((samples_[(j + 1) % n] - z) / (samples_[j] - z));
        }
        return std::abs(total) > std::numbers::pi;
    }

    /// Nearest point on the curve by damped Newton on <gamma - z, gamma'> = 0,
    /// seeded from the closest dense sample and, failing that, from 32 equispaced parameters.
    Projection project(cplx z) const {
        std::size_t best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < samples_.size(); ++j) {
            double d = std::norm(samples_[j] - z);
            if (d < bd) {
                bd = d;
                best = j;
            }
        }
        const double t0 = 2.0 * std::numbers::pi * static_cast<double>(best) / static_cast<double>(samples_.size());
        Projection out;
        bool ok = newton(z, t0, out);
        if (ok && out.distance <= std::sqrt(bd) * (1.0 + 1e-12) + 1e-14) return out;

        Projection cand{t0, samples_[best], std::sqrt(bd)};
        bool any = ok;
        if (ok && out.distance < cand.distance) cand = out;
        for (int s = 0; s < 32; ++s) {
            Projection p;
            if (newton(z, 2.0 * std::numbers::pi * s / 32.0, p)) {
                any = true;
                if (p.distance < cand.distance || !ok) {
                    cand = p;
                    ok = true;
                }
            }
        }
        if (!any) {
            throw NumericalError("BoundaryCurve::project: Newton failed from all seeds; best candidate t = " +
                                 std::to_string(cand.param) + ", distance " + std::to_string(cand.distance));
        }
        return cand;
    }

    double scale() const {
        cplx c = centroid();
        double r = 0.0;
        for (const auto& p : samples_) r = std::max(r, std::abs(p - c));
        return r;
    }

private:
    void build_samples() {
        const std::size_t m = static_cast<std::size_t>(std::max(256, 32 * degree()));
        samples_.resize(m);
        for (std::size_t j = 0; j < m; ++j) samples_[j] = point(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m));
    }

    /// Newton on g(t) = <gamma - z, gamma'> with backtracking on |gamma - z|^2,
    /// so every accepted step descends; flat (near-centre) cases fall back to
    /// gradient steps.
    bool newton(cplx z, double t, Projection& out) const {
        const double max_step = std::numbers::pi / (2.0 * (degree() + 1));
        const double hint = scale_hint();
        auto finish = [&](double tt) {
            tt = std::remainder(tt, 2.0 * std::numbers::pi);
            if (tt < 0) tt += 2.0 * std::numbers::pi;
            const cplx f = point(tt);
            out = Projection{tt, f, std::abs(f - z)};
            return true;
        };
        for (int it = 0; it < 100; ++it) {
            const auto q = jet(t);
            const cplx r = q.p - z;
            const double g = (std::conj(r) * q.d1).real();
            const double sp2 = std::norm(q.d1);
            if (sp2 == 0.0) return false;
            if (std::abs(g) <= 1e-15 * std::sqrt(sp2) * (std::abs(r) + hint)) return finish(t);
            const double gp = sp2 + (std::conj(r) * q.d2).real();
            double step = gp > 0.0 ? -g / gp : -g / sp2;
            step = std::clamp(step, -max_step, max_step);
            const double phi = std::norm(r);
            for (;;) {
                if (std::norm(point(t + step) - z) <= phi) break;
                step *= 0.5;
                if (std::abs(step) < 1e-16) return finish(t);
            }
            t += step;
            if (std::abs(step) < 1e-14) return finish(t);
        }
        return false;
    }

    double scale_hint() const {
        double s = 0.0;
        for (std::size_t k = 0; k < cos_.size(); ++k) s += std::abs(cos_[k]) + std::abs(sin_[k]);
        return s;
    }

    cplx c0_ = 0.0;
    std::vector<cplx> cos_;
    std::vector<cplx> sin_;
    Orientation orientation_ = Orientation::positive;
    std::vector<cplx> samples_;
};

/// Frames at t_j = 2 pi j / n.
inline std::vector<BoundaryFrame> frames(const BoundaryCurve& curve, int n) {
    if (n < 8) throw ValidationError("frames: need n >= 8");
    const double sgn = curve.orientation() == Orientation::positive ? 1.0 : -1.0;
    std::vector<BoundaryFrame> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double t = 2.0 * std::numbers::pi * j / n;
        auto q = curve.jet(t);
        const double speed = std::abs(q.d1);
        if (!(speed > 1e-14 * std::max(1.0, curve.scale()))) {
            throw ValidationError("frames: curve speed vanishes at t = " + std::to_string(t));
        }
        BoundaryFrame f;
        f.point = q.p;
        f.inward_normal = sgn * cplx(0.0, 1.0) * q.d1 / speed;
        f.curvature = sgn * (std::conj(q.d1) * q.d2).imag() / (speed * speed * speed);
        f.arc_weight = speed * 2.0 * std::numbers::pi / n;
        f.param = t;
        out.push_back(f);
    }
    return out;
}

struct CurveCheck {
    bool simple = true;
    double min_separation = 0.0;  // smallest distance between non-adjacent polygon edges
    double min_speed = 0.0;
    bool orientation_consistent = true;
};

namespace detail {
inline double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

inline bool segments_intersect(cplx p1, cplx p2, cplx q1, cplx q2) {
    double d1 = cross(q2 - q1, p1 - q1), d2 = cross(q2 - q1, p2 - q1);
    double d3 = cross(p2 - p1, q1 - p1), d4 = cross(p2 - p1, q2 - p1);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}
}  // namespace detail

/// Simplicity (edge crossings of the inscribed polygon at 4x the coefficient count,
/// at least 64 vertices), minimum speed on dense samples, and orientation consistency.
inline CurveCheck check_curve(const BoundaryCurve& c) {
    CurveCheck out;
    const int n = std::max(64, 4 * (2 * c.degree() + 1));
    std::vector<cplx> p(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) p[static_cast<std::size_t>(j)] = c.point(2.0 * std::numbers::pi * j / n);
    out.min_separation = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            const cplx a1 = p[static_cast<std::size_t>(i)], a2 = p[static_cast<std::size_t>((i + 1) % n)];
            const cplx b1 = p[static_cast<std::size_t>(j)], b2 = p[static_cast<std::size_t>((j + 1) % n)];
            if (detail::segments_intersect(a1, a2, b1, b2)) out.simple = false;
            out.min_separation = std::min(out.min_separation, std::abs(a1 - b1));
        }
    }
    const int m = std::max(512, 16 * c.degree());
    out.min_speed = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) out.min_speed = std::min(out.min_speed, std::abs(c.jet(2.0 * std::numbers::pi * j / m).d1));
    out.orientation_consistent = (c.signed_area() > 0) == (c.orientation() == Orientation::positive);
    return out;
}

inline nlohmann::json to_json(const BoundaryCurve& c) {
    nlohmann::json a = nlohmann::json::array(), b = nlohmann::json::array();
    for (const auto& v : c.cos_coeffs()) a.push_back(to_json_value(v));
    for (const auto& v : c.sin_coeffs()) b.push_back(to_json_value(v));
    return {{"cos", a}, {"sin", b}, {"const", to_json_value(c.constant())}};
}

inline BoundaryCurve curve_from_json(const nlohmann::json& j) {
    try {
        std::vector<cplx> a, b;
        for (const auto& e : j.at("cos")) a.push_back(complex_from_json(e));
        for (const auto& e : j.at("sin")) b.push_back(complex_from_json(e));
        cplx c0 = j.contains("const") ? complex_from_json(j.at("const")) : cplx(0.0);
        if (j.contains("orientation")) {
            auto o = j.at("orientation").get<std::string>();
            if (o != "positive" && o != "negative") throw ValidationError("curve orientation must be positive|negative");
            return BoundaryCurve(c0, a, b, o == "positive" ? Orientation::positive : Orientation::negative);
        }
        return BoundaryCurve(c0, a, b);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("BoundaryCurve JSON: ") + e.what());
    }
}

}  // namespace lambda_lab
