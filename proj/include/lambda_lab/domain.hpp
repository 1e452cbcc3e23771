#pragma once

// Declarative domain descriptions and the boundary geometry shared by the
// analytic and PDE pipelines.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "lambda_lab/curve.hpp"
#include "lambda_lab/error.hpp"
#include "lambda_lab/series.hpp"

namespace lambda_lab {

struct UnitDisk {};

struct Annulus {
    double beta = 0.5;  // 0 is the punctured disk
};

/// Image of B_1 - closure(B_beta) under f (disk B_1 when beta = 0).
struct MappedAnnulus {
    LaurentSeries f;
    double beta = 0.5;
};

struct Punctured {
    BoundaryCurve outer;
    std::vector<cplx> punctures;
};

struct CurveBounded {
    BoundaryCurve outer;
    std::optional<BoundaryCurve> inner;
};

using DomainSpec = std::variant<UnitDisk, Annulus, MappedAnnulus, Punctured, CurveBounded>;

inline std::string variant_name(const DomainSpec& s) {
    static const char* names[] = {"unit_disk", "annulus", "mapped_annulus", "punctured", "curve_bounded"};
    return names[s.index()];
}

enum class Side { outer, inner };

/// Closest-point data for one boundary component. Curvature is taken from the
/// domain side, so it is positive where the domain is locally convex.
struct Nearest {
    double distance = 0.0;      // unsigned
    cplx foot;
    double curvature = 0.0;     // domain-side curvature at the foot (points: unused)
    bool domain_side = true;    // z lies on the side of this component facing the domain
    double lap_distance = 0.0;  // Laplacian of the distance function at z
};

class Component {
public:
    enum class Kind { circle, curve, point };

    static Component circle(cplx center, double radius, Side side) {
        Component c;
        c.kind_ = Kind::circle;
        c.center_ = center;
        c.radius_ = radius;
        c.side_ = side;
        return c;
    }
    static Component curve(BoundaryCurve curve, Side side) {
        Component c;
        c.kind_ = Kind::curve;
        c.curve_ = std::make_shared<const BoundaryCurve>(std::move(curve));
        c.side_ = side;
        c.center_ = c.curve_->centroid();
        c.radius_ = c.curve_->scale();
        return c;
    }
    static Component point(cplx p) {
        Component c;
        c.kind_ = Kind::point;
        c.center_ = p;
        c.radius_ = 0.0;
        c.side_ = Side::inner;
        return c;
    }

    Kind kind() const { return kind_; }
    Side side() const { return side_; }
    cplx center() const { return center_; }
    double radius() const { return radius_; }
    const BoundaryCurve* curve_ptr() const { return curve_.get(); }

    Nearest nearest(cplx z) const {
        Nearest n;
        switch (kind_) {
            case Kind::point: {
                n.distance = std::abs(z - center_);
                n.foot = center_;
                n.domain_side = true;
                n.lap_distance = n.distance > 0 ? 1.0 / n.distance : std::numeric_limits<double>::infinity();
                return n;
            }
            case Kind::circle: {
                const double r = std::abs(z - center_);
                const cplx dir = r > 0 ? (z - center_) / r : cplx(1.0, 0.0);
                n.foot = center_ + radius_ * dir;
                if (side_ == Side::outer) {
                    n.distance = std::abs(radius_ - r);
                    n.domain_side = r <= radius_;
                    n.curvature = 1.0 / radius_;
                    n.lap_distance = n.domain_side ? -1.0 / r : 1.0 / r;
                } else {
                    n.distance = std::abs(r - radius_);
                    n.domain_side = r >= radius_;
                    n.curvature = -1.0 / radius_;
                    n.lap_distance = n.domain_side ? 1.0 / r : -1.0 / r;
                }
                return n;
            }
            case Kind::curve: {
                const auto pr = curve_->project(z);
                auto q = curve_->jet(pr.param);
                const double sp = std::abs(q.d1);
                const double sgn = curve_->orientation() == Orientation::positive ? 1.0 : -1.0;
                const cplx inward = sgn * cplx(0.0, 1.0) * q.d1 / sp;
                const double k_enclosed = sgn * (std::conj(q.d1) * q.d2).imag() / (sp * sp * sp);
                const double along = ((z - pr.foot) * std::conj(inward)).real();
                const bool enclosed_side = along >= 0.0;
                n.distance = pr.distance;
                n.foot = pr.foot;
                n.domain_side = side_ == Side::outer ? enclosed_side : !enclosed_side;
                n.curvature = side_ == Side::outer ? k_enclosed : -k_enclosed;
                // Distance measured into the domain side: Laplacian = -kappa / (1 - kappa d).
                const double kd = n.domain_side ? n.curvature : -n.curvature;
                const double denom = 1.0 - kd * n.distance;
                n.lap_distance = denom > 0 ? -kd / denom : std::numeric_limits<double>::quiet_NaN();
                return n;
            }
        }
        return n;
    }

    /// Signed distance, positive on the domain side.
    double signed_distance(cplx z) const {
        auto n = nearest(z);
        return n.domain_side ? n.distance : -n.distance;
    }

    /// Largest offset for which the domain-side parallel curve stays smooth (points: infinite).
    double reach() const {
        switch (kind_) {
            case Kind::point:
                return std::numeric_limits<double>::infinity();
            case Kind::circle:
                return side_ == Side::outer ? radius_ : std::numeric_limits<double>::infinity();
            case Kind::curve: {
                auto fr = frames(*curve_, std::max(256, 32 * curve_->degree()));
                double kmax = 0.0;
                for (const auto& f : fr) {
                    double k = side_ == Side::outer ? f.curvature : -f.curvature;
                    kmax = std::max(kmax, k);
                }
                return kmax > 0 ? 1.0 / kmax : std::numeric_limits<double>::infinity();
            }
        }
        return 0.0;
    }

private:
    Kind kind_ = Kind::point;
    Side side_ = Side::outer;
    cplx center_;
    double radius_ = 0.0;
    std::shared_ptr<const BoundaryCurve> curve_;
};

/// Boundary components of a domain; component 0 is always the outermost one.
class DomainGeometry {
public:
    explicit DomainGeometry(const DomainSpec& spec) {
        std::visit([this](const auto& s) { build(s); }, spec);
        scale_ = compute_scale();
    }

    const std::vector<Component>& components() const { return comps_; }
    const Component& outer() const { return comps_.front(); }

    /// Outer boundary as a curve (circles converted to trig form).
    BoundaryCurve outer_curve() const {
        const auto& c = comps_.front();
        if (c.kind() == Component::Kind::curve) return *c.curve_ptr();
        return BoundaryCurve::circle(c.center(), c.radius());
    }

    /// Maximum distance from the outer curve's centroid to the outer curve.
    double scale() const { return scale_; }

    bool doubly_connected() const {
        return comps_.size() == 2 && comps_[1].kind() != Component::Kind::point;
    }

    double signed_distance(cplx z) const {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : comps_) best = std::min(best, c.signed_distance(z));
        return best;
    }

    /// Axis-aligned box containing the outer component.
    void bounding_box(double& xmin, double& xmax, double& ymin, double& ymax) const {
        const auto& c = comps_.front();
        if (c.kind() == Component::Kind::circle) {
            xmin = c.center().real() - c.radius();
            xmax = c.center().real() + c.radius();
            ymin = c.center().imag() - c.radius();
            ymax = c.center().imag() + c.radius();
            return;
        }
        xmin = ymin = std::numeric_limits<double>::infinity();
        xmax = ymax = -xmin;
        for (const auto& p : c.curve_ptr()->dense_samples()) {
            xmin = std::min(xmin, p.real());
            xmax = std::max(xmax, p.real());
            ymin = std::min(ymin, p.imag());
            ymax = std::max(ymax, p.imag());
        }
        // Dense samples may cut corners by at most the chordal sagitta.
        const double pad = 1e-3 * scale_;
        xmin -= pad;
        ymin -= pad;
        xmax += pad;
        ymax += pad;
    }

private:
    void build(const UnitDisk&) { comps_.push_back(Component::circle(0.0, 1.0, Side::outer)); }
    void build(const Annulus& a) {
        if (!(a.beta >= 0.0 && a.beta < 1.0)) throw ValidationError("beta out of range");
        comps_.push_back(Component::circle(0.0, 1.0, Side::outer));
        if (a.beta == 0.0) {
            comps_.push_back(Component::point(0.0));
        } else {
            comps_.push_back(Component::circle(0.0, a.beta, Side::inner));
        }
    }
    void build(const MappedAnnulus& m) {
        if (!(m.beta >= 0.0 && m.beta < 1.0)) throw ValidationError("beta out of range");
        comps_.push_back(Component::curve(BoundaryCurve::from_series(m.f, 1.0), Side::outer));
        if (m.beta > 0.0) comps_.push_back(Component::curve(BoundaryCurve::from_series(m.f, m.beta), Side::inner));
    }
    void build(const Punctured& p) {
        comps_.push_back(Component::curve(p.outer, Side::outer));
        for (const auto& q : p.punctures) comps_.push_back(Component::point(q));
    }
    void build(const CurveBounded& c) {
        comps_.push_back(Component::curve(c.outer, Side::outer));
        if (c.inner) comps_.push_back(Component::curve(*c.inner, Side::inner));
    }

    double compute_scale() const {
        const auto& c = comps_.front();
        if (c.kind() == Component::Kind::circle) return c.radius();
        return c.curve_ptr()->scale();
    }

    std::vector<Component> comps_;
    double scale_ = 1.0;
};

inline double signed_distance(const DomainSpec& spec, cplx z) {
    if (std::holds_alternative<UnitDisk>(spec)) return 1.0 - std::abs(z);
    if (const auto* a = std::get_if<Annulus>(&spec)) {
        const double r = std::abs(z);
        return std::min(1.0 - r, r - a->beta);
    }
    return DomainGeometry(spec).signed_distance(z);
}

inline double domain_scale(const DomainSpec& spec) { return DomainGeometry(spec).scale(); }

// ---------------------------------------------------------------- validation

struct Check {
    std::string name;
    bool passed = true;
    double margin = 0.0;
    std::string message;
};

struct Diagnostics {
    std::vector<Check> checks;
    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
    }
    const Check* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
    std::vector<std::string> failures() const {
        std::vector<std::string> out;
        for (const auto& c : checks)
            if (!c.passed) out.push_back(c.message.empty() ? c.name : c.message);
        return out;
    }
};

namespace detail {

inline void check_curve_into(Diagnostics& d, const BoundaryCurve& c, const std::string& label) {
    auto cc = check_curve(c);
    d.checks.push_back({label + " simple", cc.simple, cc.min_separation,
                        cc.simple ? "" : label + " curve self-intersects"});
    d.checks.push_back({label + " regular", cc.min_speed > 0, cc.min_speed,
                        cc.min_speed > 0 ? "" : label + " curve has vanishing speed"});
    d.checks.push_back({label + " orientation", cc.orientation_consistent, c.signed_area(),
                        cc.orientation_consistent ? "" : label + " orientation flag contradicts signed area"});
}

inline double beta_margin(double beta) { return std::min(beta, 1.0 - beta); }

inline void check_inner_inside(Diagnostics& d, const BoundaryCurve& outer, const BoundaryCurve& inner) {
    bool inside = true;
    double sep = std::numeric_limits<double>::infinity();
    for (const auto& p : inner.dense_samples()) {
        if (!outer.encloses(p)) inside = false;
    }
    if (outer.encloses(inner.dense_samples().front())) {
        for (std::size_t j = 0; j < inner.dense_samples().size(); j += 4) {
            sep = std::min(sep, outer.project(inner.dense_samples()[j]).distance);
        }
    }
    d.checks.push_back({"inner inside outer", inside && sep > 0, inside ? sep : -1.0,
                        inside ? "" : "inner curve not strictly inside outer curve"});
}

}  // namespace detail

/// Runs every type invariant; never throws, failures are reported as data.
inline Diagnostics validate(const DomainSpec& spec) {
    Diagnostics d;
    try {
        if (const auto* a = std::get_if<Annulus>(&spec)) {
            bool ok = a->beta >= 0.0 && a->beta < 1.0;
            d.checks.push_back({"beta range", ok, detail::beta_margin(a->beta), ok ? "" : "beta out of range"});
        } else if (const auto* m = std::get_if<MappedAnnulus>(&spec)) {
            bool ok = m->beta >= 0.0 && m->beta < 1.0;
            d.checks.push_back({"beta range", ok, detail::beta_margin(m->beta), ok ? "" : "beta out of range"});
            if (!ok) return d;
            bool covers = m->f.in_validity(1.0) && (m->beta == 0.0 ? m->f.r_inner() == 0.0 : m->f.in_validity(m->beta));
            d.checks.push_back({"map validity", covers, m->f.r_outer() - 1.0,
                                covers ? "" : "map validity annulus does not contain [beta, 1]"});
            if (!covers) return d;
            auto outer = BoundaryCurve::from_series(m->f, 1.0);
            detail::check_curve_into(d, outer, "outer");
            if (m->beta > 0) {
                auto inner = BoundaryCurve::from_series(m->f, m->beta);
                detail::check_curve_into(d, inner, "inner");
                detail::check_inner_inside(d, outer, inner);
            }
        } else if (const auto* p = std::get_if<Punctured>(&spec)) {
            detail::check_curve_into(d, p->outer, "outer");
            for (std::size_t i = 0; i < p->punctures.size(); ++i) {
                const cplx q = p->punctures[i];
                bool in = p->outer.encloses(q);
                double dist = p->outer.project(q).distance;
                d.checks.push_back({"puncture " + std::to_string(i) + " inside", in && dist > 0, in ? dist : -dist,
                                    in ? "" : "puncture outside"});
                for (std::size_t j = 0; j < i; ++j) {
                    double sep = std::abs(q - p->punctures[j]);
                    d.checks.push_back({"punctures " + std::to_string(j) + "," + std::to_string(i) + " distinct",
                                        sep > 0, sep, sep > 0 ? "" : "punctures coincide"});
                }
            }
        } else if (const auto* c = std::get_if<CurveBounded>(&spec)) {
            detail::check_curve_into(d, c->outer, "outer");
            if (c->inner) {
                detail::check_curve_into(d, *c->inner, "inner");
                detail::check_inner_inside(d, c->outer, *c->inner);
            }
        } else {
            d.checks.push_back({"unit disk", true, 1.0, ""});
        }
    } catch (const std::exception& e) {
        d.checks.push_back({"construction", false, 0.0, e.what()});
    }
    return d;
}

inline void require_valid(const DomainSpec& spec) {
    auto d = validate(spec);
    if (!d.passed()) {
        std::string msg = "invalid domain:";
        for (const auto& f : d.failures()) msg += " " + f + ";";
        throw ValidationError(msg);
    }
}

// ---------------------------------------------------------------- JSON

inline nlohmann::json to_json(const DomainSpec& spec) {
    nlohmann::json j;
    j["variant"] = variant_name(spec);
    if (const auto* a = std::get_if<Annulus>(&spec)) j["beta"] = a->beta;
    if (const auto* m = std::get_if<MappedAnnulus>(&spec)) {
        j["map"] = to_json(m->f);
        j["beta"] = m->beta;
    }
    if (const auto* p = std::get_if<Punctured>(&spec)) {
        j["outer"] = to_json(p->outer);
        j["punctures"] = nlohmann::json::array();
        for (const auto& q : p->punctures) j["punctures"].push_back(to_json_value(q));
    }
    if (const auto* c = std::get_if<CurveBounded>(&spec)) {
        j["outer"] = to_json(c->outer);
        if (c->inner) j["inner"] = to_json(*c->inner);
    }
    return j;
}

inline DomainSpec domain_from_json(const nlohmann::json& j) {
    try {
        const auto v = j.at("variant").get<std::string>();
        if (v == "unit_disk") return UnitDisk{};
        if (v == "annulus") return Annulus{j.at("beta").get<double>()};
        if (v == "mapped_annulus") return MappedAnnulus{laurent_from_json(j.at("map")), j.at("beta").get<double>()};
        if (v == "punctured") {
            Punctured p{curve_from_json(j.at("outer")), {}};
            for (const auto& q : j.at("punctures")) p.punctures.push_back(complex_from_json(q));
            return p;
        }
        if (v == "curve_bounded") {
            CurveBounded c{curve_from_json(j.at("outer")), std::nullopt};
            if (j.contains("inner") && !j.at("inner").is_null()) c.inner = curve_from_json(j.at("inner"));
            return c;
        }
        throw ValidationError("unknown domain variant '" + v + "'");
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("domain JSON: ") + e.what());
    }
}

}  // namespace lambda_lab
