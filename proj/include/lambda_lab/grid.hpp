#pragma once

// Cartesian grids over a domain: per-node boundary geometry, stage masks with
// Shortley-Weller cut legs, and the boundary regularizer s used by the solver.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "lambda_lab/domain.hpp"
#include "lambda_lab/error.hpp"
#include "lambda_lab/parallel.hpp"

namespace lambda_lab {

enum class CellKind : std::uint8_t { exterior = 0, interior = 1, boundary_adjacent = 2 };

/// Distances from every node of a bounding grid to every boundary component,
/// computed once and shared by all exhaustion stages.
class GridGeometry {
public:
    GridGeometry(const DomainSpec& spec, double h) : geo_(std::make_shared<DomainGeometry>(spec)), h_(h) {
        if (!(h > 0.0)) throw ValidationError("grid spacing must be positive");
        if (h > 0.1 * geo_->scale()) throw ValidationError("grid too coarse: h exceeds 0.1 x domain scale");
        double xmin, xmax, ymin, ymax;
        geo_->bounding_box(xmin, xmax, ymin, ymax);
        origin_ = cplx(xmin - 3.0 * h, ymin - 3.0 * h);
        nx_ = static_cast<int>(std::ceil((xmax - xmin) / h)) + 7;
        ny_ = static_cast<int>(std::ceil((ymax - ymin) / h)) + 7;
        const std::size_t nn = static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_);
        if (nn > 40'000'000) throw ValidationError("grid too fine: more than 4e7 nodes");
        const std::size_t nc = geo_->components().size();
        sd_.assign(nc, std::vector<double>(nn, std::numeric_limits<double>::quiet_NaN()));
        lap_.assign(nc, std::vector<double>(nn, std::numeric_limits<double>::quiet_NaN()));
        inside_.assign(nn, 0);

        parallel_for(static_cast<std::size_t>(ny_), [&](std::size_t j) {
            for (int i = 0; i < nx_; ++i) {
                const std::size_t id = j * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(i);
                const cplx z = node(i, static_cast<int>(j));
                // The outer component decides membership first; far-outside nodes skip the rest.
                auto n0 = geo_->components()[0].nearest(z);
                sd_[0][id] = n0.domain_side ? n0.distance : -n0.distance;
                lap_[0][id] = n0.lap_distance;
                if (!n0.domain_side) continue;
                bool in = n0.distance > 0;
                for (std::size_t c = 1; c < nc; ++c) {
                    auto n = geo_->components()[c].nearest(z);
                    sd_[c][id] = n.domain_side ? n.distance : -n.distance;
                    lap_[c][id] = n.lap_distance;
                    if (!(sd_[c][id] > 0)) in = false;
                }
                inside_[id] = in ? 1 : 0;
            }
        });
    }

    const DomainGeometry& domain() const { return *geo_; }
    std::shared_ptr<const DomainGeometry> domain_ptr() const { return geo_; }
    double h() const { return h_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    cplx origin() const { return origin_; }
    std::size_t size() const { return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_); }
    std::size_t id(int i, int j) const { return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(i); }
    cplx node(int i, int j) const { return origin_ + cplx(i * h_, j * h_); }
    std::size_t n_components() const { return sd_.size(); }
    double sd(std::size_t c, std::size_t id) const { return sd_[c][id]; }
    double lap(std::size_t c, std::size_t id) const { return lap_[c][id]; }
    bool inside(std::size_t id) const { return inside_[id] != 0; }

private:
    std::shared_ptr<DomainGeometry> geo_;
    double h_;
    cplx origin_;
    int nx_ = 0, ny_ = 0;
    std::vector<std::vector<double>> sd_;
    std::vector<std::vector<double>> lap_;
    std::vector<std::uint8_t> inside_;
};

/// Boundary of one exhaustion stage: curves and circles offset inward by epsilon,
/// punctures carved as disks of radius puncture_radius. When finite_punctures is
/// set the carved circles carry finite Dirichlet data instead of blow-up.
struct StageBoundary {
    double epsilon = 0.0;
    double puncture_radius = 0.0;
    bool finite_punctures = false;
};

/// Smooth positive weight s = prod_c S(d_c - off_c) with S(d) = d + O(d^2) near 0,
/// S constant beyond the width delta. The solver writes u = -log s + w.
class Regularizer {
public:
    Regularizer(std::shared_ptr<const DomainGeometry> geo, std::vector<double> offsets, double delta)
        : geo_(std::move(geo)), off_(std::move(offsets)), delta_(delta) {}

    double delta() const { return delta_; }
    double offset(std::size_t c) const { return off_[c]; }

    double S(double D) const {
        if (D >= delta_) return delta_ / 5.0;
        const double t = D / delta_;
        const double q = 1.0 - t;
        return delta_ / 5.0 * (1.0 - q * q * q * q * q);
    }

    /// log S and the contribution of one factor to Delta log s, given D and Delta D.
    void factor(double D, double lapD, double& log_S, double& lap_log_S) const {
        if (D >= delta_) {
            log_S = std::log(delta_ / 5.0);
            lap_log_S = 0.0;
            return;
        }
        const double t = D / delta_;
        const double q = 1.0 - t;
        const double q3 = q * q * q;
        const double S0 = delta_ / 5.0 * (1.0 - q3 * q * q);
        const double S1 = q3 * q;
        const double S2 = -4.0 * q3 / delta_;
        log_S = std::log(S0);
        lap_log_S = (S2 + S1 * lapD) / S0 - (S1 * S1) / (S0 * S0);
    }

    double log_s(cplx z) const {
        double s = 0.0;
        const auto& comps = geo_->components();
        for (std::size_t c = 0; c < comps.size(); ++c) {
            auto n = comps[c].nearest(z);
            const double D = (n.domain_side ? n.distance : -n.distance) - off_[c];
            if (!(D > 0)) return -std::numeric_limits<double>::infinity();
            s += std::log(S(D));
        }
        return s;
    }

    /// log s at z excluding component `skip` (used for Dirichlet data of w on that component).
    double log_s_except(cplx z, std::size_t skip) const {
        double s = 0.0;
        const auto& comps = geo_->components();
        for (std::size_t c = 0; c < comps.size(); ++c) {
            if (c == skip) continue;
            auto n = comps[c].nearest(z);
            const double D = (n.domain_side ? n.distance : -n.distance) - off_[c];
            s += std::log(S(std::max(D, 0.0)));
        }
        return s;
    }

private:
    std::shared_ptr<const DomainGeometry> geo_;
    std::vector<double> off_;
    double delta_;
};

/// Stage mask over a GridGeometry. Unknowns are the interior and boundary-adjacent
/// nodes; for boundary-adjacent nodes each leg that leaves the stage domain is cut
/// at the boundary (fraction in (0, 1]) and tagged with the component it hits.
struct Grid {
    std::shared_ptr<const GridGeometry> geom;
    StageBoundary stage;
    double h = 0.0;
    int nx = 0, ny = 0;
    cplx origin;
    std::vector<CellKind> mask;
    std::vector<int> index;          // unknown number per node, -1 outside
    std::vector<std::size_t> nodes;  // node id per unknown
    std::vector<std::array<double, 4>> cut;  // legs -x, +x, -y, +y; 1 when the neighbor is an unknown
    std::vector<std::array<int, 4>> cut_comp;  // component hit, -1 when the neighbor is an unknown
    std::vector<std::array<cplx, 4>> cut_point;

    std::size_t n_unknowns() const { return nodes.size(); }
    cplx node(int i, int j) const { return origin + cplx(i * h, j * h); }
    cplx node_of(std::size_t id) const {
        return node(static_cast<int>(id % static_cast<std::size_t>(nx)), static_cast<int>(id / static_cast<std::size_t>(nx)));
    }
    std::size_t id(int i, int j) const { return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i); }
    bool active(std::size_t id) const { return index[id] >= 0; }

    /// Offset of component c at this stage (puncture radius for points).
    double offset(std::size_t c) const {
        return geom->domain().components()[c].kind() == Component::Kind::point ? stage.puncture_radius : stage.epsilon;
    }
    bool finite_data(std::size_t c) const {
        return stage.finite_punctures && geom->domain().components()[c].kind() == Component::Kind::point;
    }
    /// Offset used inside the regularizer: finite-data punctures keep a factor S(|x - p|).
    double reg_offset(std::size_t c) const { return finite_data(c) ? 0.0 : offset(c); }

    /// Stage level function min_c (signed distance_c - offset_c) at a node.
    double phi_node(std::size_t id) const {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < geom->n_components(); ++c) {
            double s = geom->sd(c, id);
            if (std::isnan(s)) return -std::numeric_limits<double>::infinity();
            best = std::min(best, s - offset(c));
        }
        return best;
    }

    double phi(cplx z, std::size_t* which = nullptr) const {
        double best = std::numeric_limits<double>::infinity();
        const auto& comps = geom->domain().components();
        for (std::size_t c = 0; c < comps.size(); ++c) {
            double v = comps[c].signed_distance(z) - offset(c);
            if (v < best) {
                best = v;
                if (which) *which = c;
            }
        }
        return best;
    }
};

inline constexpr double node_exclusion = 1e-6;  // nodes closer than this x h to the stage boundary are dropped

/// Builds the stage mask and cut legs on a precomputed geometry.
inline Grid rasterize(std::shared_ptr<const GridGeometry> geom, const StageBoundary& stage) {
    const auto& dom = geom->domain();
    const double h = geom->h();
    if (stage.epsilon < 0.0 || stage.puncture_radius < 0.0) throw ValidationError("rasterize: negative offset");
    if (stage.epsilon > 0.0 && stage.epsilon < 2.0 * h) {
        throw ValidationError("rasterize: grid too coarse, need epsilon >= 2h (epsilon = " +
                              std::to_string(stage.epsilon) + ", h = " + std::to_string(h) + ")");
    }
    bool has_points = false;
    for (const auto& c : dom.components()) {
        if (c.kind() == Component::Kind::point) {
            has_points = true;
        } else if (stage.epsilon >= 0.5 * c.reach()) {
            throw ValidationError("rasterize: epsilon beyond reach of a boundary component");
        }
    }
    if (has_points && stage.puncture_radius < 2.0 * h) {
        throw ValidationError("rasterize: grid too coarse for puncture radius " + std::to_string(stage.puncture_radius));
    }

    Grid g;
    g.geom = geom;
    g.stage = stage;
    g.h = h;
    g.nx = geom->nx();
    g.ny = geom->ny();
    g.origin = geom->origin();
    const std::size_t nn = geom->size();
    g.mask.assign(nn, CellKind::exterior);
    g.index.assign(nn, -1);
    std::vector<double> ph(nn);
    for (std::size_t id = 0; id < nn; ++id) {
        ph[id] = g.phi_node(id);
        if (ph[id] > node_exclusion * h) {
            g.index[id] = static_cast<int>(g.nodes.size());
            g.nodes.push_back(id);
        }
    }
    if (g.nodes.size() < 16) throw ValidationError("rasterize: grid too coarse, fewer than 16 unknowns");

    const std::size_t nu = g.nodes.size();
    g.cut.assign(nu, {1.0, 1.0, 1.0, 1.0});
    g.cut_comp.assign(nu, {-1, -1, -1, -1});
    g.cut_point.assign(nu, {cplx(0.0), cplx(0.0), cplx(0.0), cplx(0.0)});
    static const int di[4] = {-1, 1, 0, 0};
    static const int dj[4] = {0, 0, -1, 1};

    std::vector<std::size_t> boundary_rows;
    for (std::size_t k = 0; k < nu; ++k) {
        const std::size_t id = g.nodes[k];
        const int i = static_cast<int>(id % static_cast<std::size_t>(g.nx));
        const int j = static_cast<int>(id / static_cast<std::size_t>(g.nx));
        bool adj = false;
        for (int l = 0; l < 4; ++l) {
            const int ii = i + di[l], jj = j + dj[l];
            if (ii < 0 || jj < 0 || ii >= g.nx || jj >= g.ny || g.index[g.id(ii, jj)] < 0) adj = true;
        }
        g.mask[id] = adj ? CellKind::boundary_adjacent : CellKind::interior;
        if (adj) boundary_rows.push_back(k);
    }

    parallel_for(boundary_rows.size(), [&](std::size_t b) {
        const std::size_t k = boundary_rows[b];
        const std::size_t id = g.nodes[k];
        const int i = static_cast<int>(id % static_cast<std::size_t>(g.nx));
        const int j = static_cast<int>(id / static_cast<std::size_t>(g.nx));
        const cplx x = g.node(i, j);
        for (int l = 0; l < 4; ++l) {
            const int ii = i + di[l], jj = j + dj[l];
            if (!(ii < 0 || jj < 0 || ii >= g.nx || jj >= g.ny) && g.index[g.id(ii, jj)] >= 0) continue;
            const cplx dir(di[l] * h, dj[l] * h);
            auto f = [&](double t) { return g.phi(x + t * dir); };
            double t = 1.0;
            std::size_t which = 0;
            const double fend = f(1.0);
            if (fend > 0.0) {
                g.phi(x + dir, &which);
            } else {
                std::uintmax_t iters = 100;
                auto tol = [h](double a, double b2) { return std::abs(b2 - a) * h <= 1e-12 * h; };
                const double f0 = g.phi(x);
                auto r = boost::math::tools::toms748_solve(f, 0.0, 1.0, f0, fend, tol, iters);
                t = 0.5 * (r.first + r.second);
                g.phi(x + t * dir, &which);
                if (t <= 0.0) t = std::numeric_limits<double>::min();
            }
            g.cut[k][static_cast<std::size_t>(l)] = t;
            g.cut_comp[k][static_cast<std::size_t>(l)] = static_cast<int>(which);
            g.cut_point[k][static_cast<std::size_t>(l)] = x + t * dir;
        }
    });
    return g;
}

inline Grid rasterize(const DomainSpec& spec, double h, double epsilon, double puncture_radius = 0.0) {
    auto geom = std::make_shared<const GridGeometry>(spec, h);
    return rasterize(geom, StageBoundary{epsilon, puncture_radius, false});
}

}  // namespace lambda_lab
