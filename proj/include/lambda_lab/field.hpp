#pragma once

// Grid-sampled scalar fields with bicubic (Keys) interpolation.

#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "lambda_lab/error.hpp"
#include "lambda_lab/grid.hpp"

namespace lambda_lab {

enum class FieldKind { plain, u, v };

inline const char* to_string(FieldKind k) {
    switch (k) {
        case FieldKind::u:
            return "u";
        case FieldKind::v:
            return "v";
        default:
            return "plain";
    }
}

/// Keys cubic convolution kernel, a = -1/2.
inline double keys_kernel(double t) {
    t = std::abs(t);
    if (t < 1.0) return (1.5 * t - 2.5) * t * t + 1.0;
    if (t < 2.0) return ((-0.5 * t + 2.5) * t - 4.0) * t + 2.0;
    return 0.0;
}

/// Values on the active nodes of a grid (NaN elsewhere). Fields produced by the
/// solver also carry their smooth part w = u + log s and the regularizer, so that
/// off-grid samples are reconstructed as u = w - log s or v = s e^{-w}.
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(std::shared_ptr<const Grid> grid, FieldKind kind, std::vector<double> values)
        : grid_(std::move(grid)), kind_(kind), values_(std::move(values)) {}

    ScalarField(std::shared_ptr<const Grid> grid, FieldKind kind, std::vector<double> values,
                std::vector<double> smooth, std::shared_ptr<const Regularizer> reg)
        : grid_(std::move(grid)), kind_(kind), values_(std::move(values)), smooth_(std::move(smooth)), reg_(std::move(reg)) {}

    const Grid& grid() const { return *grid_; }
    std::shared_ptr<const Grid> grid_ptr() const { return grid_; }
    FieldKind kind() const { return kind_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& smooth() const { return smooth_; }
    std::shared_ptr<const Regularizer> regularizer() const { return reg_; }
    bool has_smooth_part() const { return !smooth_.empty() && reg_ != nullptr; }

    double at(int i, int j) const { return values_[grid_->id(i, j)]; }

    /// Bicubic interpolation of the stored node values (or of the smooth part when present).
    double sample(cplx z) const {
        if (has_smooth_part()) {
            const double w = interpolate(smooth_, z);
            const double ls = reg_->log_s(z);
            switch (kind_) {
                case FieldKind::u:
                    return w - ls;
                case FieldKind::v:
                    return std::exp(ls - w);
                default:
                    return w;
            }
        }
        return interpolate(values_, z);
    }

    double interpolate(const std::vector<double>& data, cplx z) const {
        const Grid& g = *grid_;
        const double fx = (z.real() - g.origin.real()) / g.h;
        const double fy = (z.imag() - g.origin.imag()) / g.h;
        const int i0 = static_cast<int>(std::floor(fx));
        const int j0 = static_cast<int>(std::floor(fy));
        if (i0 - 1 < 0 || j0 - 1 < 0 || i0 + 2 >= g.nx || j0 + 2 >= g.ny) {
            throw ValidationError("interpolation stencil leaves the grid");
        }
        double wx[4], wy[4];
        for (int a = 0; a < 4; ++a) {
            wx[a] = keys_kernel(fx - (i0 - 1 + a));
            wy[a] = keys_kernel(fy - (j0 - 1 + a));
        }
        double total = 0.0;
        for (int b = 0; b < 4; ++b) {
            double row = 0.0;
            for (int a = 0; a < 4; ++a) {
                const double v = data[g.id(i0 - 1 + a, j0 - 1 + b)];
                if (std::isnan(v)) {
                    throw ValidationError("interpolation touches exterior cells near (" + std::to_string(z.real()) +
                                          ", " + std::to_string(z.imag()) + ")");
                }
                row += wx[a] * v;
            }
            total += wy[b] * row;
        }
        return total;
    }

private:
    std::shared_ptr<const Grid> grid_;
    FieldKind kind_ = FieldKind::plain;
    std::vector<double> values_;
    std::vector<double> smooth_;
    std::shared_ptr<const Regularizer> reg_;
};

/// Node values of fn on the active nodes of grid.
template <class Fn>
ScalarField sample_function(std::shared_ptr<const Grid> grid, FieldKind kind, Fn&& fn) {
    std::vector<double> vals(grid->mask.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t id : grid->nodes) vals[id] = fn(grid->node_of(id));
    return ScalarField(grid, kind, std::move(vals));
}

}  // namespace lambda_lab
