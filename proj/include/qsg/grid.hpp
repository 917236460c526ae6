#ifndef QSG_GRID_HPP
#define QSG_GRID_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qsg/game.hpp"

namespace qsg {

// Uniform per-coordinate grid over the q-state box. Cell k of a coordinate
// with n cells covers ((k/n)*width, ((k+1)/n)*width] above the lower bound,
// boundaries belonging to the lower cell; the representative point of each
// cell is its center. delta certifies sup_z ||z - center(cell(z))||_1.
struct QuantGrid {
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<int> cells; // per coordinate; 1 for zero-width coordinates
    int intervals = 0;      // requested resolution
    double delta = 0.0;

    int dim() const { return static_cast<int>(lower.size()); }

    std::size_t num_states() const {
        std::size_t n = 1;
        for (int c : cells) n *= static_cast<std::size_t>(c);
        return n;
    }

    double center(int coord, int cell) const {
        const double w = upper[coord] - lower[coord];
        return lower[coord] + (cell + 0.5) * w / cells[coord];
    }

    // multi-index of a flat state index (row-major, coordinate 0 outermost)
    std::vector<int> coords(std::size_t index) const {
        std::vector<int> c(lower.size());
        for (int k = dim() - 1; k >= 0; --k) {
            c[k] = static_cast<int>(index % cells[k]);
            index /= cells[k];
        }
        return c;
    }

    std::size_t flat_index(const std::vector<int>& c) const {
        std::size_t idx = 0;
        for (int k = 0; k < dim(); ++k) idx = idx * cells[k] + c[k];
        return idx;
    }

    QState state_center(std::size_t index) const {
        const std::vector<int> c = coords(index);
        QState z(lower.size());
        for (int k = 0; k < dim(); ++k) z[k] = center(k, c[k]);
        return z;
    }
};

inline QuantGrid build_grid_box(std::vector<double> lower, std::vector<double> upper,
                                int intervals) {
    if (intervals < 1) throw std::invalid_argument("build_grid: intervals must be >= 1");
    if (lower.size() != upper.size() || lower.empty())
        throw std::invalid_argument("build_grid: inconsistent bounds");
    QuantGrid g;
    g.lower = std::move(lower);
    g.upper = std::move(upper);
    g.intervals = intervals;
    g.cells.resize(g.lower.size());
    g.delta = 0.0;
    for (int k = 0; k < g.dim(); ++k) {
        const double w = g.upper[k] - g.lower[k];
        if (w < 0.0) throw std::invalid_argument("build_grid: upper < lower");
        // zero-width coordinate collapses to a single cell instead of
        // producing a division by zero
        g.cells[k] = (w == 0.0) ? 1 : intervals;
        g.delta += w / (2.0 * g.cells[k]);
    }
    return g;
}

inline QuantGrid build_grid(const NormalFormGame& game, int intervals, double q0 = 0.0) {
    std::vector<double> lo, hi;
    game.state_bounds(q0, lo, hi);
    if (lo.empty()) throw std::invalid_argument("build_grid: game has no N-types");
    return build_grid_box(std::move(lo), std::move(hi), intervals);
}

// Cell index along one coordinate; boundary values go to the lower cell,
// out-of-box values are clipped.
inline int quantize_coord(const QuantGrid& grid, int coord, double x, bool* clipped = nullptr) {
    const double w = grid.upper[coord] - grid.lower[coord];
    if (grid.cells[coord] == 1 || w == 0.0) {
        if (clipped && (x < grid.lower[coord] || x > grid.upper[coord])) *clipped = true;
        return 0;
    }
    const double t = (x - grid.lower[coord]) / w * grid.cells[coord];
    int k = static_cast<int>(std::ceil(t)) - 1;
    if (k < 0) {
        if (clipped && x < grid.lower[coord]) *clipped = true;
        k = 0;
    } else if (k >= grid.cells[coord]) {
        if (clipped && x > grid.upper[coord]) *clipped = true;
        k = grid.cells[coord] - 1;
    }
    return k;
}

inline std::size_t quantize(const QuantGrid& grid, const QState& z, bool* clipped = nullptr) {
    if (static_cast<int>(z.size()) != grid.dim())
        throw std::invalid_argument("quantize: state dimension mismatch");
    std::size_t idx = 0;
    for (int k = 0; k < grid.dim(); ++k)
        idx = idx * grid.cells[k] + quantize_coord(grid, k, z[k], clipped);
    return idx;
}

} // namespace qsg

#endif // QSG_GRID_HPP
