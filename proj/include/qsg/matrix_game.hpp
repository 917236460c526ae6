#ifndef QSG_MATRIX_GAME_HPP
#define QSG_MATRIX_GAME_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qsg {

struct MatrixGameSolution {
    double value = 0.0;
    std::vector<double> row_strategy; // maximizer
    std::vector<double> col_strategy; // minimizer
};

// Maximin solution of a zero-sum matrix game (row player maximizes), via
// the classic LP transformation: shift M positive, then
//   max 1'w  s.t.  M'w <= 1, w >= 0
// whose optimum gives the column strategy (w / 1'w), the value (1/1'w,
// unshifted), and the row strategy from the duals on the slack columns.
// Dense tableau simplex with Bland's lowest-index rule, so ties resolve
// the same way on every run.
inline MatrixGameSolution solve_matrix_game(std::span<const double> m, int rows, int cols) {
    if (rows < 1 || cols < 1 || m.size() != static_cast<std::size_t>(rows) * cols)
        throw std::invalid_argument("solve_matrix_game: bad matrix shape");
    double lo = m[0];
    for (double x : m) {
        if (!std::isfinite(x)) throw std::invalid_argument("solve_matrix_game: non-finite entry");
        lo = std::min(lo, x);
    }
    const double shift = 1.0 - lo; // entries become >= 1

    // tableau: rows constraints, columns = cols w-vars + rows slacks + rhs
    const int ncols = cols + rows + 1;
    std::vector<std::vector<double>> t(rows, std::vector<double>(ncols, 0.0));
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) t[i][j] = m[static_cast<std::size_t>(i) * cols + j] + shift;
        t[i][cols + i] = 1.0;
        t[i][ncols - 1] = 1.0;
    }
    // objective row holds z_j - c_j; optimal when all >= 0
    std::vector<double> obj(ncols, 0.0);
    for (int j = 0; j < cols; ++j) obj[j] = -1.0;
    std::vector<int> basis(rows);
    for (int i = 0; i < rows; ++i) basis[i] = cols + i;

    const double eps = 1e-11;
    for (int iter = 0; iter < 10000; ++iter) {
        int enter = -1;
        for (int j = 0; j < ncols - 1; ++j) {
            if (obj[j] < -eps) {
                enter = j;
                break;
            }
        }
        if (enter < 0) break; // optimal
        int leave = -1;
        double best_ratio = 0.0;
        for (int i = 0; i < rows; ++i) {
            if (t[i][enter] > eps) {
                const double ratio = t[i][ncols - 1] / t[i][enter];
                if (leave < 0 || ratio < best_ratio - eps) {
                    leave = i;
                    best_ratio = ratio;
                } else if (ratio < best_ratio + eps && basis[i] < basis[leave]) {
                    leave = i;
                    best_ratio = std::min(best_ratio, ratio);
                }
            }
        }
        if (leave < 0)
            throw std::runtime_error("solve_matrix_game: unbounded LP (cannot happen for M' >= 1)");
        // pivot
        const double piv = t[leave][enter];
        for (int j = 0; j < ncols; ++j) t[leave][j] /= piv;
        for (int i = 0; i < rows; ++i) {
            if (i == leave) continue;
            const double f = t[i][enter];
            if (f == 0.0) continue;
            for (int j = 0; j < ncols; ++j) t[i][j] -= f * t[leave][j];
        }
        const double f = obj[enter];
        for (int j = 0; j < ncols; ++j) obj[j] -= f * t[leave][j];
        basis[leave] = enter;
    }

    std::vector<double> w(cols, 0.0);
    for (int i = 0; i < rows; ++i)
        if (basis[i] < cols) w[basis[i]] = t[i][ncols - 1];
    double wsum = 0.0;
    for (double x : w) wsum += x;

    MatrixGameSolution sol;
    sol.value = 1.0 / wsum - shift;
    sol.col_strategy.resize(cols);
    for (int j = 0; j < cols; ++j) sol.col_strategy[j] = std::max(0.0, w[j] / wsum);
    sol.row_strategy.resize(rows);
    double ysum = 0.0;
    for (int i = 0; i < rows; ++i) {
        sol.row_strategy[i] = std::max(0.0, obj[cols + i]); // dual value on slack i
        ysum += sol.row_strategy[i];
    }
    for (double& p : sol.row_strategy) p /= ysum;
    return sol;
}

inline MatrixGameSolution solve_matrix_game(const std::vector<std::vector<double>>& m) {
    const int rows = static_cast<int>(m.size());
    const int cols = rows > 0 ? static_cast<int>(m[0].size()) : 0;
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(rows) * cols);
    for (const auto& r : m) {
        if (static_cast<int>(r.size()) != cols)
            throw std::invalid_argument("solve_matrix_game: ragged matrix");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return solve_matrix_game(flat, rows, cols);
}

// Saddle-point certificate residuals: first component is how far the row
// strategy falls short of guaranteeing the value (max over columns of
// value - p'M), second how far the column strategy overshoots it
// (max over rows of Mq - value). Both are <= 1e-9 for an exact solution.
inline std::pair<double, double> saddle_residuals(std::span<const double> m, int rows, int cols,
                                                  const MatrixGameSolution& sol) {
    double row_short = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < cols; ++j) {
        double pay = 0.0;
        for (int i = 0; i < rows; ++i)
            pay += sol.row_strategy[i] * m[static_cast<std::size_t>(i) * cols + j];
        row_short = std::max(row_short, sol.value - pay);
    }
    double col_over = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < rows; ++i) {
        double pay = 0.0;
        for (int j = 0; j < cols; ++j)
            pay += sol.col_strategy[j] * m[static_cast<std::size_t>(i) * cols + j];
        col_over = std::max(col_over, pay - sol.value);
    }
    return {row_short, col_over};
}

} // namespace qsg

#endif // QSG_MATRIX_GAME_HPP
