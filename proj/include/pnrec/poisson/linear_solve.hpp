#pragma once

#include <optional>
#include <vector>

#include "pnrec/graded/polynomial.hpp"

namespace pnrec {

/// Exact solution set of A x = b over the rationals: x = particular + span(kernel).
/// `particular` has every free coordinate set to zero.
struct LinearSolution {
    std::vector<Rational> particular;
    std::vector<std::vector<Rational>> kernel;
    std::vector<std::size_t> free_columns;
};

/// Gauss-Jordan elimination. Returns nullopt when the system is inconsistent.
inline std::optional<LinearSolution> solve_linear(std::vector<std::vector<Rational>> a, std::vector<Rational> b,
                                                  std::size_t cols) {
    const std::size_t rows = a.size();
    std::vector<std::size_t> pivot_cols;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[r]);
        std::swap(b[piv], b[r]);
        Rational inv = 1 / a[r][c];
        for (std::size_t k = c; k < cols; ++k) a[r][k] *= inv;
        b[r] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rational f = a[i][c];
            for (std::size_t k = c; k < cols; ++k)
                if (a[r][k] != 0) a[i][k] -= f * a[r][k];
            b[i] -= f * b[r];
        }
        pivot_cols.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (b[i] != 0) return std::nullopt;

    LinearSolution sol;
    sol.particular.assign(cols, Rational(0));
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
        is_pivot[pivot_cols[i]] = true;
        sol.particular[pivot_cols[i]] = b[i];
    }
    for (std::size_t c = 0; c < cols; ++c) {
        if (is_pivot[c]) continue;
        sol.free_columns.push_back(c);
        std::vector<Rational> k(cols, Rational(0));
        k[c] = 1;
        for (std::size_t i = 0; i < pivot_cols.size(); ++i) k[pivot_cols[i]] = -a[i][c];
        sol.kernel.push_back(std::move(k));
    }
    return sol;
}

}  // namespace pnrec
