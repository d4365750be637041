#include "mipost/mi_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mipost/errors.hpp"

namespace mipost {

double mutual_information(std::span<const double> grid, std::size_t rows, std::size_t cols) {
    if (grid.size() != rows * cols) throw InputError("grid shape mismatch");
    std::vector<double> row_sums(rows, 0.0), col_sums(cols, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const double c = grid[i * cols + j];
            row_sums[i] += c;
            col_sums[j] += c;
        }
        total += row_sums[i];
    }
    if (!(total > 0.0)) throw InputError("mutual information of an empty table is undefined");

    double mi = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const double c = grid[i * cols + j];
            if (c <= 0.0) continue;
            mi += c * std::log(c * total / (row_sums[i] * col_sums[j]));
        }
    }
    // Rounding can push an independent table a hair below zero.
    return std::max(0.0, mi / total);
}

double empirical_mi(const PosteriorCounts& pc) {
    if (!(pc.total() > 0.0)) throw InputError("empirical MI needs a positive total count");
    return mutual_information(pc.cells(), pc.rows(), pc.cols());
}

double i_max(std::size_t rows, std::size_t cols) {
    const auto m = std::min(rows, cols);
    return m <= 1 ? 0.0 : std::log(static_cast<double>(m));
}

double digamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw NumericalError("digamma requires a finite positive argument, got " +
                             std::to_string(x));
    }
    // Lift with psi(x) = psi(x + 1) - 1/x until the asymptotic series is accurate.
    double shift = 0.0;
    while (x < 8.0) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // Bernoulli terms B_2k / (2k x^2k), k = 1..7.
    const double series =
        inv2 * (1.0 / 12.0 -
                 inv2 * (1.0 / 120.0 -
                         inv2 * (1.0 / 252.0 -
                                 inv2 * (1.0 / 240.0 -
                                         inv2 * (1.0 / 132.0 -
                                                 inv2 * (691.0 / 32760.0 -
                                                         inv2 * (1.0 / 12.0)))))));
    return shift + std::log(x) - 0.5 * inv - series;
}

}  // namespace mipost
