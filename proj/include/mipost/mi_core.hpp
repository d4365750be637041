#pragma once

#include <cstddef>
#include <span>

#include "mipost/tables.hpp"

namespace mipost {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// Empirical mutual information J = sum_ij (n_ij/n) log(n_ij n / (n_i+ n_+j)) in nats,
/// with 0 log 0 = 0. Throws InputError on a zero total.
double empirical_mi(const PosteriorCounts& pc);

/// Mutual information of a non-negative r x s weight grid (row-major), after
/// normalizing it to a joint distribution. Works for counts and chances alike.
double mutual_information(std::span<const double> grid, std::size_t rows, std::size_t cols);

/// Sharp upper bound min(log r, log s).
double i_max(std::size_t rows, std::size_t cols);

/// Digamma function psi(x) for x > 0, absolute error below 1e-12.
double digamma(double x);

}  // namespace mipost
