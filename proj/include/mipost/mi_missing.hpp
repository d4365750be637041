#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mipost/tables.hpp"

namespace mipost {

/// Leading-order posterior moments of I for a sample in which one variable of
/// some pairs went unobserved.
///
/// The per-row quantities are indexed by the variable that is always observed.
/// When the table only carries missing_feature counts the computation runs on
/// the transposed table, `transposed` is set, and the grids are transposed back
/// to feature x class orientation while the per-row vectors stay indexed by class.
struct MissingMoments {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> pi_hat;
    std::vector<double> rho;
    /// rho_i?; std::nullopt stands for the n_i? = 0 limit rho_i? = infinity.
    std::vector<std::optional<double>> rho_missing;
    std::vector<double> q_bar_i;
    std::vector<double> j_bar_rows;
    double q_bar = 1.0;
    double k_bar = 0.0;
    double j_bar = 0.0;
    double p_bar = 0.0;
    double mean = 0.0;
    double variance = 0.0;
    double raw_variance = 0.0;
    double total = 0.0;
    bool variance_clamped = false;
    bool transposed = false;
    /// The formulas assume a uniform prior; any other prior is an extrapolation.
    bool prior_extrapolated = false;
};

/// Filled-in chance estimates pi_hat_ij = (n_i+ + n_i?)/N * n_ij/n_i+ for the
/// prior-augmented counts `pc` and row-wise missing counts n_i?.
std::vector<double> fill_estimate(const PosteriorCounts& pc, std::span<const double> missing_rows);
std::vector<double> fill_estimate(const ContingencyTable& table, const PriorSpec& prior);

/// E[I] = I(pi_hat) to leading order in 1/N.
double mi_mean_missing(const ContingencyTable& table, const PriorSpec& prior);

/// Var[I] = [K_bar - J_bar^2/Q_bar - P_bar] / N to leading order, together with
/// the mean and every barred intermediate.
MissingMoments mi_variance_missing(const ContingencyTable& table, const PriorSpec& prior);

/// Core evaluation with real-valued row-wise missing counts (n_i?).
MissingMoments mi_variance_missing(const PosteriorCounts& pc, std::span<const double> missing_rows);

}  // namespace mipost
