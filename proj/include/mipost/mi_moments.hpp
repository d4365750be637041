#pragma once

#include "mipost/tables.hpp"

namespace mipost {

/// Posterior mean and approximate variance of I with the double-sum
/// intermediates they are built from.
struct MiMoments {
    double mean = 0.0;
    double variance = 0.0;
    /// Variance before clamping; negative only in tiny near-independent tables.
    double raw_variance = 0.0;
    double k_term = 0.0;
    double j_term = 0.0;
    double m_term = 0.0;
    double q_term = 0.0;
    bool variance_clamped = false;
};

/// Exact posterior mean
///   E[I] = (1/n) sum_ij n_ij [psi(n_ij+1) - psi(n_i++1) - psi(n_+j+1) + psi(n+1)].
/// Requires every n_ij > 0.
double mi_mean_exact(const PosteriorCounts& pc);

/// Variance to O(n^-3):
///   (K - J^2)/(n+1) + [M + (r-1)(s-1)(1/2 - J) - Q] / ((n+1)(n+2)).
/// Also fills the exact mean. A negative result is clamped to 0 and flagged.
MiMoments mi_variance_approx(const PosteriorCounts& pc);

}  // namespace mipost
