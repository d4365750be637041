#include "mipost/mi_moments.hpp"

#include <algorithm>
#include <cmath>

#include "mipost/errors.hpp"
#include "mipost/mi_core.hpp"

namespace mipost {

namespace {

void require_positive_cells(const PosteriorCounts& pc) {
    if (pc.has_zero_cell()) {
        throw NumericalError("zero-cell posterior: moment formulas need every n_ij > 0");
    }
}

}  // namespace

double mi_mean_exact(const PosteriorCounts& pc) {
    require_positive_cells(pc);
    const double n = pc.total();
    const double psi_total = digamma(n + 1.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < pc.rows(); ++i) {
        const double psi_row = digamma(pc.row(i) + 1.0);
        for (std::size_t j = 0; j < pc.cols(); ++j) {
            const double c = pc.at(i, j);
            sum += c * (digamma(c + 1.0) - psi_row - digamma(pc.col(j) + 1.0) + psi_total);
        }
    }
    return std::clamp(sum / n, 0.0, i_max(pc.rows(), pc.cols()));
}

MiMoments mi_variance_approx(const PosteriorCounts& pc) {
    require_positive_cells(pc);
    MiMoments out;
    out.mean = mi_mean_exact(pc);

    const double n = pc.total();
    double k = 0.0, j = 0.0, m = 0.0, q = 1.0;
    for (std::size_t i = 0; i < pc.rows(); ++i) {
        const double ni = pc.row(i);
        for (std::size_t jj = 0; jj < pc.cols(); ++jj) {
            const double nj = pc.col(jj);
            const double c = pc.at(i, jj);
            const double log_ratio = std::log(c * n / (ni * nj));
            const double weighted = c / n * log_ratio;
            j += weighted;
            k += weighted * log_ratio;
            m += (1.0 / c - 1.0 / ni - 1.0 / nj + 1.0 / n) * c * log_ratio;
            q -= c * c / (ni * nj);
        }
    }
    out.k_term = k;
    out.j_term = j;
    out.m_term = m;
    out.q_term = q;

    const double dof = static_cast<double>((pc.rows() - 1) * (pc.cols() - 1));
    out.raw_variance = (k - j * j) / (n + 1.0) + (m + dof * (0.5 - j) - q) / ((n + 1.0) * (n + 2.0));
    out.variance_clamped = out.raw_variance < 0.0;
    out.variance = std::max(0.0, out.raw_variance);
    return out;
}

}  // namespace mipost
