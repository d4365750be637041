#include "mipost/mi_missing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mipost/errors.hpp"
#include "mipost/mi_core.hpp"

namespace mipost {

namespace {

std::vector<double> as_reals(std::span<const std::uint64_t> v) {
    return {v.begin(), v.end()};
}

bool any_positive(std::span<const std::uint64_t> v) {
    return std::any_of(v.begin(), v.end(), [](std::uint64_t c) { return c > 0; });
}

std::vector<double> transpose_grid(const std::vector<double>& g, std::size_t rows,
                                   std::size_t cols) {
    std::vector<double> t(g.size());
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) t[j * rows + i] = g[i * cols + j];
    return t;
}

}  // namespace

std::vector<double> fill_estimate(const PosteriorCounts& pc, std::span<const double> missing_rows) {
    if (missing_rows.size() != pc.rows()) {
        throw InputError("missing-count vector must have one entry per row");
    }
    double big_n = pc.total();
    for (std::size_t i = 0; i < pc.rows(); ++i) {
        if (!(missing_rows[i] >= 0.0)) throw InputError("missing counts must be non-negative");
        if (missing_rows[i] > 0.0 && !(pc.row(i) > 0.0)) {
            throw NumericalError("undefined fill: row " + std::to_string(i) +
                                 " has partially observed instances but no complete ones");
        }
        big_n += missing_rows[i];
    }
    if (!(big_n > 0.0)) throw InputError("fill estimate of an empty sample is undefined");

    std::vector<double> pi(pc.cells().size(), 0.0);
    for (std::size_t i = 0; i < pc.rows(); ++i) {
        if (!(pc.row(i) > 0.0)) continue;
        const double row_mass = (pc.row(i) + missing_rows[i]) / big_n;
        for (std::size_t j = 0; j < pc.cols(); ++j) {
            pi[i * pc.cols() + j] = row_mass * pc.at(i, j) / pc.row(i);
        }
    }
    return pi;
}

std::vector<double> fill_estimate(const ContingencyTable& table, const PriorSpec& prior) {
    if (any_positive(table.missing_class()) && any_positive(table.missing_feature())) {
        throw InputError("tables with both variables partially missing are not supported");
    }
    if (any_positive(table.missing_feature())) {
        const ContingencyTable t = table.transposed();
        const auto pi = fill_estimate(add_prior_counts(t, prior), as_reals(t.missing_class()));
        return transpose_grid(pi, t.rows(), t.cols());
    }
    return fill_estimate(add_prior_counts(table, prior), as_reals(table.missing_class()));
}

MissingMoments mi_variance_missing(const PosteriorCounts& pc, std::span<const double> missing_rows) {
    const std::size_t r = pc.rows();
    const std::size_t s = pc.cols();
    MissingMoments out;
    out.rows = r;
    out.cols = s;
    out.pi_hat = fill_estimate(pc, missing_rows);
    out.total = pc.total();
    for (double m : missing_rows) out.total += m;
    const double big_n = out.total;

    std::vector<double> pi_row(r, 0.0), pi_col(s, 0.0);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < s; ++j) {
            pi_row[i] += out.pi_hat[i * s + j];
            pi_col[j] += out.pi_hat[i * s + j];
        }
    }

    out.rho.assign(r * s, 0.0);
    std::vector<double> log_ratio(r * s, 0.0);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < s; ++j) {
            const double p = out.pi_hat[i * s + j];
            const double c = pc.at(i, j);
            // An empty cell has pi_hat = 0 and contributes nothing.
            if (c <= 0.0 || p <= 0.0) continue;
            out.rho[i * s + j] = big_n * p * p / c;
            log_ratio[i * s + j] = std::log(p / (pi_row[i] * pi_col[j]));
        }
    }

    out.rho_missing.assign(r, std::nullopt);
    out.q_bar_i.assign(r, 1.0);
    out.j_bar_rows.assign(r, 0.0);
    out.q_bar = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
        double rho_row = 0.0;
        double j_row = 0.0;
        for (std::size_t j = 0; j < s; ++j) {
            const double rho = out.rho[i * s + j];
            const double l = log_ratio[i * s + j];
            rho_row += rho;
            j_row += rho * l;
            out.k_bar += rho * l * l;
        }
        out.j_bar_rows[i] = j_row;
        if (missing_rows[i] > 0.0) {
            const double rho_miss = big_n * pi_row[i] * pi_row[i] / missing_rows[i];
            out.rho_missing[i] = rho_miss;
            out.q_bar_i[i] = rho_miss / (rho_miss + rho_row);
            out.p_bar += j_row * j_row * out.q_bar_i[i] / rho_miss;
        }
        out.q_bar += rho_row * out.q_bar_i[i];
        out.j_bar += j_row * out.q_bar_i[i];
    }

    out.mean = mutual_information(out.pi_hat, r, s);
    const double j_sq_term = out.q_bar > 0.0 ? out.j_bar * out.j_bar / out.q_bar : 0.0;
    out.raw_variance = (out.k_bar - j_sq_term - out.p_bar) / big_n;
    out.variance_clamped = out.raw_variance < 0.0;
    out.variance = std::max(0.0, out.raw_variance);
    return out;
}

MissingMoments mi_variance_missing(const ContingencyTable& table, const PriorSpec& prior) {
    if (any_positive(table.missing_class()) && any_positive(table.missing_feature())) {
        throw InputError("tables with both variables partially missing are not supported");
    }
    MissingMoments out;
    if (any_positive(table.missing_feature())) {
        const ContingencyTable t = table.transposed();
        out = mi_variance_missing(add_prior_counts(t, prior), as_reals(t.missing_class()));
        out.pi_hat = transpose_grid(out.pi_hat, t.rows(), t.cols());
        out.rho = transpose_grid(out.rho, t.rows(), t.cols());
        out.rows = table.rows();
        out.cols = table.cols();
        out.transposed = true;
    } else {
        out = mi_variance_missing(add_prior_counts(table, prior), as_reals(table.missing_class()));
    }
    out.prior_extrapolated = prior.kind() != PriorKind::uniform;
    return out;
}

double mi_mean_missing(const ContingencyTable& table, const PriorSpec& prior) {
    return mutual_information(fill_estimate(table, prior), table.rows(), table.cols());
}

}  // namespace mipost
