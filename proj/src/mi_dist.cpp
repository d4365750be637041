#include "mipost/mi_dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "mipost/errors.hpp"

namespace mipost {

Family parse_family(const std::string& text) {
    if (text == "normal") return Family::normal;
    if (text == "gamma") return Family::gamma;
    if (text == "beta") return Family::beta;
    if (text == "point_mass") return Family::point_mass;
    throw ConfigError("unknown distribution family '" + text + "' (normal, gamma, beta)");
}

std::string family_name(Family f) {
    switch (f) {
        case Family::normal: return "normal";
        case Family::gamma: return "gamma";
        case Family::beta: return "beta";
        case Family::point_mass: return "point_mass";
    }
    return "?";
}

namespace {

DistApprox point_mass(double location, double i_max) {
    DistApprox d;
    d.family = Family::point_mass;
    d.mean = location;
    d.i_max = i_max;
    return d;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

DistApprox fit(Family family, double mean, double variance, double i_max) {
    if (!std::isfinite(mean) || !std::isfinite(variance) || variance < 0.0) {
        throw NumericalError("fit needs a finite mean and a finite non-negative variance");
    }
    if (i_max <= 0.0) return point_mass(0.0, 0.0);
    if (variance == 0.0 || family == Family::point_mass) return point_mass(mean, i_max);

    DistApprox d;
    d.family = family;
    d.mean = mean;
    d.variance = variance;
    d.i_max = i_max;
    switch (family) {
        case Family::normal:
            break;
        case Family::gamma:
            if (!(mean > 0.0)) {
                throw NumericalError("infeasible gamma fit: mean " + fmt(mean) + " must be > 0");
            }
            d.shape = mean * mean / variance;
            d.scale = variance / mean;
            break;
        case Family::beta: {
            if (!(mean > 0.0 && mean < i_max)) {
                throw NumericalError("infeasible beta fit: mean " + fmt(mean) +
                                     " outside (0, I_max = " + fmt(i_max) + ")");
            }
            const double bound = mean * (i_max - mean);
            if (!(variance < bound)) {
                throw NumericalError("infeasible beta fit: variance " + fmt(variance) +
                                     " >= mean * (I_max - mean) = " + fmt(bound));
            }
            const double mu = mean / i_max;
            const double var = variance / (i_max * i_max);
            d.alpha = mu * (mu * (1.0 - mu) / var - 1.0);
            d.beta = d.alpha * (1.0 - mu) / mu;
            break;
        }
        case Family::point_mass:
            break;
    }
    return d;
}

DistApprox fit_lenient(Family family, double mean, double variance, double i_max) {
    try {
        return fit(family, mean, variance, i_max);
    } catch (const NumericalError&) {
        if (family != Family::beta && family != Family::gamma) throw;
    }
    DistApprox d;
    try {
        d = fit(Family::gamma, mean, variance, i_max);
    } catch (const NumericalError&) {
        d = point_mass(std::clamp(mean, 0.0, i_max), i_max);
    }
    d.fell_back = true;
    return d;
}

FitMoments fit_moments(const DistApprox& d) {
    switch (d.family) {
        case Family::normal: return {d.mean, d.variance};
        case Family::gamma: return {d.shape * d.scale, d.shape * d.scale * d.scale};
        case Family::beta: {
            const double ab = d.alpha + d.beta;
            return {d.i_max * d.alpha / ab,
                    d.i_max * d.i_max * d.alpha * d.beta / (ab * ab * (ab + 1.0))};
        }
        case Family::point_mass: return {d.mean, 0.0};
    }
    return {0.0, 0.0};
}

double cdf(const DistApprox& d, double x) {
    if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
    switch (d.family) {
        case Family::normal:
            return 0.5 * boost::math::erfc(-(x - d.mean) / std::sqrt(2.0 * d.variance));
        case Family::gamma:
            if (x <= 0.0) return 0.0;
            if (std::isinf(x)) return 1.0;
            return boost::math::gamma_p(d.shape, x / d.scale);
        case Family::beta:
            if (x <= 0.0) return 0.0;
            if (x >= d.i_max) return 1.0;
            return boost::math::ibeta(d.alpha, d.beta, x / d.i_max);
        case Family::point_mass:
            return x >= d.mean ? 1.0 : 0.0;
    }
    return 0.0;
}

double prob_exceeds(const DistApprox& d, double eps) { return 1.0 - cdf(d, eps); }

double quantile(const DistApprox& d, double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw InputError("quantile level must lie in [0, 1]");
    constexpr double inf = std::numeric_limits<double>::infinity();

    double lo = 0.0;
    double hi = 0.0;
    switch (d.family) {
        case Family::point_mass:
            return q == 0.0 ? 0.0 : d.mean;
        case Family::normal: {
            if (q == 0.0) return -inf;
            if (q == 1.0) return inf;
            const double sd = std::sqrt(d.variance);
            lo = d.mean - 40.0 * sd;
            hi = d.mean + 40.0 * sd;
            break;
        }
        case Family::gamma:
            if (q == 0.0) return 0.0;
            if (q == 1.0) return inf;
            return d.scale * boost::math::gamma_p_inv(d.shape, q);
        case Family::beta:
            if (q == 0.0) return 0.0;
            if (q == 1.0) return d.i_max;
            return d.i_max * boost::math::ibeta_inv(d.alpha, d.beta, q);
    }
    // Invariant: cdf(lo) < q <= cdf(hi), up to the bracket ends.
    for (int it = 0; it < 2000; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        if (cdf(d, mid) < q) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

TailExponents tail_exponents(std::size_t rows, std::size_t cols) {
    const double r = static_cast<double>(rows);
    const double s = static_cast<double>(cols);
    const double m = static_cast<double>(std::min(rows, cols));
    return {0.5 * (r - 1.0) * (s - 1.0) - 1.0, 0.5 * (m - 3.0)};
}

}  // namespace mipost
