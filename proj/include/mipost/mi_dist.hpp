#pragma once

#include <cstddef>
#include <string>

namespace mipost {

enum class Family { normal, gamma, beta, point_mass };

Family parse_family(const std::string& text);
std::string family_name(Family f);

/// A two-moment fit of p(I|n) on [0, I_max].
struct DistApprox {
    Family family = Family::point_mass;
    double mean = 0.0;
    double variance = 0.0;
    double shape = 0.0;  ///< gamma k
    double scale = 0.0;  ///< gamma theta
    double alpha = 0.0;  ///< beta, on the rescaled variable I / I_max
    double beta = 0.0;
    double i_max = 0.0;
    /// Set when a requested beta fit was infeasible and a gamma was used instead.
    bool fell_back = false;
};

/// Moment-matched fit. Strict: an infeasible beta moment pair throws
/// NumericalError naming the violated bound. Zero variance or I_max = 0 yields
/// a point mass.
DistApprox fit(Family family, double mean, double variance, double i_max);

/// Like fit(), but an infeasible beta degrades to gamma (and an infeasible
/// gamma to a point mass at the mean) with `fell_back` set.
DistApprox fit_lenient(Family family, double mean, double variance, double i_max);

/// Analytic mean and variance of the fitted distribution.
struct FitMoments {
    double mean;
    double variance;
};
FitMoments fit_moments(const DistApprox& d);

/// P(I <= x).
double cdf(const DistApprox& d, double x);
/// P(I > eps) = 1 - cdf(d, eps).
double prob_exceeds(const DistApprox& d, double eps);
/// Smallest x with cdf(d, x) >= q, by bracketed bisection on the support.
double quantile(const DistApprox& d, double q);

/// Power-law exponents of p(I|n) near I = 0 and near I = I_max.
struct TailExponents {
    double lower;
    double upper;
};
TailExponents tail_exponents(std::size_t rows, std::size_t cols);

}  // namespace mipost
