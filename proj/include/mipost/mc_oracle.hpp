#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mipost/mi_dist.hpp"
#include "mipost/tables.hpp"

namespace mipost {

/// xoshiro256** seeded through SplitMix64 from (seed, stream). Every Monte
/// Carlo draw gets its own stream, so results do not depend on how draws are
/// split across threads.
class DrawStream {
public:
    DrawStream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next();
    /// Uniform on the open interval (0, 1).
    double uniform();
    double normal();
    /// Gamma(shape, 1) variate; shape > 0.
    double gamma(double shape);

private:
    std::uint64_t s_[4];
};

/// One point of the Dirichlet(alphas) simplex, via normalized gamma variates.
void sample_dirichlet(std::span<const double> alphas, DrawStream& rng, std::span<double> out);

/// Chance matrix of draw `index` of the stream family `seed`.
std::vector<double> draw_chances(const PosteriorCounts& pc, std::uint64_t seed, std::uint64_t index);

struct McOptions {
    /// 0 picks std::thread::hardware_concurrency().
    unsigned workers = 0;
    /// Above this many draws only a histogram is kept.
    std::uint64_t max_stored = 10'000'000;
    std::size_t histogram_bins = 10'000;
    /// Hard ceiling on the number of draws.
    std::uint64_t max_samples = 2'000'000'000;
};

/// Empirical summary of sampled I values.
struct McSummary {
    std::uint64_t sample_count = 0;
    std::uint64_t seed = 0;
    double mean = 0.0;
    double variance = 0.0;
    double mean_std_error = 0.0;
    double i_max = 0.0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    /// Sorted draws; empty when binned.
    std::vector<double> sorted_samples;
    /// Fixed-width histogram on [0, I_max]; filled only when binned.
    std::vector<std::uint64_t> histogram;
    bool binned = false;
    /// Component-wise sample mean of the chance matrix.
    std::vector<double> chance_means;

    friend bool operator==(const McSummary&, const McSummary&) = default;
};

/// Samples I(pi) for pi ~ Dirichlet(n_ij). Deterministic in (pc, sample_count, seed).
McSummary sample_mi(const PosteriorCounts& pc, std::uint64_t sample_count, std::uint64_t seed,
                    const McOptions& options = {});

/// Fraction of draws strictly above eps.
double exceedance_fraction(const McSummary& summary, double eps);

/// sup |ECDF - cdf| over the sample points (bin edges when binned).
double ks_distance(const McSummary& summary, const DistApprox& d);
/// Extra KS slack of the binned representation: the largest single-bin mass.
double ks_binning_slack(const McSummary& summary);

enum class TailSide { lower, upper };

/// Log-log least-squares slope of the empirical density against the distance
/// to the support boundary, over the tail quantile window (q_lo, q_hi).
/// For the upper side the window is measured from the top.
double tail_slope(const McSummary& summary, TailSide side, double q_lo, double q_hi,
                  std::size_t bins = 20);

}  // namespace mipost
