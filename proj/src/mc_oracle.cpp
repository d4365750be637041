#include "mipost/mc_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

#include "mipost/errors.hpp"
#include "mipost/mi_core.hpp"

namespace mipost {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

DrawStream::DrawStream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t a = seed;
    std::uint64_t b = stream ^ 0xD1B54A32D192ED03ULL;
    std::uint64_t state = splitmix64(a) ^ rotl(splitmix64(b), 17);
    for (auto& w : s_) w = splitmix64(state);
}

std::uint64_t DrawStream::next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double DrawStream::uniform() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double DrawStream::normal() {
    constexpr double two_pi = 6.283185307179586476925286766559;
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

double DrawStream::gamma(double shape) {
    if (shape < 1.0) {
        // Shape boosting: Gamma(a) = Gamma(a + 1) * U^(1/a).
        const double g = gamma(shape + 1.0);
        return g * std::exp(std::log(uniform()) / shape);
    }
    // Marsaglia & Tsang squeeze method.
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = 0.0;
        double v = 0.0;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

void sample_dirichlet(std::span<const double> alphas, DrawStream& rng, std::span<double> out) {
    double sum = 0.0;
    for (std::size_t k = 0; k < alphas.size(); ++k) {
        out[k] = rng.gamma(alphas[k]);
        sum += out[k];
    }
    if (!(sum > 0.0)) {
        // Every variate underflowed (all shapes tiny): fall back to the largest shape.
        const auto top = std::max_element(alphas.begin(), alphas.end()) - alphas.begin();
        std::fill(out.begin(), out.end(), 0.0);
        out[static_cast<std::size_t>(top)] = 1.0;
        return;
    }
    for (double& v : out) v /= sum;
}

std::vector<double> draw_chances(const PosteriorCounts& pc, std::uint64_t seed,
                                 std::uint64_t index) {
    DrawStream rng(seed, index);
    std::vector<double> out(pc.cells().size());
    sample_dirichlet(pc.cells(), rng, out);
    return out;
}

namespace {

struct BlockStats {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;
    std::vector<double> chance_sums;
};

std::size_t bin_of(double x, double i_max, std::size_t bins) {
    if (!(i_max > 0.0)) return 0;
    const auto b = static_cast<std::size_t>(x / i_max * static_cast<double>(bins));
    return std::min(b, bins - 1);
}

}  // namespace

McSummary sample_mi(const PosteriorCounts& pc, std::uint64_t sample_count, std::uint64_t seed,
                    const McOptions& options) {
    if (pc.has_zero_cell()) {
        throw NumericalError("zero-cell posterior: Dirichlet sampling needs every n_ij > 0");
    }
    if (sample_count == 0) throw ConfigError("sample_count must be at least 1");
    if (sample_count > options.max_samples) {
        throw ConfigError("sample_count " + std::to_string(sample_count) +
                          " exceeds the storage budget of " +
                          std::to_string(options.max_samples));
    }
    const std::size_t r = pc.rows();
    const std::size_t s = pc.cols();
    const std::size_t cells = r * s;

    McSummary out;
    out.sample_count = sample_count;
    out.seed = seed;
    out.i_max = i_max(r, s);
    out.rows = r;
    out.cols = s;
    out.binned = sample_count > options.max_stored;
    if (out.binned) {
        out.histogram.assign(options.histogram_bins, 0);
    } else {
        out.sorted_samples.assign(sample_count, 0.0);
    }

    // Block layout depends on sample_count only, never on the worker count.
    const std::uint64_t block_size = std::max<std::uint64_t>(4096, (sample_count + 4095) / 4096);
    const std::uint64_t block_count = (sample_count + block_size - 1) / block_size;
    std::vector<BlockStats> blocks(block_count);

    unsigned workers = options.workers ? options.workers : std::thread::hardware_concurrency();
    workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(std::min<std::uint64_t>(
                                                   block_count, 256)));
    std::vector<std::vector<std::uint64_t>> worker_hist(
        workers, std::vector<std::uint64_t>(out.binned ? options.histogram_bins : 0, 0));
    std::atomic<std::uint64_t> next_block{0};

    auto work = [&](unsigned worker) {
        std::vector<double> chances(cells);
        for (;;) {
            const std::uint64_t b = next_block.fetch_add(1);
            if (b >= block_count) return;
            BlockStats& st = blocks[b];
            st.chance_sums.assign(cells, 0.0);
            const std::uint64_t begin = b * block_size;
            const std::uint64_t end = std::min(sample_count, begin + block_size);
            for (std::uint64_t idx = begin; idx < end; ++idx) {
                DrawStream rng(seed, idx);
                sample_dirichlet(pc.cells(), rng, chances);
                const double value =
                    std::min(mutual_information(chances, r, s), out.i_max);
                ++st.count;
                const double delta = value - st.mean;
                st.mean += delta / static_cast<double>(st.count);
                st.m2 += delta * (value - st.mean);
                for (std::size_t k = 0; k < cells; ++k) st.chance_sums[k] += chances[k];
                if (out.binned) {
                    ++worker_hist[worker][bin_of(value, out.i_max, options.histogram_bins)];
                } else {
                    out.sorted_samples[idx] = value;
                }
            }
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }

    // Merge block statistics in block order.
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;
    out.chance_means.assign(cells, 0.0);
    for (const auto& st : blocks) {
        const auto total = count + st.count;
        const double delta = st.mean - mean;
        mean += delta * static_cast<double>(st.count) / static_cast<double>(total);
        m2 += st.m2 + delta * delta * static_cast<double>(count) *
                          static_cast<double>(st.count) / static_cast<double>(total);
        count = total;
        for (std::size_t k = 0; k < cells; ++k) out.chance_means[k] += st.chance_sums[k];
    }
    for (double& c : out.chance_means) c /= static_cast<double>(sample_count);
    out.mean = mean;
    out.variance = sample_count > 1 ? m2 / static_cast<double>(sample_count - 1) : 0.0;
    out.mean_std_error = std::sqrt(out.variance / static_cast<double>(sample_count));

    if (out.binned) {
        for (const auto& h : worker_hist)
            for (std::size_t k = 0; k < h.size(); ++k) out.histogram[k] += h[k];
    } else {
        std::sort(out.sorted_samples.begin(), out.sorted_samples.end());
    }
    return out;
}

double exceedance_fraction(const McSummary& summary, double eps) {
    const double n = static_cast<double>(summary.sample_count);
    if (!summary.binned) {
        const auto it = std::upper_bound(summary.sorted_samples.begin(),
                                         summary.sorted_samples.end(), eps);
        return static_cast<double>(summary.sorted_samples.end() - it) / n;
    }
    const std::size_t bins = summary.histogram.size();
    const std::size_t first = bin_of(eps, summary.i_max, bins);
    std::uint64_t above = 0;
    for (std::size_t k = first + 1; k < bins; ++k) above += summary.histogram[k];
    return static_cast<double>(above) / n;
}

namespace {

// Left limit of the fitted cdf; only the point mass has a jump.
double cdf_left(const DistApprox& d, double x) {
    if (d.family == Family::point_mass) return x > d.mean ? 1.0 : 0.0;
    return cdf(d, x);
}

}  // namespace

double ks_distance(const McSummary& summary, const DistApprox& d) {
    const double n = static_cast<double>(summary.sample_count);
    double worst = 0.0;
    if (!summary.binned) {
        const auto& xs = summary.sorted_samples;
        std::size_t i = 0;
        while (i < xs.size()) {
            std::size_t j = i;
            while (j + 1 < xs.size() && xs[j + 1] == xs[i]) ++j;
            const double below = static_cast<double>(i) / n;
            const double upto = static_cast<double>(j + 1) / n;
            worst = std::max({worst, std::abs(upto - cdf(d, xs[i])),
                              std::abs(below - cdf_left(d, xs[i]))});
            i = j + 1;
        }
        return worst;
    }
    const std::size_t bins = summary.histogram.size();
    std::uint64_t cum = 0;
    worst = std::abs(cdf(d, 0.0) - 0.0);
    for (std::size_t k = 0; k < bins; ++k) {
        cum += summary.histogram[k];
        const double edge = summary.i_max * static_cast<double>(k + 1) / static_cast<double>(bins);
        worst = std::max(worst, std::abs(static_cast<double>(cum) / n - cdf(d, edge)));
    }
    return worst;
}

double ks_binning_slack(const McSummary& summary) {
    if (!summary.binned) return 0.0;
    const auto top = *std::max_element(summary.histogram.begin(), summary.histogram.end());
    return static_cast<double>(top) / static_cast<double>(summary.sample_count);
}

double tail_slope(const McSummary& summary, TailSide side, double q_lo, double q_hi,
                  std::size_t bins) {
    if (summary.binned) throw ConfigError("tail_slope needs stored samples, not a histogram");
    if (!(q_lo > 0.0 && q_lo < q_hi && q_hi <= 0.2)) {
        throw ConfigError("tail window must satisfy 0 < q_lo < q_hi <= 0.2");
    }
    if (summary.sample_count < 100'000) {
        throw NumericalError("insufficient data: tail_slope needs at least 1e5 samples");
    }
    if (bins < 3) throw ConfigError("tail_slope needs at least 3 bins");

    // Distances to the boundary, ascending.
    const auto& xs = summary.sorted_samples;
    std::vector<double> dist;
    const auto n = xs.size();
    const auto lo_idx = static_cast<std::size_t>(q_lo * static_cast<double>(n));
    const auto hi_idx = static_cast<std::size_t>(q_hi * static_cast<double>(n));
    dist.reserve(hi_idx - lo_idx);
    for (std::size_t k = lo_idx; k < hi_idx; ++k) {
        const double v = side == TailSide::lower ? xs[k] : summary.i_max - xs[n - 1 - k];
        if (v > 0.0) dist.push_back(v);
    }
    if (dist.size() < 1000) {
        throw NumericalError("insufficient data: " + std::to_string(dist.size()) +
                             " samples in the tail window, need 1000");
    }
    const double d_lo = dist.front();
    const double d_hi = dist.back();
    if (!(d_hi > d_lo)) throw NumericalError("insufficient data: degenerate tail window");

    const double log_lo = std::log(d_lo);
    const double step = (std::log(d_hi) - log_lo) / static_cast<double>(bins);
    std::vector<std::uint64_t> counts(bins, 0);
    for (double v : dist) {
        auto b = static_cast<std::size_t>((std::log(v) - log_lo) / step);
        counts[std::min(b, bins - 1)]++;
    }
    std::vector<double> xs_fit, ys_fit;
    for (std::size_t b = 0; b < bins; ++b) {
        if (counts[b] == 0) continue;
        const double left = std::exp(log_lo + step * static_cast<double>(b));
        const double right = std::exp(log_lo + step * static_cast<double>(b + 1));
        const double density =
            static_cast<double>(counts[b]) / (static_cast<double>(n) * (right - left));
        xs_fit.push_back(0.5 * (std::log(left) + std::log(right)));
        ys_fit.push_back(std::log(density));
    }
    if (xs_fit.size() < 3) throw NumericalError("insufficient data: too few populated tail bins");
    const double mx = std::accumulate(xs_fit.begin(), xs_fit.end(), 0.0) / xs_fit.size();
    const double my = std::accumulate(ys_fit.begin(), ys_fit.end(), 0.0) / ys_fit.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < xs_fit.size(); ++k) {
        sxy += (xs_fit[k] - mx) * (ys_fit[k] - my);
        sxx += (xs_fit[k] - mx) * (xs_fit[k] - mx);
    }
    return sxy / sxx;
}

}  // namespace mipost
