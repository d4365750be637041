#include "mipost/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include <boost/math/distributions/students_t.hpp>

#include "mipost/errors.hpp"
#include "mipost/naive_bayes.hpp"

namespace mipost {

namespace {

// sum_d = sum of differences, sum_sq = sum of squared differences, both exact integers.
TTestResult t_from_sums(long long sum_d, long long sum_sq, std::size_t k) {
    TTestResult out;
    out.df = k - 1;
    out.critical = t_critical_05(out.df);
    const double kd = static_cast<double>(k);
    const double mean = static_cast<double>(sum_d) / kd;
    const double var = (kd * static_cast<double>(sum_sq) -
                        static_cast<double>(sum_d) * static_cast<double>(sum_d)) /
                       (kd * (kd - 1.0));
    if (var <= 0.0) {
        if (sum_d == 0) return out;
        out.t = sum_d > 0 ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
        out.significant = true;
        return out;
    }
    out.t = mean * std::sqrt(kd) / std::sqrt(var);
    out.significant = std::abs(out.t) > out.critical;
    return out;
}

}  // namespace

double t_critical_05(std::size_t df) {
    if (df == 0) throw InputError("t distribution needs at least one degree of freedom");
    static std::map<std::size_t, double> cache;
    static std::mutex guard;
    std::lock_guard lock(guard);
    auto it = cache.find(df);
    if (it != cache.end()) return it->second;
    const boost::math::students_t dist(static_cast<double>(df));
    const double c = boost::math::quantile(boost::math::complement(dist, 0.025));
    cache.emplace(df, c);
    return c;
}

TTestResult paired_t_test(std::span<const std::uint8_t> correct_a,
                          std::span<const std::uint8_t> correct_b, std::size_t k) {
    if (k < 2) throw InputError("paired t test needs k >= 2");
    if (correct_a.size() < k || correct_b.size() < k) {
        throw InputError("paired t test: sequences shorter than k = " + std::to_string(k));
    }
    long long sum_d = 0;
    long long sum_sq = 0;
    for (std::size_t t = 0; t < k; ++t) {
        const long long d = static_cast<long long>(correct_a[t] != 0) -
                            static_cast<long long>(correct_b[t] != 0);
        sum_d += d;
        sum_sq += d * d;
    }
    return t_from_sums(sum_d, sum_sq, k);
}

PairComparison compare_runs(const FilterRun& a, const FilterRun& b) {
    if (a.correct.size() != b.correct.size()) {
        throw InputError("paired runs must cover the same instances");
    }
    PairComparison out;
    out.a = a.filter;
    out.b = b.filter;
    const std::size_t n = a.correct.size();
    out.t.assign(n, 0.0);
    out.significant.assign(n, 0);
    long long sum_d = 0;
    long long sum_sq = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const long long d = static_cast<long long>(a.correct[t] != 0) -
                            static_cast<long long>(b.correct[t] != 0);
        sum_d += d;
        sum_sq += d * d;
        if (t + 1 < 2) continue;
        const TTestResult r = t_from_sums(sum_d, sum_sq, t + 1);
        out.t[t] = r.t;
        out.significant[t] = r.significant ? 1 : 0;
    }
    return out;
}

const FilterRun& RunReport::run(FilterKind kind) const {
    for (const auto& r : runs) {
        if (r.filter == kind) return r;
    }
    throw InputError("report has no run for filter " + filter_name(kind));
}

RunReport run_incremental(const Dataset& dataset, const FilterConfig& cfg,
                          const std::vector<FilterKind>& filters, std::uint64_t seed,
                          MissingMode missing) {
    if (dataset.instances.empty()) throw InputError("incremental run needs at least one instance");
    if (filters.empty()) throw ConfigError("incremental run needs at least one filter");
    const bool credible = std::any_of(filters.begin(), filters.end(),
                                      [](FilterKind k) { return k != FilterKind::f; });
    cfg.validate(credible);

    const std::size_t attrs = dataset.attributes();
    const std::size_t classes = dataset.classes();
    const auto vocab = dataset.vocab_sizes();
    const std::size_t n = dataset.instances.size();

    RunReport report;
    report.config = {cfg.epsilon,
                     cfg.p_level,
                     cfg.prior.name(),
                     family_name(cfg.family),
                     seed,
                     missing == MissingMode::drop_missing ? "drop" : "keep"};
    report.instances = n;
    report.attributes = attrs;

    const std::uint64_t order = dataset.order_hash();
    report.runs.resize(filters.size());
    for (std::size_t f = 0; f < filters.size(); ++f) {
        auto& run = report.runs[f];
        run.filter = filters[f];
        run.order_hash = order;
        run.predicted.reserve(n);
        run.correct.reserve(n);
        run.running_accuracy.reserve(n);
        run.selected_count.reserve(n);
    }

    std::vector<ContingencyTable> tables;
    tables.reserve(attrs);
    for (std::size_t a = 0; a < attrs; ++a) tables.emplace_back(vocab[a], classes);
    NaiveBayes model(vocab, classes);

    std::vector<std::size_t> kept_ids;
    std::vector<std::size_t> hits(filters.size(), 0);
    std::vector<std::size_t> selected_total(filters.size(), 0);
    for (std::size_t t = 0; t < n; ++t) {
        const Instance& inst = dataset.instances[t];
        if (!inst.label) throw InputError("incremental run met an instance without a class");
        if (inst.values.size() != attrs) throw InputError("instance width mismatch");
        if (missing == MissingMode::drop_missing && inst.has_missing()) {
            throw InputError("instance " + std::to_string(t) +
                             " has missing values; prepare the dataset with drop_missing");
        }
        const auto decisions = decide_all(tables, cfg);
        for (std::size_t f = 0; f < filters.size(); ++f) {
            kept_ids.clear();
            for (const auto& d : decisions) {
                if (d.keep(filters[f])) kept_ids.push_back(d.attribute);
            }
            const Prediction pred = model.predict(inst.values, kept_ids);
            auto& run = report.runs[f];
            const bool ok = pred.label == *inst.label;
            hits[f] += ok ? 1 : 0;
            selected_total[f] += kept_ids.size();
            run.predicted.push_back(pred.label);
            run.correct.push_back(ok ? 1 : 0);
            run.running_accuracy.push_back(static_cast<double>(hits[f]) /
                                           static_cast<double>(t + 1));
            run.selected_count.push_back(kept_ids.size());
        }
        for (std::size_t a = 0; a < attrs; ++a) {
            if (inst.values[a]) {
                ++tables[a].at(*inst.values[a], *inst.label);
            } else {
                ++tables[a].missing_feature(*inst.label);
            }
        }
        model.update(inst.values, *inst.label);
    }

    for (std::size_t f = 0; f < filters.size(); ++f) {
        auto& run = report.runs[f];
        run.final_accuracy = run.running_accuracy.back();
        run.average_selected = static_cast<double>(selected_total[f]) / static_cast<double>(n);
    }
    for (std::size_t a = 0; a < filters.size(); ++a) {
        for (std::size_t b = a + 1; b < filters.size(); ++b) {
            report.pairs.push_back(compare_runs(report.runs[a], report.runs[b]));
        }
    }
    return report;
}

}  // namespace mipost
