#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mipost/dataset.hpp"
#include "mipost/filters.hpp"

namespace mipost {

struct TTestResult {
    double t = 0.0;
    double critical = 0.0;
    std::size_t df = 0;
    bool significant = false;
};

/// Two-tailed paired t test at level 0.05 on the first k entries of two 0/1
/// correctness sequences. Zero spread: t = 0 when the mean difference is 0,
/// otherwise t = +-inf and significant.
TTestResult paired_t_test(std::span<const std::uint8_t> correct_a,
                          std::span<const std::uint8_t> correct_b, std::size_t k);

/// Two-tailed 0.05 critical value of Student's t with df degrees of freedom.
double t_critical_05(std::size_t df);

/// Per-instance trace of one filter in an incremental run.
struct FilterRun {
    FilterKind filter = FilterKind::f;
    std::vector<std::size_t> predicted;
    std::vector<std::uint8_t> correct;
    std::vector<double> running_accuracy;
    std::vector<std::size_t> selected_count;
    double final_accuracy = 0.0;
    double average_selected = 0.0;
    std::uint64_t order_hash = 0;

    friend bool operator==(const FilterRun&, const FilterRun&) = default;
};

/// Paired comparison of two filters at every prefix length k (entry k-1).
/// Entries for k < 2 are t = 0, not significant.
struct PairComparison {
    FilterKind a = FilterKind::f;
    FilterKind b = FilterKind::f;
    std::vector<double> t;
    std::vector<std::uint8_t> significant;

    friend bool operator==(const PairComparison&, const PairComparison&) = default;
};

struct RunConfigEcho {
    double epsilon = 0.003;
    double p_level = 0.95;
    std::string prior = "uniform";
    std::string family = "beta";
    std::uint64_t seed = 0;
    std::string missing = "drop";

    friend bool operator==(const RunConfigEcho&, const RunConfigEcho&) = default;
};

struct RunReport {
    RunConfigEcho config;
    std::size_t instances = 0;
    std::size_t attributes = 0;
    std::vector<FilterRun> runs;
    std::vector<PairComparison> pairs;

    const FilterRun& run(FilterKind kind) const;
    friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// Classify-then-update over the dataset in its given order: at step t the
/// attribute-by-class tables of instances 1..t-1 feed the filters, the naive
/// Bayes predicts instance t from each filter's subset, then learns it. All
/// filters share the instance order; pairs are compared with the t test.
RunReport run_incremental(const Dataset& dataset, const FilterConfig& cfg,
                          const std::vector<FilterKind>& filters, std::uint64_t seed = 0,
                          MissingMode missing = MissingMode::drop_missing);

/// Computes t statistics and significance flags for every prefix length.
PairComparison compare_runs(const FilterRun& a, const FilterRun& b);

enum class ReportFormat { csv, json };

std::string report_to_json(const RunReport& report);
RunReport report_from_json(const std::string& text);
std::string report_to_csv(const RunReport& report);
/// Writes the report; I/O failures throw std::system_error.
void write_report(const RunReport& report, const std::string& path, ReportFormat format);
RunReport read_report(const std::string& path);

}  // namespace mipost
