#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mipost/mi_dist.hpp"
#include "mipost/tables.hpp"

namespace mipost {

/// F keeps attributes whose empirical MI exceeds epsilon; FF keeps them when
/// P(I > epsilon) > p; BF discards them only when P(I <= epsilon) >= p.
enum class FilterKind { f, ff, bf };

FilterKind parse_filter(const std::string& text);
std::string filter_name(FilterKind kind);

struct FilterConfig {
    double epsilon = 0.003;
    double p_level = 0.95;
    Family family = Family::beta;
    PriorSpec prior = PriorSpec::uniform();

    /// Throws ConfigError on epsilon < 0, p outside (0, 1), or epsilon = 0
    /// for a credible-interval filter (P(I = 0) is zero under a Dirichlet posterior).
    void validate(bool credible_filters = true) const;
};

struct FilterDecision {
    std::size_t attribute = 0;
    double j = 0.0;
    double mean = 0.0;
    double variance = 0.0;
    double prob_exceeds_eps = 0.0;
    bool keep_f = false;
    bool keep_ff = false;
    bool keep_bf = false;
    bool degenerate = false;
    /// Family actually used for P(I > eps); differs from the configured one after a fallback.
    Family family = Family::beta;
    bool fit_fell_back = false;
    bool used_missing_moments = false;

    bool keep(FilterKind kind) const;
};

struct KeepFlags {
    bool f;
    bool ff;
    bool bf;
};

/// The three keep rules as pure functions of (J, P(I > eps), eps, p).
KeepFlags keep_flags(double j, double prob_exceeds_eps, double epsilon, double p_level);

/// Evaluates all three filters for one attribute-by-class table. Tables with
/// partially observed instances use the incomplete-sample moments.
FilterDecision decide(const ContingencyTable& table, const FilterConfig& cfg,
                      std::size_t attribute = 0);

std::vector<FilterDecision> decide_all(const std::vector<ContingencyTable>& tables,
                                       const FilterConfig& cfg);

/// Ids of the attributes kept by `which`, in ascending order.
std::vector<std::size_t> select_features(const std::vector<ContingencyTable>& tables,
                                         const FilterConfig& cfg, FilterKind which);

}  // namespace mipost
