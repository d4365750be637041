#include "mipost/filters.hpp"

#include "mipost/errors.hpp"
#include "mipost/mi_core.hpp"
#include "mipost/mi_missing.hpp"
#include "mipost/mi_moments.hpp"

namespace mipost {

FilterKind parse_filter(const std::string& text) {
    if (text == "f" || text == "F") return FilterKind::f;
    if (text == "ff" || text == "FF") return FilterKind::ff;
    if (text == "bf" || text == "BF") return FilterKind::bf;
    throw ConfigError("unknown filter '" + text + "' (expected f, ff or bf)");
}

std::string filter_name(FilterKind kind) {
    switch (kind) {
        case FilterKind::f: return "f";
        case FilterKind::ff: return "ff";
        case FilterKind::bf: return "bf";
    }
    return "?";
}

void FilterConfig::validate(bool credible_filters) const {
    if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be >= 0");
    if (!(p_level > 0.0 && p_level < 1.0)) throw ConfigError("p must lie in (0, 1)");
    if (credible_filters && epsilon == 0.0) {
        throw ConfigError(
            "epsilon = 0 is meaningless for FF/BF: the posterior probability that I = 0 is zero, "
            "so FF would keep and BF would never discard every attribute");
    }
}

bool FilterDecision::keep(FilterKind kind) const {
    switch (kind) {
        case FilterKind::f: return keep_f;
        case FilterKind::ff: return keep_ff;
        case FilterKind::bf: return keep_bf;
    }
    return false;
}

KeepFlags keep_flags(double j, double prob_exceeds_eps, double epsilon, double p_level) {
    // BF discards iff P(I <= eps) >= p, i.e. keeps iff 1 - P(I > eps) < p.
    return {j > epsilon, prob_exceeds_eps > p_level, 1.0 - prob_exceeds_eps < p_level};
}

FilterDecision decide(const ContingencyTable& table, const FilterConfig& cfg,
                      std::size_t attribute) {
    FilterDecision out;
    out.attribute = attribute;
    out.family = cfg.family;

    const double bound = i_max(table.rows(), table.cols());
    if (bound == 0.0) {
        out.degenerate = true;
        out.family = Family::point_mass;
        return out;
    }

    if (table.complete_total() > 0) {
        out.j = empirical_mi(add_prior_counts(table, PriorSpec::haldane()));
    }

    if (table.has_missing()) {
        const MissingMoments mm = mi_variance_missing(table, cfg.prior);
        out.mean = mm.mean;
        out.variance = mm.variance;
        out.used_missing_moments = true;
    } else {
        const MiMoments m = mi_variance_approx(apply_prior(table, cfg.prior));
        out.mean = m.mean;
        out.variance = m.variance;
    }

    const DistApprox d = fit_lenient(cfg.family, out.mean, out.variance, bound);
    out.family = d.family;
    out.fit_fell_back = d.fell_back;
    out.prob_exceeds_eps = prob_exceeds(d, cfg.epsilon);

    const KeepFlags flags = keep_flags(out.j, out.prob_exceeds_eps, cfg.epsilon, cfg.p_level);
    out.keep_f = flags.f;
    out.keep_ff = flags.ff;
    out.keep_bf = flags.bf;
    return out;
}

std::vector<FilterDecision> decide_all(const std::vector<ContingencyTable>& tables,
                                       const FilterConfig& cfg) {
    std::vector<FilterDecision> out;
    out.reserve(tables.size());
    for (std::size_t a = 0; a < tables.size(); ++a) {
        if (tables[a].cols() != tables.front().cols()) {
            throw InputError("attribute " + std::to_string(a) + " has " +
                             std::to_string(tables[a].cols()) + " classes, expected " +
                             std::to_string(tables.front().cols()));
        }
        out.push_back(decide(tables[a], cfg, a));
    }
    return out;
}

std::vector<std::size_t> select_features(const std::vector<ContingencyTable>& tables,
                                         const FilterConfig& cfg, FilterKind which) {
    std::vector<std::size_t> kept;
    for (const auto& d : decide_all(tables, cfg)) {
        if (d.keep(which)) kept.push_back(d.attribute);
    }
    return kept;
}

}  // namespace mipost
