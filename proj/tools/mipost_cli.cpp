// mipost: posterior mutual information, credible-interval feature filters and
// the incremental naive Bayes experiment from the command line.

#include <algorithm>
#include <cerrno>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mipost/dataset.hpp"
#include "mipost/errors.hpp"
#include "mipost/experiment.hpp"
#include "mipost/filters.hpp"
#include "mipost/mc_oracle.hpp"
#include "mipost/mi_core.hpp"
#include "mipost/mi_dist.hpp"
#include "mipost/mi_missing.hpp"
#include "mipost/mi_moments.hpp"

using nlohmann::json;
using namespace mipost;

namespace {

constexpr int kInputError = 1;
constexpr int kNumericalError = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json fit_json(const DistApprox& d, double epsilon) {
    json j{{"family", family_name(d.family)}, {"fell_back", d.fell_back}};
    switch (d.family) {
        case Family::normal: j["params"] = {{"mean", d.mean}, {"variance", d.variance}}; break;
        case Family::gamma: j["params"] = {{"shape", d.shape}, {"scale", d.scale}}; break;
        case Family::beta:
            j["params"] = {{"alpha", d.alpha}, {"beta", d.beta}, {"i_max", d.i_max}};
            break;
        case Family::point_mass: j["params"] = {{"location", d.mean}}; break;
    }
    j["epsilon"] = epsilon;
    j["prob_exceeds_eps"] = prob_exceeds(d, epsilon);
    j["quantile_05"] = quantile(d, 0.05);
    j["quantile_95"] = quantile(d, 0.95);
    return j;
}

struct Common {
    std::string prior = "uniform";
    std::string family = "beta";
    double epsilon = 0.003;
    double p = 0.95;
};

FilterConfig make_config(const Common& c) {
    FilterConfig cfg;
    cfg.epsilon = c.epsilon;
    cfg.p_level = c.p;
    cfg.family = parse_family(c.family);
    cfg.prior = PriorSpec::parse(c.prior);
    return cfg;
}

MissingMode parse_missing(const std::string& text) {
    if (text == "drop") return MissingMode::drop_missing;
    if (text == "keep") return MissingMode::keep_missing;
    throw ConfigError("--missing must be drop or keep");
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

int cmd_mi(const std::string& table_path, const std::string& prior_text,
           const std::string& family_text, double epsilon) {
    const ContingencyTable table = parse_table_json(read_file(table_path));
    const PriorSpec prior = PriorSpec::parse(prior_text);
    const double bound = i_max(table.rows(), table.cols());
    json out{{"r", table.rows()}, {"s", table.cols()}, {"prior", prior.name()}, {"i_max", bound}};

    double mean = 0.0;
    double variance = 0.0;
    if (table.has_missing()) {
        const MissingMoments mm = mi_variance_missing(table, prior);
        if (table.complete_total() > 0) {
            out["J"] = empirical_mi(add_prior_counts(table, prior));
        }
        mean = mm.mean;
        variance = mm.variance;
        json rho_missing = json::array();
        for (const auto& r : mm.rho_missing) rho_missing.push_back(r ? json(*r) : json("inf"));
        out["missing"] = {{"total", mm.total},          {"k_bar", mm.k_bar},
                          {"j_bar", mm.j_bar},          {"q_bar", mm.q_bar},
                          {"p_bar", mm.p_bar},          {"q_bar_i", mm.q_bar_i},
                          {"j_bar_rows", mm.j_bar_rows}, {"rho_missing", rho_missing},
                          {"pi_hat", mm.pi_hat},        {"transposed", mm.transposed},
                          {"variance_clamped", mm.variance_clamped},
                          {"prior_extrapolated", mm.prior_extrapolated}};
    } else {
        const PosteriorCounts pc = apply_prior(table, prior);
        const MiMoments m = mi_variance_approx(pc);
        out["J"] = m.j_term;
        out["K"] = m.k_term;
        out["M"] = m.m_term;
        out["Q"] = m.q_term;
        out["variance_clamped"] = m.variance_clamped;
        mean = m.mean;
        variance = m.variance;
    }
    out["mean"] = mean;
    out["variance"] = variance;
    if (!family_text.empty()) {
        out["fit"] = fit_json(fit_lenient(parse_family(family_text), mean, variance, bound), epsilon);
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_mc(const std::string& table_path, const std::string& prior_text, std::uint64_t samples,
           std::uint64_t seed, const std::string& family_text, const std::string& dump_path,
           unsigned workers) {
    const ContingencyTable table = parse_table_json(read_file(table_path));
    const PosteriorCounts pc = apply_prior(table, PriorSpec::parse(prior_text));
    McOptions opt;
    opt.workers = workers;
    const McSummary s = sample_mi(pc, samples, seed, opt);
    json out{{"sample_count", s.sample_count}, {"seed", s.seed},
             {"mean", s.mean},                 {"variance", s.variance},
             {"mean_std_error", s.mean_std_error}, {"i_max", s.i_max},
             {"binned", s.binned}};
    if (!s.binned) {
        out["quantile_05"] = s.sorted_samples[static_cast<std::size_t>(0.05 * (samples - 1))];
        out["median"] = s.sorted_samples[static_cast<std::size_t>(0.5 * (samples - 1))];
        out["quantile_95"] = s.sorted_samples[static_cast<std::size_t>(0.95 * (samples - 1))];
    }
    if (!family_text.empty()) {
        const MiMoments m = mi_variance_approx(pc);
        const DistApprox d = fit_lenient(parse_family(family_text), m.mean, m.variance, s.i_max);
        out["fit"] = fit_json(d, 0.003);
        out["ks_distance"] = ks_distance(s, d);
        if (s.binned) out["ks_binning_slack"] = ks_binning_slack(s);
    }
    if (!dump_path.empty()) {
        if (s.binned) throw ConfigError("--dump needs stored samples; lower --samples");
        std::ofstream dump(dump_path, std::ios::binary | std::ios::trunc);
        if (!dump) throw std::system_error(errno, std::generic_category(), dump_path);
        for (double v : s.sorted_samples) {
            std::uint64_t bits = 0;
            std::memcpy(&bits, &v, sizeof bits);
            char bytes[8];
            for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xff);
            dump.write(bytes, 8);
        }
        if (!dump) throw std::system_error(errno, std::generic_category(), dump_path);
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

std::vector<ContingencyTable> tally_tables(const Dataset& ds) {
    std::vector<ContingencyTable> tables;
    const auto vocab = ds.vocab_sizes();
    for (std::size_t a = 0; a < ds.attributes(); ++a) tables.emplace_back(vocab[a], ds.classes());
    for (const auto& inst : ds.instances) {
        for (std::size_t a = 0; a < ds.attributes(); ++a) {
            if (inst.values[a]) {
                ++tables[a].at(*inst.values[a], *inst.label);
            } else {
                ++tables[a].missing_feature(*inst.label);
            }
        }
    }
    return tables;
}

int cmd_select(const std::string& data, const LoadOptions& load, const std::string& filter_text,
               const Common& common, const std::string& missing_text) {
    const FilterKind which = parse_filter(filter_text);
    const FilterConfig cfg = make_config(common);
    cfg.validate(which != FilterKind::f);
    const Dataset ds = prepare(load_dataset(data, load), parse_missing(missing_text), 0);
    const auto decisions = decide_all(tally_tables(ds), cfg);
    json kept = json::array();
    json ids = json::array();
    for (const auto& d : decisions) {
        json line{{"attribute", d.attribute},
                  {"name", ds.attribute_names[d.attribute]},
                  {"j", d.j},
                  {"mean", d.mean},
                  {"variance", d.variance},
                  {"prob_exceeds_eps", d.prob_exceeds_eps},
                  {"keep_f", d.keep_f},
                  {"keep_ff", d.keep_ff},
                  {"keep_bf", d.keep_bf},
                  {"degenerate", d.degenerate},
                  {"family", family_name(d.family)},
                  {"fit_fell_back", d.fit_fell_back},
                  {"used_missing_moments", d.used_missing_moments}};
        std::cout << line.dump() << '\n';
        if (d.keep(which)) {
            kept.push_back(ds.attribute_names[d.attribute]);
            ids.push_back(d.attribute);
        }
    }
    std::cout << json{{"filter", filter_name(which)}, {"kept", kept}, {"ids", ids}}.dump() << '\n';
    return 0;
}

int cmd_run(const std::string& data, const LoadOptions& load, const std::string& filters_text,
            const Common& common, std::uint64_t seed, const std::string& missing_text,
            const std::string& out_path, const std::string& format) {
    std::vector<FilterKind> filters;
    for (const auto& f : split_commas(filters_text)) filters.push_back(parse_filter(f));
    const FilterConfig cfg = make_config(common);
    if (format != "csv" && format != "json") throw ConfigError("--format must be csv or json");
    const MissingMode missing = parse_missing(missing_text);
    const Dataset ds = prepare(load_dataset(data, load), missing, seed);
    const RunReport report = run_incremental(ds, cfg, filters, seed, missing);
    write_report(report, out_path, format == "csv" ? ReportFormat::csv : ReportFormat::json);
    json summary = json::array();
    for (const auto& r : report.runs) {
        summary.push_back({{"filter", filter_name(r.filter)},
                           {"final_accuracy", r.final_accuracy},
                           {"average_selected", r.average_selected}});
    }
    std::cout << json{{"instances", report.instances}, {"runs", summary}, {"out", out_path}}.dump(2)
              << '\n';
    return 0;
}

int cmd_ttest(const std::string& report_path, const std::string& pair_text) {
    const RunReport report = read_report(report_path);
    const auto names = split_commas(pair_text);
    if (names.size() != 2) throw ConfigError("--pair needs two filters, e.g. ff,f");
    const FilterRun& a = report.run(parse_filter(names[0]));
    const FilterRun& b = report.run(parse_filter(names[1]));
    const PairComparison cmp = compare_runs(a, b);
    json ranges = json::array();
    std::size_t k = 0;
    while (k < cmp.significant.size()) {
        if (!cmp.significant[k]) {
            ++k;
            continue;
        }
        std::size_t end = k;
        while (end + 1 < cmp.significant.size() && cmp.significant[end + 1]) ++end;
        ranges.push_back({k + 1, end + 1});
        k = end + 1;
    }
    json out{{"a", names[0]}, {"b", names[1]}, {"instances", report.instances},
             {"accuracy_a", a.final_accuracy}, {"accuracy_b", b.final_accuracy},
             {"significant_ranges", ranges}};
    if (report.instances >= 2) {
        const TTestResult last = paired_t_test(a.correct, b.correct, report.instances);
        out["t"] = std::isfinite(last.t) ? json(last.t) : json(last.t > 0 ? "inf" : "-inf");
        out["critical"] = last.critical;
        out["significant"] = last.significant;
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_discretize(const std::string& data, const LoadOptions& load, std::size_t bins,
                   const std::string& out_path) {
    std::ifstream in(data);
    if (!in) throw InputError("cannot open data file '" + data + "'");
    CsvTable table = read_csv(in, load.delimiter, load.header);
    std::size_t class_col = table.header.size() - 1;
    if (!load.class_column.empty()) {
        const auto it = std::find(table.header.begin(), table.header.end(), load.class_column);
        const bool numeric = std::all_of(load.class_column.begin(), load.class_column.end(),
                                         [](unsigned char ch) { return std::isdigit(ch); });
        if (it != table.header.end()) {
            class_col = static_cast<std::size_t>(it - table.header.begin());
        } else if (numeric && std::stoul(load.class_column) < table.header.size()) {
            class_col = std::stoul(load.class_column);
        } else {
            throw InputError("class column '" + load.class_column + "' not found");
        }
    }
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c == class_col) continue;
        std::vector<double> values;
        std::vector<std::size_t> rows;
        bool numeric = true;
        for (std::size_t r = 0; r < table.rows.size() && numeric; ++r) {
            const std::string& cell = table.rows[r][c];
            if (cell == load.missing_token) continue;
            std::size_t used = 0;
            try {
                values.push_back(std::stod(cell, &used));
            } catch (const std::exception&) {
                used = 0;
            }
            numeric = used != 0 && used == cell.size();
            rows.push_back(r);
        }
        if (!numeric || values.empty()) continue;
        const Discretized d = discretize_equal_frequency(values, bins);
        if (d.warning) std::cerr << "warning: column '" << table.header[c] << "': " << *d.warning << '\n';
        for (std::size_t k = 0; k < rows.size(); ++k) table.rows[rows[k]][c] = d.labels[k];
    }
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw std::system_error(errno, std::generic_category(), out_path);
    write_csv(out, table, load.delimiter);
    if (!out) throw std::system_error(errno, std::generic_category(), out_path);
    return 0;
}

void add_load_options(CLI::App* cmd, LoadOptions& load, std::string& delimiter, bool& no_header) {
    cmd->add_option("--class", load.class_column, "Class column name or 0-based index (default: last)");
    cmd->add_option("--delimiter", delimiter, "Field delimiter")->default_val(",");
    cmd->add_flag("--no-header", no_header, "The first line is data, not a header");
    cmd->add_option("--missing-token", load.missing_token, "Marker for unobserved cells")
        ->default_val("?");
}

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--epsilon", c.epsilon, "Relevance threshold in nats")->default_val(0.003);
    cmd->add_option("--p", c.p, "Credible level")->default_val(0.95);
    cmd->add_option("--family", c.family, "normal, gamma or beta")->default_val("beta");
    cmd->add_option("--prior", c.prior, "uniform, jeffreys, haldane, perks or a weight")
        ->default_val("uniform");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Posterior distribution of mutual information and robust feature filters"};
    app.require_subcommand(1);

    std::string table_path, prior = "uniform", family, dump, data, filter, filters = "f,ff,bf";
    std::string missing = "drop", out_path, format = "csv", report_path, pair = "ff,f";
    std::string delimiter = ",";
    bool no_header = false;
    double epsilon = 0.003;
    std::uint64_t samples = 1'000'000, seed = 0;
    unsigned workers = 0;
    std::size_t bins = 0;
    LoadOptions load;
    Common common;

    auto* mi = app.add_subcommand("mi", "Empirical MI, posterior mean and variance of a table");
    mi->add_option("--table", table_path, "Table JSON file")->required();
    mi->add_option("--prior", prior, "uniform, jeffreys, haldane, perks or a weight")
        ->default_val("uniform");
    mi->add_option("--dist", family, "Also fit normal, gamma or beta");
    mi->add_option("--epsilon", epsilon, "Threshold for P(I > epsilon)")->default_val(0.003);

    auto* mc = app.add_subcommand("mc", "Monte Carlo samples of I under the Dirichlet posterior");
    mc->add_option("--table", table_path, "Table JSON file")->required();
    mc->add_option("--prior", prior, "Prior kind")->default_val("uniform");
    mc->add_option("--samples", samples, "Number of draws")->default_val(1'000'000);
    mc->add_option("--seed", seed, "Random seed")->default_val(0);
    mc->add_option("--fit", family, "Compare against a fitted family (KS distance)");
    mc->add_option("--dump", dump, "Write sorted samples as little-endian float64");
    mc->add_option("--workers", workers, "Worker threads (0 = all cores)")->default_val(0);

    auto* select = app.add_subcommand("select", "Apply a feature filter to a CSV data set");
    select->add_option("--data", data, "CSV file")->required();
    select->add_option("--filter", filter, "f, ff or bf")->required();
    select->add_option("--missing", missing, "drop or keep")->default_val("drop");
    add_common(select, common);
    add_load_options(select, load, delimiter, no_header);

    auto* run = app.add_subcommand("run", "Incremental classify-then-update experiment");
    run->add_option("--data", data, "CSV file")->required();
    run->add_option("--filters", filters, "Comma-separated filters")->default_val("f,ff,bf");
    run->add_option("--seed", seed, "Shuffle seed")->default_val(0);
    run->add_option("--missing", missing, "drop or keep")->default_val("drop");
    run->add_option("--out", out_path, "Report path")->required();
    run->add_option("--format", format, "csv or json")->default_val("csv");
    add_common(run, common);
    add_load_options(run, load, delimiter, no_header);

    auto* ttest = app.add_subcommand("ttest", "Paired t tests between two filters of a JSON report");
    ttest->add_option("--report", report_path, "JSON report from `run`")->required();
    ttest->add_option("--pair", pair, "Two filters, e.g. ff,f")->default_val("ff,f");

    auto* disc = app.add_subcommand("discretize", "Equal-frequency binning of numeric columns");
    disc->add_option("--data", data, "CSV file")->required();
    disc->add_option("--bins", bins, "Bins per column")->required();
    disc->add_option("--out", out_path, "Output CSV")->required();
    add_load_options(disc, load, delimiter, no_header);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kInputError;
    }

    try {
        if (delimiter.size() != 1) throw ConfigError("--delimiter must be a single character");
        load.delimiter = delimiter[0];
        load.header = !no_header;
        if (*mi) return cmd_mi(table_path, prior, family, epsilon);
        if (*mc) return cmd_mc(table_path, prior, samples, seed, family, dump, workers);
        if (*select) return cmd_select(data, load, filter, common, missing);
        if (*run) return cmd_run(data, load, filters, common, seed, missing, out_path, format);
        if (*ttest) return cmd_ttest(report_path, pair);
        if (*disc) return cmd_discretize(data, load, bins, out_path);
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::system_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}
