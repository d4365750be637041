#include "mipost/tables.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "mipost/errors.hpp"

namespace mipost {

ContingencyTable::ContingencyTable(std::size_t rows, std::size_t cols)
    : ContingencyTable(rows, cols, std::vector<std::uint64_t>(rows * cols, 0)) {}

ContingencyTable::ContingencyTable(std::size_t rows, std::size_t cols,
                                   std::vector<std::uint64_t> counts,
                                   std::vector<std::uint64_t> missing_class,
                                   std::vector<std::uint64_t> missing_feature)
    : rows_(rows),
      cols_(cols),
      counts_(std::move(counts)),
      missing_class_(std::move(missing_class)),
      missing_feature_(std::move(missing_feature)) {
    if (rows_ == 0 || cols_ == 0) {
        throw InputError("contingency table needs r >= 1 and s >= 1");
    }
    if (counts_.size() != rows_ * cols_) {
        throw InputError("contingency table expects " + std::to_string(rows_ * cols_) +
                         " cells, got " + std::to_string(counts_.size()));
    }
    if (missing_class_.empty()) missing_class_.assign(rows_, 0);
    if (missing_feature_.empty()) missing_feature_.assign(cols_, 0);
    if (missing_class_.size() != rows_) {
        throw InputError("missing_class must have length r = " + std::to_string(rows_));
    }
    if (missing_feature_.size() != cols_) {
        throw InputError("missing_feature must have length s = " + std::to_string(cols_));
    }
}

std::uint64_t ContingencyTable::complete_total() const {
    return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::uint64_t ContingencyTable::total() const {
    return complete_total() +
           std::accumulate(missing_class_.begin(), missing_class_.end(), std::uint64_t{0}) +
           std::accumulate(missing_feature_.begin(), missing_feature_.end(), std::uint64_t{0});
}

bool ContingencyTable::has_missing() const {
    auto positive = [](std::uint64_t c) { return c > 0; };
    return std::any_of(missing_class_.begin(), missing_class_.end(), positive) ||
           std::any_of(missing_feature_.begin(), missing_feature_.end(), positive);
}

ContingencyTable ContingencyTable::transposed() const {
    std::vector<std::uint64_t> t(rows_ * cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t[j * rows_ + i] = at(i, j);
    return ContingencyTable(cols_, rows_, std::move(t), missing_feature_, missing_class_);
}

PriorSpec PriorSpec::custom(double weight) {
    if (!(weight >= 0.0) || !std::isfinite(weight)) {
        throw ConfigError("prior weight must be a finite non-negative number");
    }
    return PriorSpec(PriorKind::custom, weight);
}

PriorSpec PriorSpec::parse(const std::string& text) {
    if (text == "uniform") return uniform();
    if (text == "jeffreys") return jeffreys();
    if (text == "haldane") return haldane();
    if (text == "perks") return perks();
    std::size_t used = 0;
    double w = 0.0;
    try {
        w = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw ConfigError("unknown prior '" + text +
                          "' (expected uniform, jeffreys, haldane, perks or a number)");
    }
    return custom(w);
}

double PriorSpec::weight(std::size_t rows, std::size_t cols) const {
    if (kind_ == PriorKind::perks) return 1.0 / static_cast<double>(rows * cols);
    return weight_;
}

std::string PriorSpec::name() const {
    switch (kind_) {
        case PriorKind::uniform: return "uniform";
        case PriorKind::jeffreys: return "jeffreys";
        case PriorKind::haldane: return "haldane";
        case PriorKind::perks: return "perks";
        case PriorKind::custom: {
            std::ostringstream os;
            os << weight_;
            return os.str();
        }
    }
    return "custom";
}

PosteriorCounts::PosteriorCounts(std::size_t rows, std::size_t cols, std::vector<double> cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells)), row_sums_(rows, 0.0),
      col_sums_(cols, 0.0), total_(0.0) {
    if (rows_ == 0 || cols_ == 0 || cells_.size() != rows_ * cols_) {
        throw InputError("posterior counts shape mismatch");
    }
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            const double c = cells_[i * cols_ + j];
            if (!(c >= 0.0) || !std::isfinite(c)) {
                throw InputError("posterior counts must be finite and non-negative");
            }
            row_sums_[i] += c;
            col_sums_[j] += c;
        }
    }
    total_ = std::accumulate(row_sums_.begin(), row_sums_.end(), 0.0);
}

bool PosteriorCounts::has_zero_cell() const {
    return std::any_of(cells_.begin(), cells_.end(), [](double c) { return c <= 0.0; });
}

PosteriorCounts PosteriorCounts::transposed() const {
    std::vector<double> t(cells_.size());
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t[j * rows_ + i] = at(i, j);
    return PosteriorCounts(cols_, rows_, std::move(t));
}

ContingencyTable build_table(std::span<const std::pair<std::size_t, std::size_t>> pairs,
                             std::size_t rows, std::size_t cols) {
    ContingencyTable table(rows, cols);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto [i, j] = pairs[k];
        if (i >= rows || j >= cols) {
            throw InputError("pair #" + std::to_string(k) + " (" + std::to_string(i) + ", " +
                             std::to_string(j) + ") is outside the " + std::to_string(rows) +
                             "x" + std::to_string(cols) + " table");
        }
        ++table.at(i, j);
    }
    return table;
}

PosteriorCounts add_prior_counts(const ContingencyTable& table, const PriorSpec& prior) {
    const double w = prior.weight(table.rows(), table.cols());
    std::vector<double> cells(table.counts().size());
    std::transform(table.counts().begin(), table.counts().end(), cells.begin(),
                   [w](std::uint64_t c) { return static_cast<double>(c) + w; });
    return PosteriorCounts(table.rows(), table.cols(), std::move(cells));
}

PosteriorCounts apply_prior(const ContingencyTable& table, const PriorSpec& prior) {
    PosteriorCounts pc = add_prior_counts(table, prior);
    if (pc.has_zero_cell()) {
        throw NumericalError("zero-cell posterior: prior '" + prior.name() +
                             "' leaves an empty cell and the moment formulas divide by n_ij");
    }
    return pc;
}

Marginals marginals(const PosteriorCounts& pc) {
    return Marginals{{pc.row_marginals().begin(), pc.row_marginals().end()},
                     {pc.col_marginals().begin(), pc.col_marginals().end()},
                     pc.total()};
}

namespace {

std::vector<std::uint64_t> count_vector(const nlohmann::json& v, const char* field) {
    if (!v.is_array()) throw InputError(std::string(field) + " must be an array");
    std::vector<std::uint64_t> out;
    for (const auto& x : v) {
        if (!x.is_number_integer() || x.get<long long>() < 0) {
            throw InputError(std::string(field) + " entries must be non-negative integers");
        }
        out.push_back(x.get<std::uint64_t>());
    }
    return out;
}

}  // namespace

ContingencyTable parse_table_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("table JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("r") || !doc.contains("s") || !doc.contains("counts")) {
        throw InputError("table JSON needs fields r, s and counts");
    }
    const auto r = doc.at("r").get<long long>();
    const auto s = doc.at("s").get<long long>();
    if (r < 1 || s < 1) throw InputError("table JSON: r and s must be >= 1");
    const auto& grid = doc.at("counts");
    if (!grid.is_array() || grid.size() != static_cast<std::size_t>(r)) {
        throw InputError("table JSON: counts must have r rows");
    }
    std::vector<std::uint64_t> cells;
    for (const auto& row : grid) {
        auto v = count_vector(row, "counts row");
        if (v.size() != static_cast<std::size_t>(s)) {
            throw InputError("table JSON: every counts row must have s entries");
        }
        cells.insert(cells.end(), v.begin(), v.end());
    }
    std::vector<std::uint64_t> mc, mf;
    if (doc.contains("missing_class")) mc = count_vector(doc["missing_class"], "missing_class");
    if (doc.contains("missing_feature")) {
        mf = count_vector(doc["missing_feature"], "missing_feature");
    }
    return ContingencyTable(static_cast<std::size_t>(r), static_cast<std::size_t>(s),
                            std::move(cells), std::move(mc), std::move(mf));
}

std::string table_to_json(const ContingencyTable& table) {
    nlohmann::json grid = nlohmann::json::array();
    for (std::size_t i = 0; i < table.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < table.cols(); ++j) row.push_back(table.at(i, j));
        grid.push_back(row);
    }
    nlohmann::json doc{{"r", table.rows()},
                       {"s", table.cols()},
                       {"counts", grid},
                       {"missing_class", std::vector<std::uint64_t>(table.missing_class().begin(),
                                                                    table.missing_class().end())},
                       {"missing_feature",
                        std::vector<std::uint64_t>(table.missing_feature().begin(),
                                                   table.missing_feature().end())}};
    return doc.dump();
}

}  // namespace mipost
