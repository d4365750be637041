#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mipost {

/// Observed joint counts of one categorical feature (rows) against the class
/// (columns), plus counts of partially observed instances.
///
/// missing_class[i] counts instances where the feature took value i but the
/// class was not observed; missing_feature[j] counts instances with class j
/// and no feature value.
class ContingencyTable {
public:
    ContingencyTable(std::size_t rows, std::size_t cols);
    ContingencyTable(std::size_t rows, std::size_t cols, std::vector<std::uint64_t> counts,
                     std::vector<std::uint64_t> missing_class = {},
                     std::vector<std::uint64_t> missing_feature = {});

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::uint64_t at(std::size_t i, std::size_t j) const { return counts_[i * cols_ + j]; }
    std::uint64_t& at(std::size_t i, std::size_t j) { return counts_[i * cols_ + j]; }

    std::span<const std::uint64_t> counts() const { return counts_; }
    std::span<const std::uint64_t> missing_class() const { return missing_class_; }
    std::span<const std::uint64_t> missing_feature() const { return missing_feature_; }
    std::uint64_t& missing_class(std::size_t i) { return missing_class_.at(i); }
    std::uint64_t& missing_feature(std::size_t j) { return missing_feature_.at(j); }

    std::uint64_t complete_total() const;
    /// Number of contributing instances, partially observed ones included.
    std::uint64_t total() const;
    bool has_missing() const;

    ContingencyTable transposed() const;

    friend bool operator==(const ContingencyTable&, const ContingencyTable&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::uint64_t> counts_;
    std::vector<std::uint64_t> missing_class_;
    std::vector<std::uint64_t> missing_feature_;
};

enum class PriorKind { uniform, jeffreys, haldane, perks, custom };

/// Per-cell Dirichlet pseudo-count.
class PriorSpec {
public:
    static PriorSpec uniform() { return PriorSpec(PriorKind::uniform, 1.0); }
    static PriorSpec jeffreys() { return PriorSpec(PriorKind::jeffreys, 0.5); }
    static PriorSpec haldane() { return PriorSpec(PriorKind::haldane, 0.0); }
    static PriorSpec perks() { return PriorSpec(PriorKind::perks, 0.0); }
    static PriorSpec custom(double weight);

    /// Parses "uniform", "jeffreys", "haldane", "perks" or a non-negative number.
    static PriorSpec parse(const std::string& text);

    PriorKind kind() const { return kind_; }
    /// Pseudo-count added to each cell of an r x s table.
    double weight(std::size_t rows, std::size_t cols) const;
    std::string name() const;

private:
    PriorSpec(PriorKind kind, double weight) : kind_(kind), weight_(weight) {}
    PriorKind kind_;
    double weight_;
};

/// Prior-augmented counts n_ij = n'_ij + n''_ij with cached marginals.
class PosteriorCounts {
public:
    PosteriorCounts(std::size_t rows, std::size_t cols, std::vector<double> cells);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double at(std::size_t i, std::size_t j) const { return cells_[i * cols_ + j]; }
    std::span<const double> cells() const { return cells_; }

    std::span<const double> row_marginals() const { return row_sums_; }
    std::span<const double> col_marginals() const { return col_sums_; }
    double row(std::size_t i) const { return row_sums_[i]; }
    double col(std::size_t j) const { return col_sums_[j]; }
    double total() const { return total_; }

    bool has_zero_cell() const;
    PosteriorCounts transposed() const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> cells_;
    std::vector<double> row_sums_;
    std::vector<double> col_sums_;
    double total_;
};

struct Marginals {
    std::vector<double> rows;
    std::vector<double> cols;
    double total;
};

/// Tallies (feature value, class) index pairs into an r x s table.
ContingencyTable build_table(std::span<const std::pair<std::size_t, std::size_t>> pairs,
                             std::size_t rows, std::size_t cols);

/// Adds the prior pseudo-count to every observed cell. Throws NumericalError
/// ("zero-cell posterior") when the result has a zero cell, since the moment
/// formulas divide by n_ij.
PosteriorCounts apply_prior(const ContingencyTable& table, const PriorSpec& prior);

/// Same as apply_prior but tolerates zero cells (used where 0 log 0 = 0 applies).
PosteriorCounts add_prior_counts(const ContingencyTable& table, const PriorSpec& prior);

Marginals marginals(const PosteriorCounts& pc);

}  // namespace mipost

namespace mipost {

/// Reads {"r":..,"s":..,"counts":[[..]],"missing_class":[..],"missing_feature":[..]};
/// the missing vectors are optional.
ContingencyTable parse_table_json(const std::string& text);
std::string table_to_json(const ContingencyTable& table);

}  // namespace mipost
