#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mipost/naive_bayes.hpp"

namespace mipost {

struct LoadOptions {
    char delimiter = ',';
    bool header = true;
    /// Column name, or a 0-based index written as digits; empty means the last column.
    std::string class_column;
    std::string missing_token = "?";
};

struct Instance {
    std::vector<CellValue> values;
    std::optional<std::size_t> label;

    bool has_missing() const;
    friend bool operator==(const Instance&, const Instance&) = default;
};

/// Categorical data set with vocabularies in first-appearance order.
struct Dataset {
    std::vector<std::string> attribute_names;
    std::vector<std::vector<std::string>> vocabularies;
    std::string class_name;
    std::vector<std::string> class_vocab;
    std::vector<Instance> instances;
    std::string source;
    LoadOptions options;

    std::size_t attributes() const { return attribute_names.size(); }
    std::size_t classes() const { return class_vocab.size(); }
    std::vector<std::size_t> vocab_sizes() const;
    /// FNV-1a hash of the instance sequence; identifies an instance order.
    std::uint64_t order_hash() const;
};

/// Raw delimited text: optional header plus rows of fields. Throws InputError
/// with the 1-based line number on ragged rows or an empty input.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;
};

CsvTable read_csv(std::istream& in, char delimiter, bool header);
void write_csv(std::ostream& out, const CsvTable& table, char delimiter);

Dataset parse_dataset(std::istream& in, const LoadOptions& options,
                      const std::string& source = "<stream>");
Dataset load_dataset(const std::string& path, const LoadOptions& options = {});

enum class MissingMode { drop_missing, keep_missing };

/// drop_missing removes every row with a missing cell; keep_missing removes
/// only rows whose class is missing. Rows are then shuffled with the seed.
Dataset prepare(const Dataset& dataset, MissingMode mode, std::uint64_t seed);

struct Discretized {
    std::vector<std::string> labels;
    /// Upper edges of all but the last bin; a value v lands in the bin counting cuts < v.
    std::vector<double> cuts;
    std::size_t bins = 0;
    std::optional<std::string> warning;
};

/// Equal-frequency binning on linear-interpolated quantiles, labels "bin_k".
/// With fewer distinct values than bins, each distinct value gets its own bin.
Discretized discretize_equal_frequency(const std::vector<double>& column, std::size_t bins);

}  // namespace mipost
