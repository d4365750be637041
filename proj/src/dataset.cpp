#include "mipost/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_map>

#include "mipost/errors.hpp"
#include "mipost/mc_oracle.hpp"

namespace mipost {

bool Instance::has_missing() const {
    return !label || std::any_of(values.begin(), values.end(),
                                 [](const CellValue& v) { return !v.has_value(); });
}

std::vector<std::size_t> Dataset::vocab_sizes() const {
    std::vector<std::size_t> out;
    out.reserve(vocabularies.size());
    for (const auto& v : vocabularies) out.push_back(std::max<std::size_t>(v.size(), 1));
    return out;
}

std::uint64_t Dataset::order_hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& inst : instances) {
        for (const auto& v : inst.values) mix(v ? *v + 1 : 0);
        mix(inst.label ? *inst.label + 1 : 0);
    }
    return h;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        const char c = line[k];
        if (c == '"') {
            if (quoted && k + 1 < line.size() && line[k + 1] == '"') {
                cur.push_back('"');
                ++k;
            } else {
                quoted = !quoted;
            }
        } else if (c == delimiter && !quoted) {
            fields.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(trim(cur));
    return fields;
}

}  // namespace

CsvTable read_csv(std::istream& in, char delimiter, bool header) {
    CsvTable out;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_line(line, delimiter);
        if (width == 0) {
            width = fields.size();
        } else if (fields.size() != width) {
            throw InputError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(width) + " fields, found " +
                             std::to_string(fields.size()));
        }
        if (header && out.header.empty()) {
            out.header = std::move(fields);
            continue;
        }
        out.rows.push_back(std::move(fields));
        out.line_numbers.push_back(line_no);
    }
    if (width == 0) throw InputError("empty input: no header and no rows");
    if (!header) {
        for (std::size_t k = 0; k < width; ++k) out.header.push_back("col" + std::to_string(k));
    }
    return out;
}

void write_csv(std::ostream& out, const CsvTable& table, char delimiter) {
    auto emit = [&](const std::vector<std::string>& fields) {
        for (std::size_t k = 0; k < fields.size(); ++k) {
            if (k) out << delimiter;
            const auto& f = fields[k];
            if (f.find(delimiter) != std::string::npos || f.find('"') != std::string::npos) {
                out << '"';
                for (char c : f) {
                    if (c == '"') out << '"';
                    out << c;
                }
                out << '"';
            } else {
                out << f;
            }
        }
        out << '\n';
    };
    emit(table.header);
    for (const auto& row : table.rows) emit(row);
}

Dataset parse_dataset(std::istream& in, const LoadOptions& options, const std::string& source) {
    const CsvTable raw = read_csv(in, options.delimiter, options.header);
    const std::size_t width = raw.header.size();
    if (raw.rows.empty()) throw InputError(source + ": no data rows");

    std::size_t class_col = width - 1;
    if (!options.class_column.empty()) {
        const auto it = std::find(raw.header.begin(), raw.header.end(), options.class_column);
        if (it != raw.header.end()) {
            class_col = static_cast<std::size_t>(it - raw.header.begin());
        } else if (std::all_of(options.class_column.begin(), options.class_column.end(),
                               [](unsigned char c) { return std::isdigit(c); })) {
            class_col = std::stoul(options.class_column);
            if (class_col >= width) {
                throw InputError(source + ": class column index " + options.class_column +
                                 " is out of range");
            }
        } else {
            throw InputError(source + ": class column '" + options.class_column + "' not found");
        }
    }
    if (width < 1) throw InputError(source + ": no columns");

    Dataset ds;
    ds.source = source;
    ds.options = options;
    ds.class_name = raw.header[class_col];
    std::vector<std::size_t> attr_cols;
    for (std::size_t c = 0; c < width; ++c) {
        if (c == class_col) continue;
        attr_cols.push_back(c);
        ds.attribute_names.push_back(raw.header[c]);
    }
    ds.vocabularies.resize(attr_cols.size());
    std::vector<std::unordered_map<std::string, std::size_t>> index(attr_cols.size());
    std::unordered_map<std::string, std::size_t> class_index;

    for (std::size_t r = 0; r < raw.rows.size(); ++r) {
        const auto& row = raw.rows[r];
        Instance inst;
        inst.values.reserve(attr_cols.size());
        for (std::size_t a = 0; a < attr_cols.size(); ++a) {
            const std::string& cell = row[attr_cols[a]];
            if (cell == options.missing_token) {
                inst.values.emplace_back(std::nullopt);
                continue;
            }
            auto [it, fresh] = index[a].try_emplace(cell, ds.vocabularies[a].size());
            if (fresh) ds.vocabularies[a].push_back(cell);
            inst.values.emplace_back(it->second);
        }
        const std::string& label = row[class_col];
        if (label != options.missing_token) {
            auto [it, fresh] = class_index.try_emplace(label, ds.class_vocab.size());
            if (fresh) ds.class_vocab.push_back(label);
            inst.label = it->second;
        }
        ds.instances.push_back(std::move(inst));
    }
    if (ds.class_vocab.empty()) throw InputError(source + ": the class column has no values");
    return ds;
}

Dataset load_dataset(const std::string& path, const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open data file '" + path + "'");
    return parse_dataset(in, options, path);
}

Dataset prepare(const Dataset& dataset, MissingMode mode, std::uint64_t seed) {
    Dataset out = dataset;
    std::erase_if(out.instances, [mode](const Instance& inst) {
        return mode == MissingMode::drop_missing ? inst.has_missing() : !inst.label.has_value();
    });
    // Fisher-Yates with our own generator so the order is portable across standard libraries.
    DrawStream rng(seed, 0x5eed);
    auto& rows = out.instances;
    for (std::size_t i = rows.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
        std::swap(rows[i - 1], rows[std::min(j, i - 1)]);
    }
    return out;
}

Discretized discretize_equal_frequency(const std::vector<double>& column, std::size_t bins) {
    if (bins < 2) throw ConfigError("discretization needs at least 2 bins");
    if (column.empty()) return {{}, {}, 0, std::nullopt};

    std::vector<double> sorted = column;
    std::sort(sorted.begin(), sorted.end());
    const std::vector<double> distinct(sorted.begin(), std::unique(sorted.begin(), sorted.end()));
    sorted.assign(column.begin(), column.end());
    std::sort(sorted.begin(), sorted.end());

    Discretized out;
    if (distinct.size() < bins) {
        out.warning = "only " + std::to_string(distinct.size()) + " distinct value(s) for " +
                      std::to_string(bins) + " bins; using one bin per distinct value";
        out.cuts.assign(distinct.begin(), distinct.end() - 1);
    } else {
        const double last = static_cast<double>(sorted.size() - 1);
        for (std::size_t k = 1; k < bins; ++k) {
            const double h = last * static_cast<double>(k) / static_cast<double>(bins);
            const auto lo = static_cast<std::size_t>(std::floor(h));
            const auto hi = std::min(lo + 1, sorted.size() - 1);
            const double cut = sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
            if (out.cuts.empty() || cut > out.cuts.back()) out.cuts.push_back(cut);
        }
    }
    out.bins = out.cuts.size() + 1;
    out.labels.reserve(column.size());
    for (double v : column) {
        const auto bin = std::lower_bound(out.cuts.begin(), out.cuts.end(), v) - out.cuts.begin();
        out.labels.push_back("bin_" + std::to_string(bin));
    }
    return out;
}

}  // namespace mipost
