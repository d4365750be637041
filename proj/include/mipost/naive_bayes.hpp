#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace mipost {

/// Attribute value index; std::nullopt marks an unobserved cell.
using CellValue = std::optional<std::size_t>;

struct Prediction {
    std::size_t label = 0;
    std::vector<double> posterior;
};

/// Incremental categorical naive Bayes with add-one smoothing on the class
/// prior and on every class-conditional table.
class NaiveBayes {
public:
    NaiveBayes(std::vector<std::size_t> vocab, std::size_t classes);

    std::size_t classes() const { return class_counts_.size(); }
    std::size_t attributes() const { return vocab_.size(); }
    std::uint64_t seen() const { return seen_; }
    std::span<const std::uint64_t> class_counts() const { return class_counts_; }
    std::uint64_t cond_count(std::size_t attribute, std::size_t value, std::size_t label) const;
    std::span<const std::size_t> vocab() const { return vocab_; }

    /// Scores each class by (c_j + 1)/(seen + s) * prod_a (c_a[v][j] + 1)/(c_j + |V_a|)
    /// over the selected attributes, in log space. Unobserved cells are skipped.
    /// Ties go to the lowest class index.
    Prediction predict(std::span<const CellValue> instance,
                       std::span<const std::size_t> selected) const;

    void update(std::span<const CellValue> instance, std::size_t label);

    friend bool operator==(const NaiveBayes&, const NaiveBayes&) = default;

private:
    void check_instance(std::span<const CellValue> instance) const;

    std::vector<std::size_t> vocab_;
    std::vector<std::size_t> offsets_;
    std::vector<std::uint64_t> class_counts_;
    /// cond_[offsets_[a] + v * classes + j]
    std::vector<std::uint64_t> cond_;
    std::uint64_t seen_ = 0;
};

}  // namespace mipost
