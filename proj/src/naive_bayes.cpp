#include "mipost/naive_bayes.hpp"

#include <cmath>
#include <string>

#include "mipost/errors.hpp"

namespace mipost {

NaiveBayes::NaiveBayes(std::vector<std::size_t> vocab, std::size_t classes)
    : vocab_(std::move(vocab)), class_counts_(classes, 0) {
    if (classes == 0) throw InputError("naive Bayes needs at least one class");
    std::size_t offset = 0;
    for (std::size_t v : vocab_) {
        if (v == 0) throw InputError("every attribute needs a non-empty vocabulary");
        offsets_.push_back(offset);
        offset += v * classes;
    }
    cond_.assign(offset, 0);
}

std::uint64_t NaiveBayes::cond_count(std::size_t attribute, std::size_t value,
                                     std::size_t label) const {
    return cond_[offsets_.at(attribute) + value * classes() + label];
}

void NaiveBayes::check_instance(std::span<const CellValue> instance) const {
    if (instance.size() != vocab_.size()) {
        throw InputError("instance has " + std::to_string(instance.size()) +
                         " attributes, model expects " + std::to_string(vocab_.size()));
    }
    for (std::size_t a = 0; a < instance.size(); ++a) {
        if (instance[a] && *instance[a] >= vocab_[a]) {
            throw InputError("attribute " + std::to_string(a) + " value index " +
                             std::to_string(*instance[a]) + " is outside its vocabulary of " +
                             std::to_string(vocab_[a]));
        }
    }
}

Prediction NaiveBayes::predict(std::span<const CellValue> instance,
                               std::span<const std::size_t> selected) const {
    check_instance(instance);
    const std::size_t s = classes();
    std::vector<double> log_score(s);
    for (std::size_t j = 0; j < s; ++j) {
        const double cj = static_cast<double>(class_counts_[j]);
        double acc = std::log((cj + 1.0) / (static_cast<double>(seen_) + static_cast<double>(s)));
        for (std::size_t a : selected) {
            if (a >= vocab_.size()) {
                throw InputError("selected attribute " + std::to_string(a) + " does not exist");
            }
            if (!instance[a]) continue;
            const double c = static_cast<double>(cond_count(a, *instance[a], j));
            acc += std::log((c + 1.0) / (cj + static_cast<double>(vocab_[a])));
        }
        log_score[j] = acc;
    }

    Prediction out;
    double top = log_score[0];
    for (std::size_t j = 1; j < s; ++j) {
        if (log_score[j] > top) {
            top = log_score[j];
            out.label = j;
        }
    }
    out.posterior.resize(s);
    double norm = 0.0;
    for (std::size_t j = 0; j < s; ++j) {
        out.posterior[j] = std::exp(log_score[j] - top);
        norm += out.posterior[j];
    }
    for (double& p : out.posterior) p /= norm;
    return out;
}

void NaiveBayes::update(std::span<const CellValue> instance, std::size_t label) {
    check_instance(instance);
    if (label >= classes()) {
        throw InputError("class index " + std::to_string(label) + " is outside " +
                         std::to_string(classes()) + " classes");
    }
    ++class_counts_[label];
    ++seen_;
    for (std::size_t a = 0; a < instance.size(); ++a) {
        if (instance[a]) ++cond_[offsets_[a] + *instance[a] * classes() + label];
    }
}

}  // namespace mipost
