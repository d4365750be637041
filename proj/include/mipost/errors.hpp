#pragma once

#include <stdexcept>
#include <string>

namespace mipost {

/// Malformed or out-of-range input (bad indices, ragged rows, mixed cardinalities).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A formula is undefined for the given counts (zero cells, infeasible fits).
class NumericalError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid configuration (thresholds, sample budgets).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace mipost
