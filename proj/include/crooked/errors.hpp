#pragma once

#include <stdexcept>
#include <string>

namespace crooked {

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct IndexError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// A subversion program issued more oracle queries than its declared budget.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotEvaluatedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The ideal permutation failed to find a fresh image within its retry cap.
struct RetryExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Structural misuse of the game engine (wrong game id, exceeded safety caps).
struct HarnessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace crooked
