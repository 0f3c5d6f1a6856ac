#pragma once

#include <stdexcept>
#include <string>

namespace sfns {

// Shape/grid mismatches and malformed containers.
struct structural_error : std::invalid_argument {
    explicit structural_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Parameter values outside their admissible range.
struct param_error : std::invalid_argument {
    explicit param_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Configured size caps exceeded (path lengths, partition sizes).
struct size_error : std::length_error {
    explicit size_error(const std::string& msg) : std::length_error(msg) {}
};

// Runtime numerical failures: factorization breakdown, step rejection,
// non-convergent quadrature.
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace sfns
