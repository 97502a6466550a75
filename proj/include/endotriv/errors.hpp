#pragma once

#include <stdexcept>
#include <string>

namespace endotriv {

/// Malformed input: bad permutation, non-prime p, non-normal subgroup, ...
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A configured size guard (group order, subgroup count, tensor budget) was hit.
class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

} // namespace endotriv
