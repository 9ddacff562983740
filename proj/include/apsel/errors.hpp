#pragma once

#include <stdexcept>
#include <string>

namespace apsel {

// Invalid numeric input or configuration (out-of-range value, bad geometry).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// API misuse: calling an operation in the wrong state or with mismatched shapes.
class UsageError : public std::logic_error {
public:
    explicit UsageError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace apsel
