#pragma once

#include <stdexcept>
#include <string>

namespace cforge {

// Malformed input: bad dimensions, unparsable files, broken preconditions.
// The CLI maps this to exit code 2.
class ContractError : public std::invalid_argument {
public:
    explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

// A point handed to an evaluator lies outside the set the evaluator is
// defined on (not in the cone, not on the ray, outside M, ...).
class DomainViolation : public std::domain_error {
public:
    explicit DomainViolation(const std::string& what) : std::domain_error(what) {}
};

}  // namespace cforge
