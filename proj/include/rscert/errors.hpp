#pragma once

#include <stdexcept>
#include <string>

namespace rscert {

/// A point was supplied off the unit circle, or an argument lies outside the
/// mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A documented precondition (grid size, ordering, region) does not hold.
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// The request would exceed the configured memory budget.
class CapacityError : public std::length_error {
public:
    explicit CapacityError(const std::string& what) : std::length_error(what) {}
};

} // namespace rscert
