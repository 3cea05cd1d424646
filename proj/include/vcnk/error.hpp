#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace vcnk {

// Base for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An enumeration would exceed the configured point budget.
struct ExplosionGuardError : Error {
    using Error::Error;
};

// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

// Instance file could not be parsed or validated.
struct ParseError : Error {
    using Error::Error;
};

// Measure weights do not sum to one.
struct NormalizationError : ParseError {
    using ParseError::ParseError;
};

struct EmptyClassError : Error {
    using Error::Error;
};

struct MissingPointError : Error {
    using Error::Error;
};

struct NotRealizableError : Error {
    using Error::Error;
};

struct NotACoverError : Error {
    using Error::Error;
};

struct NotInImageError : Error {
    using Error::Error;
};

struct InvalidCentersError : Error {
    using Error::Error;
};

struct IndexCollisionError : Error {
    using Error::Error;
};

// Search/enumeration budgets. All values are caps, not targets.
struct Limits {
    std::uint64_t max_points = 10'000'000;  // enumeration grids
    int max_shatter_points = 20;            // |A| in shattering searches
    int max_cover_class = 24;               // exact set-cover class size
    int max_sample_length = 64;             // sample-complexity scan budget
};

}  // namespace vcnk
