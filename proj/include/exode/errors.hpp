#ifndef EXODE_ERRORS_HPP
#define EXODE_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace exode {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte offset of the offending token.
struct SyntaxError : Error {
    SyntaxError(std::size_t offset, std::string expected)
        : Error("syntax error at offset " + std::to_string(offset) + ": expected " + expected),
          offset(offset), expected(std::move(expected)) {}
    std::size_t offset;
    std::string expected;
};

/// Evaluation left the real domain (log of non-positive, 0^-k, negative base with fractional exponent).
struct DomainError : Error {
    using Error::Error;
};

/// A denominator or log argument fell below the sampler guard.
struct NearSingular : DomainError {
    using DomainError::DomainError;
};

struct MissingVariable : Error {
    using Error::Error;
};

/// The sampler could not find enough admissible points in its box.
struct InsufficientSamples : Error {
    using Error::Error;
};

struct ContainsY3 : Error {
    ContainsY3() : Error("expression already depends on y'''") {}
};

struct UnsupportedIntegrand : Error {
    using Error::Error;
};

struct NotExact : Error {
    NotExact() : Error("equation is not exact") {}
};

struct InvalidEquation : Error {
    using Error::Error;
};

} // namespace exode

#endif
