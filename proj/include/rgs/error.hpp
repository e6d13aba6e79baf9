#pragma once

#include <stdexcept>
#include <string>

namespace rgs {

// Malformed input: unknown ids, bad documents, words that cannot be read.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A documented hypothesis of an operation does not hold for the given data.
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A formula or construction was requested outside the range where it is stated.
struct ScopeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Internal consistency check failed (e.g. an ill-defined quotient relation).
struct IntegrityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rgs
