/**
 * Exception types shared by every diffcech module.
 *
 * The CLI maps each family onto an exit code: model/validation failures
 * exit with 1, resource caps with 2, malformed input or usage with 3.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace diffcech {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input that cannot be represented at all (bad JSON, shape mismatch, d∘d ≠ 0).
struct MalformedInput : Error {
    using Error::Error;
};

/// A finite model violates a law it is required to satisfy.
struct ModelError : Error {
    using Error::Error;
};

/// An enumeration exceeded its element cap.
struct ResourceLimit : Error {
    using Error::Error;
};

/// A truncated object is too short for the requested degree.
struct BoundError : Error {
    using Error::Error;
};

}  // namespace diffcech
