#pragma once

#include <stdexcept>
#include <string>

namespace swarmctl {

/// Base class for all library-specific failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An iterative solver exhausted its iteration budget before meeting tolerance.
struct NonConvergence : Error {
    using Error::Error;
};

/// Gain synthesis is undefined for a 1-state chain (the identity transform).
struct DegenerateDimension : Error {
    using Error::Error;
};

/// A diagonal gain entry fell outside the open interval (0, 1).
struct GainOutOfRange : Error {
    using Error::Error;
};

/// A synthesized kernel changed the support of its input matrix.
struct SparsityViolation : Error {
    using Error::Error;
};

/// A dense linear system was numerically singular.
struct SingularSystem : Error {
    using Error::Error;
};

/// A trace is too short for the requested diagnostic window.
struct TraceTooShort : Error {
    using Error::Error;
};

}  // namespace swarmctl
