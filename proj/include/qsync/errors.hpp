// errors.hpp — exception hierarchy shared by all qsync modules

#pragma once

#include <stdexcept>
#include <string>

namespace qsync {

// Base class so callers can catch anything originating in this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A physical parameter or a derived quantity violates its invariant.
struct ValidationError : Error {
    using Error::Error;
};

// Dressed basis undefined: delta = epsilon = 0 gives a zero Rabi splitting.
struct DegenerateFrame : Error {
    using Error::Error;
};

// An operation received a state tagged with the wrong frame.
struct FrameMismatch : Error {
    using Error::Error;
};

// Argument outside the mathematical domain of a function.
struct DomainError : Error {
    using Error::Error;
};

// Config text could not be parsed; carries a 1-based line number.
struct ParseError : Error {
    int line = 0;
    ParseError(const std::string& msg, int line_number)
        : Error(msg + " (line " + std::to_string(line_number) + ")"), line(line_number) {}
};

// Adaptive step control could not meet the requested tolerances.
struct ToleranceFailure : Error {
    using Error::Error;
};

// A single evolution inside a sweep or command failed.
struct IntegrationFailure : Error {
    using Error::Error;
};

// Trajectory sampling too coarse for the lab-frame rotation.
struct AliasingError : Error {
    using Error::Error;
};

// Not enough post-transient data to classify a trajectory.
struct InsufficientData : Error {
    using Error::Error;
};

// Output file could not be written.
struct IoError : Error {
    using Error::Error;
};

} // namespace qsync
