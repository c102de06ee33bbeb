#pragma once

#include <stdexcept>
#include <string>

namespace bkl {

// Argument outside an operation's mathematical domain (r <= 0, bad radius, clock at the
// excluded endpoint, closed-form singularity inside the requested span, ...).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A space whose profile data violate the model-space invariants (phi <= 0, bad pole
// conditions, nonpositive curvature parameter, dimension < 2).
struct InvalidSpaceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An estimate hypothesis fails on the supplied data (u > D, beta - h < 1, K > 0 where a
// flat lower bound is required, nonzero source where none is allowed).
struct HypothesisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The time stepper produced a nonpositive value and ran out of step-size halvings.
struct PositivityError : std::runtime_error {
    PositivityError(const std::string& msg, double t) : std::runtime_error(msg), time(t) {}
    double time;
};

// Malformed config or table text.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem failure.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Config validation failure; the message lists offending field paths.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace bkl
