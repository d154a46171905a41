#pragma once

#include <stdexcept>
#include <string>

namespace ab {

// Error taxonomy used across the library.  Every failure mode carries a
// one-line message suitable for the CLI diagnostic.

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite or otherwise malformed inputs.
struct InputError : Error {
    using Error::Error;
};

// Arguments outside the certified working range, or results not
// representable in double precision.
struct RangeError : Error {
    using Error::Error;
};

// A series failed to meet its tail bound within the allowed term budget.
struct TruncationError : Error {
    using Error::Error;
};

// The Riccati log-derivative hit a pole during interior integration.
struct StiffnessError : Error {
    using Error::Error;
};

// Grid-refinement verification of an ODE result did not converge.
struct ToleranceError : Error {
    using Error::Error;
};

// Channel matching denominator underflowed.
struct DegenerateMatchError : Error {
    using Error::Error;
};

// The quadrature doubling test failed.
struct QuadratureError : Error {
    using Error::Error;
};

// Two local minima of the kappa search are indistinguishable.
struct AmbiguityError : Error {
    using Error::Error;
};

// Power-law fit residual too large.
struct FitError : Error {
    using Error::Error;
};

// Config text is syntactically malformed (carries line/column in message).
struct ParseError : Error {
    using Error::Error;
};

// Config is well-formed but violates a field constraint (names the field).
struct ValidationError : Error {
    using Error::Error;
};

// Invariant violation inside the library; indicates a bug.
struct InternalError : Error {
    using Error::Error;
};

} // namespace ab
