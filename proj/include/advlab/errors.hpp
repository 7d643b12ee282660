#pragma once

#include <stdexcept>

namespace advlab {

// Base class for everything thrown by the library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Caller supplied a bad argument, flag, or precondition. CLI exit code 1.
struct value_error : error {
    using error::error;
};

// Shapes of tensors/images/models do not line up.
struct dimension_error : value_error {
    using value_error::value_error;
};

// Class label or element index out of range.
struct index_error : value_error {
    using value_error::value_error;
};

// Input is degenerate for the requested operation (e.g. zero gradients
// everywhere, or a targeted attack aimed at the current prediction).
struct degenerate_error : value_error {
    using value_error::value_error;
};

// File content parses but violates the declared schema.
struct validation_error : value_error {
    using value_error::value_error;
};

// File content is not parseable at all.
struct parse_error : value_error {
    using value_error::value_error;
};

// Filesystem failure. CLI exit code 2.
struct io_error : error {
    using error::error;
};

// Non-finite values surfaced in a numeric pipeline.
struct numeric_error : error {
    using error::error;
};

}  // namespace advlab
