#pragma once

#include <stdexcept>
#include <string>

namespace locert {

// Base class for everything thrown by this library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Incompatible matrix/tensor/alphabet shapes.
struct shape_error : error {
    using error::error;
};

// A requested object would exceed the configured dimension cap.
struct sizing_error : error {
    using error::error;
};

// Enumeration or trial budget exceeded.
struct budget_error : error {
    using error::error;
};

// An input failed a documented invariant (non-PSD, bad trace, ...).
struct validation_error : error {
    using error::error;
};

// An iterative kernel failed to converge; message carries the residual.
struct numerical_error : error {
    using error::error;
};

// Malformed input file.
struct parse_error : error {
    using error::error;
};

} // namespace locert
