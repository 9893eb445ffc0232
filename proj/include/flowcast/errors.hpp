#pragma once

#include <stdexcept>
#include <string>

namespace flowcast {

// Dimension mismatch between operands (messages name both shapes).
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A value outside an operation's accepted range.
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Unreadable, inconsistent, or malformed input data.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Column-role declaration does not match the file it describes.
struct SchemaError : DataError {
    using DataError::DataError;
};

// API called out of order (e.g. backward before forward).
struct UsageError : std::logic_error {
    using std::logic_error::logic_error;
};

// Loss became non-finite; message carries the epoch/batch where it happened.
struct TrainingDivergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace flowcast
