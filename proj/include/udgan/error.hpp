#pragma once

#include <stdexcept>
#include <string>

namespace udgan {

// Error taxonomy used across the library. CLI maps these to exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad dimensions, bad layer specs, checkpoint/config mismatch.
struct ConfigError : Error {
    using Error::Error;
};

// Malformed or empty input data (corpus, token ids, vectors).
struct DataError : Error {
    using Error::Error;
};

// Unreadable/unwritable files.
struct IoError : Error {
    using Error::Error;
};

// Divergence during training (NaN/Inf loss).
struct TrainError : Error {
    using Error::Error;
};

// API misuse: backward without forward, empty sequence, shape misuse.
struct UsageError : Error {
    using Error::Error;
};

} // namespace udgan
