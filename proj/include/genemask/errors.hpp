#pragma once

#include <stdexcept>
#include <string>

namespace genemask {

/// Base class for all toolkit errors. CLI maps these to exit code 2
/// (bad input / usage); anything else is an internal error (exit 1).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : Error {
    using Error::Error;
};

struct MalformedFasta : Error {
    using Error::Error;
};

struct EmptyCorpus : Error {
    using Error::Error;
};

struct SequenceTooShort : Error {
    using Error::Error;
};

struct IndexOutOfRange : Error {
    using Error::Error;
};

struct UnknownKmer : Error {
    using Error::Error;
};

struct BelowCutoff : Error {
    using Error::Error;
};

struct TableMismatch : Error {
    using Error::Error;
};

struct NonMonotonicStep : Error {
    using Error::Error;
};

struct StepOutOfRange : Error {
    using Error::Error;
};

struct EmptyPlan : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

} // namespace genemask
