#pragma once

#include <stdexcept>
#include <string>

namespace vulnaudit {

// Base class for every error the engine raises on its own behalf.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A score, coefficient or field is outside its allowed domain (non-finite
// input, unit-interval violation, bad ordinal).
struct InvalidValueError : Error {
  using Error::Error;
};

// Filesystem / sink failures.
struct IoError : Error {
  using Error::Error;
};

// Configuration file or override is unusable.
struct ConfigError : Error {
  using Error::Error;
};

// Unified diff text violates the format; the message names the hunk.
struct MalformedDiffError : Error {
  using Error::Error;
};

// A commit sample produced no analysable regions.
struct EmptySampleError : Error {
  using Error::Error;
};

// An operation was called in a state its contract forbids.
struct InvalidStateError : Error {
  using Error::Error;
};

// Metric is undefined for the given inputs (e.g. single-class AUROC).
struct UndefinedMetricError : Error {
  using Error::Error;
};

}  // namespace vulnaudit
