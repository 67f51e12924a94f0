// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace evsnn {

/// Base class for all toolkit errors. CLI maps these to exit code 1 unless a
/// more specific class below applies.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input data (bad record, bad magic, bad header). Carries a
/// line/offset context in the message. Exit code 2.
struct ParseError : Error {
  using Error::Error;
};

/// Structurally valid input that violates a contract (coordinate out of
/// range, unordered timestamps, geometry mismatch). Exit code 2.
struct ValidationError : Error {
  using Error::Error;
};

/// Bad configuration value (zero window length, overlap >= 1, even Gabor
/// size, zero saturation cap). Exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

/// Operation attempted on an object in the wrong state, e.g. inference
/// through an untrained layer.
struct StateError : Error {
  using Error::Error;
};

/// File could not be read or written.
struct IoError : Error {
  using Error::Error;
};

}  // namespace evsnn
