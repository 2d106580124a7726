#pragma once

#include <stdexcept>
#include <string>

namespace mixssl {

// Error taxonomy mirrored by the CLI exit-code contract:
//   ConfigError -> 2, DataError -> 3, NumericError -> 4, CheckpointError -> 5.
// InvalidInput marks violated operation preconditions (shape mismatches etc.)
// and maps to exit code 2 when it escapes to the CLI.

class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

class CheckpointError : public std::runtime_error {
public:
  explicit CheckpointError(const std::string& msg) : std::runtime_error(msg) {}
};

// Corrupt payload (bad magic, truncation, checksum failure).
class CheckpointCorrupt : public CheckpointError {
public:
  explicit CheckpointCorrupt(const std::string& msg) : CheckpointError(msg) {}
};

// Structurally valid checkpoint that does not match the requesting config.
class IncompatibleCheckpoint : public CheckpointError {
public:
  explicit IncompatibleCheckpoint(const std::string& msg) : CheckpointError(msg) {}
};

class InvalidInput : public std::invalid_argument {
public:
  explicit InvalidInput(const std::string& msg) : std::invalid_argument(msg) {}
};

}  // namespace mixssl
