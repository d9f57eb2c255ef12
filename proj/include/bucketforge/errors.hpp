#pragma once

#include <stdexcept>
#include <string>

namespace bucketforge {

// Bad run configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid or inconsistent model data (CLI exit code 3).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Refusal to start a computation that would exceed a resource cap
// (CLI exit code 4).
class ResourceCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class WidthCapError : public ResourceCapError {
 public:
  using ResourceCapError::ResourceCapError;
};

class StateSpaceCapError : public ResourceCapError {
 public:
  using ResourceCapError::ResourceCapError;
};

// Malformed model file.
class ParseError : public ModelError {
 public:
  using ModelError::ModelError;
};

// Recognized but unsupported model file (e.g. BAYES preamble).
class UnsupportedFormatError : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace bucketforge
