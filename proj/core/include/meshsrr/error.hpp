#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace meshsrr {

// Base for all errors raised by the library. Contract violations on inputs
// (dimension mismatch, bad sizes) use std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad experiment configuration, unparsable config text, unknown keys.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Non-finite intermediates or a diverging iteration.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// File system or file-format failures.
class IoError : public Error {
 public:
  using Error::Error;
};

// Non-fatal conditions collected by operations that accept an optional sink.
struct Warnings {
  std::vector<std::string> messages;

  void add(std::string message) { messages.push_back(std::move(message)); }
  bool empty() const { return messages.empty(); }
  std::size_t size() const { return messages.size(); }
};

}  // namespace meshsrr
