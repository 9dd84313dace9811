#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rankkit {

// Base of every error raised by the library. The CLI maps each subclass to
// an exit code; see tools/rankkit.cpp.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

// Input outside an operation's mathematical domain (e.g. unrank(0)).
class domain_error : public error {
 public:
  using error::error;
  const char* kind() const noexcept override { return "domain"; }
};

// A supplied function broke the contract a construction relies on, for
// instance a "strong ranker" whose values make a difference negative.
class contract_violation : public error {
 public:
  using error::error;
  const char* kind() const noexcept override { return "contract"; }
};

// Caller asked for something the configuration cannot provide (wrong
// ranker kind, missing compression, non-distinct enumerator...).
class configuration_error : public error {
 public:
  using error::error;
  const char* kind() const noexcept override { return "configuration"; }
};

// A scan limit, horizon or brute-force bound was exhausted.
class resource_error : public error {
 public:
  using error::error;
  const char* kind() const noexcept override { return "resource"; }
};

class parse_error : public error {
 public:
  parse_error(std::string message, std::size_t position)
      : error(message + " at position " + std::to_string(position)),
        position_(position) {}
  const char* kind() const noexcept override { return "parse"; }
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace rankkit
