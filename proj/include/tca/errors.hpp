#pragma once

#include <cstddef>
#include <exception>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tca {

// Broad failure classes; the CLI maps them onto exit codes and the service
// onto HTTP statuses.
enum class ErrorKind {
  parse,       // malformed input text
  integrity,   // structurally valid input that violates a model invariant
  lookup,      // unknown identifier
  contract,    // caller violated a precondition
  config,      // missing or invalid configuration / resource
  transport,   // remote provider unreachable or misbehaving
  cache_miss,  // cached provider asked for text it does not hold
  assignment,  // verb could not be placed in any cluster
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  // line is 1-based; 0 means "no particular line".
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(ErrorKind::parse, line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IntegrityError : public Error {
 public:
  explicit IntegrityError(const std::string& what) : Error(ErrorKind::integrity, what) {}
};

class LookupError : public Error {
 public:
  explicit LookupError(const std::string& what) : Error(ErrorKind::lookup, what) {}
};

class ContractError : public Error {
 public:
  // field is a dotted path to the offending input, when one exists.
  explicit ContractError(const std::string& what, std::string field = {})
      : Error(ErrorKind::contract, what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class TransportError : public Error {
 public:
  TransportError(const std::string& what, bool retryable, int attempts)
      : Error(ErrorKind::transport, what), retryable_(retryable), attempts_(attempts) {}
  bool retryable() const noexcept { return retryable_; }
  int attempts() const noexcept { return attempts_; }

 private:
  bool retryable_;
  int attempts_;
};

class CacheMissError : public Error {
 public:
  explicit CacheMissError(std::vector<std::string> missing);
  const std::vector<std::string>& missing() const noexcept { return missing_; }

 private:
  std::vector<std::string> missing_;
};

class AssignmentError : public Error {
 public:
  explicit AssignmentError(const std::string& what) : Error(ErrorKind::assignment, what) {}
};

// Wraps an error raised inside one pass of the assessment pipeline so callers
// can tell which pass failed. Keeps the original kind.
class PassError : public Error {
 public:
  PassError(std::string pass, const Error& cause, std::exception_ptr original)
      : Error(cause.kind(), pass + " pass: " + cause.what()),
        pass_(std::move(pass)),
        original_(std::move(original)) {}
  const std::string& pass() const noexcept { return pass_; }
  // The exception as originally thrown, for callers needing subclass detail.
  const std::exception_ptr& original() const noexcept { return original_; }

 private:
  std::string pass_;
  std::exception_ptr original_;
};

}  // namespace tca
