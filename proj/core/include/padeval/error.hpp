#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace padeval {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed manifest input. line() is 1-based, 0 when not tied to a line.
class ManifestError : public Error {
 public:
  explicit ManifestError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Metric precondition violated (empty sample lists, out-of-range rates, ...).
class MetricsError : public Error {
 public:
  using Error::Error;
};

/// Evaluator-side fault during a run: unreadable image, unwritable checkpoint.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Submission store failures: duplicate ids, unwritable or corrupt store.
class StoreError : public Error {
 public:
  using Error::Error;
};

class RenderError : public Error {
 public:
  using Error::Error;
};

/// Filesystem or file-format failure outside the domain modules.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace padeval
