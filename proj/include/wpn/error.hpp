#pragma once

#include <stdexcept>
#include <string>

namespace wpn {

enum class ErrorKind {
  invalid_argument,
  budget_exceeded,
  overflow,
  capability,
  io,
  format,
  checksum,
  version,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Process exit status for an error: 1 for bad input, 2 for anything the
/// machine could not do (too large, overflow, io).
inline int exit_status(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument:
    case ErrorKind::format:
      return 1;
    default:
      return 2;
  }
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace wpn
