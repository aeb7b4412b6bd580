#pragma once

#include <stdexcept>
#include <string>

namespace bsep {

enum class ErrorKind {
  invalid_argument,
  unsupported,
  near_singular,
};

/// Exception carried by every rejected input in the library. The kind lets
/// callers (notably the CLI) map failures onto exit codes without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace bsep
