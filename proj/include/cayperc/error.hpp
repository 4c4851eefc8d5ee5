#pragma once

#include <stdexcept>
#include <string>

namespace cayperc {

enum class ErrorKind {
  InvalidInput,     // malformed or unsupported input (presentations, configs)
  Precondition,     // operation called outside its documented domain
  CapExceeded,      // a configured size budget would be exceeded
  Undetermined,     // numerics cannot decide (e.g. rho too close to 1)
};

const char* to_string(ErrorKind kind) noexcept;

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

}  // namespace cayperc
