#pragma once

#include <stdexcept>
#include <string>

namespace geophase {

// Coarse failure classes; the CLI maps each one to an exit code.
enum class ErrorKind {
  kInvalidArgument,  // precondition or type-invariant violation on inputs
  kConfig,           // malformed or incomplete run configuration
  kNumeric,          // integrator failure or invariant drift beyond tolerance
  kRegime,           // parameters outside the validity regime of a formula
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::kInvalidArgument, what);
}

}  // namespace geophase
