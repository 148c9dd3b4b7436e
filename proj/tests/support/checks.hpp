#pragma once

#include <doctest.h>

#include <functional>

#include "geophase/error.hpp"

namespace geophase::testing {

/// Runs fn and reports the ErrorKind it throws; fails the test if it does not throw geophase::Error.
inline ErrorKind thrown_kind(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected geophase::Error");
  return ErrorKind::kInvalidArgument;
}

}  // namespace geophase::testing
