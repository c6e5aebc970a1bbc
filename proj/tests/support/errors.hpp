#pragma once

#include <optional>

#include "pmds/error.hpp"

namespace testing_support {

// The library error code thrown by fn, or nullopt when it returns normally.
template <class Fn>
std::optional<pmds::ErrorCode> error_of(Fn&& fn) {
  try {
    fn();
  } catch (const pmds::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace testing_support
