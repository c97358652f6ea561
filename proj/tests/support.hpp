#pragma once

#include <optional>

#include "selfforce/error.hpp"

// Code of the selfforce::Error thrown by f, or nullopt if it returns.
template <class F>
std::optional<selfforce::ErrorCode> error_code(F&& f) {
  try {
    f();
  } catch (const selfforce::Error& e) {
    return e.code();
  }
  return std::nullopt;
}
