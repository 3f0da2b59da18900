// Shared helpers for the unit test suites.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "dclearn/error.hpp"

namespace dcltest {

// Runs f and reports the dcl::Error code it threw, or nullopt when it
// returned normally (or threw something else).
template <typename F>
std::optional<dcl::ErrorCode> thrown_code(F&& f) {
  try {
    std::forward<F>(f)();
  } catch (const dcl::Error& e) {
    return e.code();
  } catch (...) {
    return std::nullopt;
  }
  return std::nullopt;
}

// Like thrown_code, but additionally requires the error text to contain the
// given fragment; a thrown error whose message lacks it reports nullopt.
template <typename F>
std::optional<dcl::ErrorCode> thrown_message(F&& f,
                                             std::string_view fragment) {
  try {
    std::forward<F>(f)();
  } catch (const dcl::Error& e) {
    if (std::string_view(e.what()).find(fragment) == std::string_view::npos)
      return std::nullopt;
    return e.code();
  } catch (...) {
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace dcltest
