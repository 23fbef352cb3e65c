#pragma once

#include <gtest/gtest.h>

#include "layersep/error.hpp"

namespace layersep::testing {

/// Code of the layersep::Error thrown by fn; fails the test if none is.
template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no layersep::Error thrown";
  return ErrorCode::IoError;
}

}  // namespace layersep::testing
