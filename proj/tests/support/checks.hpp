#pragma once

#include <doctest.h>

#include "distq/error.hpp"

// Passes when `expr` throws distq::Error of kind `k`.
#define CHECK_ERROR_KIND(expr, k)                                     \
  do {                                                                \
    bool thrown_ = false;                                             \
    try {                                                             \
      (void)(expr);                                                   \
    } catch (const distq::Error& e_) {                                \
      thrown_ = true;                                                 \
      CHECK_MESSAGE(e_.kind() == (k), "got " << e_.what());           \
    }                                                                 \
    CHECK_MESSAGE(thrown_, "expected a distq::Error from " #expr);    \
  } while (0)
