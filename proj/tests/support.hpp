#pragma once

#include <doctest.h>

#include "sigmak/common/errors.hpp"

namespace testing {

template <class Fn>
sigmak::ErrorKind kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const sigmak::Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return sigmak::ErrorKind::io;
}

}  // namespace testing
