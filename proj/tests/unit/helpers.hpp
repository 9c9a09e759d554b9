#pragma once

#include <cmath>
#include <numbers>

#include <doctest.h>

#include "cosym/errors.hpp"
#include "cosym/model_zoo.hpp"

namespace test {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Runs fn and checks that it throws cosym::Error with the given code.
template <class F>
void expect_code(F&& fn, cosym::ErrorCode code) {
  bool thrown = false;
  try {
    fn();
  } catch (const cosym::Error& e) {
    thrown = true;
    CHECK_MESSAGE(e.code() == code, e.what());
  }
  CHECK_MESSAGE(thrown, "expected ", cosym::to_string(code));
}

inline cosym::GridPtr cat_grid(int n, int m = -1) {
  return cosym::Grid::make(cosym::GridSpec::mapping_torus(n, m > 0 ? m : n, {2, 1, 1, 1}));
}

inline cosym::GridPtr flat_grid(int n) { return cosym::Grid::make(cosym::GridSpec::flat(n)); }

}  // namespace test
