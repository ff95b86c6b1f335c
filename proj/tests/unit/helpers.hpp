#pragma once

#include <doctest.h>

#include "fueter/algebra.hpp"
#include "fueter/random.hpp"

namespace testing {

inline fueter::Quaternion random_quaternion(fueter::Rng& rng, double scale = 1.0) {
  return {rng.uniform(-scale, scale), rng.uniform(-scale, scale), rng.uniform(-scale, scale),
          rng.uniform(-scale, scale)};
}

inline bool close(const fueter::Quaternion& a, const fueter::Quaternion& b, double tol) {
  return fueter::norm(a - b) <= tol;
}

}  // namespace testing
