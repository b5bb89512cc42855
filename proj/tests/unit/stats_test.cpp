#include <doctest.h>

#include <cmath>
#include <limits>

#include "tenet/rng.hpp"
#include "tenet/stats.hpp"

using namespace tenet;

// Reference values computed with 30-digit arithmetic (mpmath betainc).
TEST_CASE("f_upper_tail matches high-precision reference values") {
  struct Case {
    double f, d1, d2, expected;
  };
  const Case cases[] = {
      {0.0, 1, 10, 1.0},
      {1.0, 1, 10, 0.34089313230205987},
      {2.5, 3, 40, 0.073254352017949904},
      {5.0, 2, 100, 0.0085185512795006406},
      {0.3, 4, 7, 0.86916552011835991},
      {10.0, 1, 500, 0.00166049952485976},
      {1.2345, 6, 123, 0.29327406234263159},
      {100.0, 2, 50, 3.3554432e-18},
      {0.001, 3, 3, 0.99994641200130868},
      {3.84, 1, 1000000, 0.050043798609967241},
  };
  for (const auto& c : cases) {
    const double got = f_upper_tail(c.f, c.d1, c.d2);
    CHECK(got == doctest::Approx(c.expected).epsilon(1e-10));
    CHECK(std::fabs(got - c.expected) < 1e-10);
  }
}

TEST_CASE("f_upper_tail limits and monotonicity") {
  CHECK(f_upper_tail(0.0, 3, 7) == 1.0);
  CHECK(f_upper_tail(-2.0, 3, 7) == 1.0);
  CHECK(f_upper_tail(std::numeric_limits<double>::infinity(), 3, 7) == 0.0);
  double prev = 1.0;
  for (double f = 0.1; f < 50.0; f *= 1.7) {
    const double p = f_upper_tail(f, 4, 60);
    CHECK(p < prev);
    prev = p;
  }
}

TEST_CASE("incomplete beta symmetry and bounds") {
  Xoshiro256pp rng(99);
  for (int i = 0; i < 200; ++i) {
    const double a = 0.5 + 20.0 * rng.uniform();
    const double b = 0.5 + 20.0 * rng.uniform();
    const double x = rng.uniform();
    const double lhs = regularized_incomplete_beta(a, b, x);
    const double rhs = 1.0 - regularized_incomplete_beta(b, a, 1.0 - x);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
    CHECK(lhs >= 0.0);
    CHECK(lhs <= 1.0);
  }
  CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
  CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
}
