#include "qdet/special.hpp"

#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <limits>

// Reference values frozen from an independent 30-digit computation
// (exp(x^2) erfc(x) and 1 - sqrt(pi) x exp(x^2) erfc(x) evaluated in
// arbitrary precision), quoted to 17 significant digits.

namespace {

struct Fixture {
  double x;
  double value;
};

constexpr Fixture kErfcx[] = {
    {-3.0, 16205.988853999587},
    {-1.0, 5.0089800807622835},
    {-0.5, 1.9523604891825571},
    {0.0, 1.0},
    {0.3, 0.73459933456765514},
    {1.0, 0.427583576155807},
    {5.0, 0.11070463773306863},
    {7.9, 0.070857477367397134},  // just below the continued-fraction switch
    {8.1, 0.069133920177343149},  // just above it
    {12.0, 0.046854221014893763},
    {50.0, 0.011281536265323773},
    {100.0, 0.0056416137829894329},
};

constexpr Fixture kMills[] = {
    {0.0, 1.0},
    {0.5, 0.45435863923495296},
    {1.9, 0.10248642526680729},  // just below the backward-recurrence switch
    {2.0, 0.094645900037650841},
    {2.1, 0.087629098382156711},  // just above it
    {5.0, 0.018905692684612086},
    {20.0, 0.0012453415433722336},
    {100.0, 4.9992501874344045e-5},
};

}  // namespace

TEST_CASE("special: erfcx matches frozen references across all branches") {
  for (const Fixture& f : kErfcx) {
    const double got = qdet::erfcx(f.x);
    CHECK(std::abs(got - f.value) <= 4e-15 * std::abs(f.value));
  }
}

TEST_CASE("special: erfcx negative-axis reflection identity") {
  for (double x : {0.2, 1.0, 2.5, 4.0, 6.0}) {
    const double lhs = qdet::erfcx(-x);
    const double rhs = 2.0 * std::exp(x * x) - qdet::erfcx(x);
    CHECK(std::abs(lhs - rhs) <= 4e-15 * std::abs(lhs));
  }
}

TEST_CASE("special: erfcx is consistent with std::erfc in the direct range") {
  for (double x : {0.1, 0.7, 1.3, 2.9, 5.5}) {
    const double expected = std::exp(x * x) * std::erfc(x);
    CHECK(std::abs(qdet::erfcx(x) - expected) <= 2e-14 * expected);
  }
}

TEST_CASE("special: mills_deficit matches frozen references") {
  for (const Fixture& f : kMills) {
    const double got = qdet::mills_deficit(f.x);
    CHECK(std::abs(got - f.value) <= 4e-15 * std::abs(f.value));
  }
}

TEST_CASE("special: mills_deficit is positive, decreasing, below 1") {
  double previous = 1.0 + 1e-15;
  for (double x : {0.0, 0.25, 0.5, 1.0, 1.5, 1.99, 2.0, 2.01, 3.0, 6.0, 15.0,
                   40.0, 200.0}) {
    const double d = qdet::mills_deficit(x);
    CHECK(d > 0.0);
    CHECK(d <= 1.0);
    CHECK(d < previous);
    previous = d;
  }
}

TEST_CASE("special: mills_deficit large-x asymptotics 1/(2x^2)") {
  for (double x : {30.0, 100.0, 300.0}) {
    const double d = qdet::mills_deficit(x);
    const double leading = 1.0 / (2.0 * x * x);
    // D(x) = 1/(2x^2) - 3/(4x^4) + ...
    CHECK(std::abs(d - leading) <= 2.0 / (x * x) * leading);
  }
}
