#pragma once

// Scaled complementary error function and related Gaussian-tail helpers.
//
// The windowed detector-response transforms reduce, for the inertial part of
// the kernel, to combinations of exp(-x^2) and erfc(x).  Evaluated naively
// these combinations cancel catastrophically once x >~ 3, so everything here
// is organised around erfcx(x) = exp(x^2) erfc(x) and around the deficit
//
//     mills_deficit(x) = 1 - sqrt(pi) * x * erfcx(x),  x >= 0,
//
// which is the exact relative remainder of the Gaussian tail integral
// (mills_deficit(x) ~ 1/(2x^2) - 3/(4x^4) + ... as x -> infinity).  Both are
// computed to near machine precision for all non-negative arguments without
// intermediate over/underflow.

namespace qdet {

// exp(x^2) erfc(x) for any real x.  Relative accuracy a few ulp for x >= 0;
// for x < 0 the value grows like 2 exp(x^2) and is returned as such.
double erfcx(double x) noexcept;

// 1 - sqrt(pi) x erfcx(x) for x >= 0, evaluated cancellation-free.
// Monotone decreasing from 1 at x = 0 towards 0, asymptotically 1/(2 x^2).
double mills_deficit(double x) noexcept;

}  // namespace qdet
