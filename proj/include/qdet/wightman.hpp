#pragma once

// Pullback of the massless-field two-point (Wightman) kernel along a
// uniformly accelerated worldline, its Hadamard split, and windowed spectral
// primitives.
//
// Conventions.  With u = tau - tau' the proper-time separation and a > 0 the
// proper acceleration,
//
//     W_a(u)    = -(a^2 / 16 pi^2) / sinh^2( a (u - i eps) / 2 ),
//
// identical to the inertial thermal kernel at inverse temperature
// beta = 2 pi / a,
//
//     W_beta(u) = -(1 / 4 beta^2) / sinh^2( pi (u - i eps) / beta ).
//
// The Hadamard split peels off the inertial vacuum kernel
// W_M(u) = -1/(4 pi^2 (u - i eps)^2), leaving the smooth, real, even
// remainder
//
//     R(u) = 1/(4 pi^2 u^2) - (a^2/16 pi^2) csch^2(a u / 2)
//          = (a^2/16 pi^2) * [ 1/s^2 - csch^2 s ],   s = a u / 2,
//
// which is O(a^2) uniformly in u and tends to a^2/(48 pi^2) as u -> 0.
//
// Windowed spectral primitives (distributional eps -> 0 limit throughout):
//
//     F(w) = int du  exp(-u^2 / 2 T^2) exp(i w u) W_a(u)
//          = F_vac(w) + 2 Re C(w),
//     C(w) = int_0^inf du  exp(-u^2 / 2 T^2) exp(i w u) R(u),
//
// with F_vac in closed form (erfc / scaled-erfc based) and C by adaptive
// quadrature in the substituted variable s = a u / 2.  These primitives back
// the KMS power-spectrum diagnostic here and the response-integral module.

#include "qdet/quadrature.hpp"

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace qdet {

struct WorldlineParams {
  double accel = 1.0;            // proper acceleration a
  double i_epsilon = -1.0;       // Wightman i-eps; < 0 selects 1e-6 / accel
  double switching_width = 1.0;  // Gaussian window scale T in exp(-t^2/T^2)

  double epsilon() const {
    return i_epsilon < 0.0 ? 1e-6 / accel : i_epsilon;
  }

  // Throws std::invalid_argument for non-positive scales; returns soft
  // warnings (e.g. eps not small against the window).
  std::vector<std::string> validate() const;
};

// Evaluators for the Hadamard split at the worldline's eps.  `full` is
// assembled as vacuum + regular, so the decomposition is exact by
// construction; the direct accelerated formula is accel_wightman().  (At
// finite eps the two differ by the O(eps R') shift of the remainder, far
// below every tolerance in this artifact; they coincide as eps -> 0.)
struct KernelSplit {
  std::function<std::complex<double>(double)> full;
  std::function<std::complex<double>(double)> vacuum;
  std::function<double(double)> regular;
};

std::complex<double> accel_wightman(double u, const WorldlineParams& params);
std::complex<double> inertial_thermal_wightman(double u, double beta, double epsilon);
std::complex<double> vacuum_wightman(double u, double epsilon);

// The remainder R(u); real, even, O(a^2), value a^2/(48 pi^2) at u = 0.
double regular_part(double u, double accel);

// 1/s^2 - csch^2(s): the scaled remainder integrand.  Below |s| = 0.05 an
// 8-term even power series handles the removable singularity exactly; the
// complex overload admits the i-eps-shifted argument.
double csch_square_deficit(double s);
std::complex<double> csch_square_deficit(std::complex<double> s);

KernelSplit make_kernel_split(const WorldlineParams& params);

struct SpectralValue {
  std::complex<double> value{0.0, 0.0};
  double error = 0.0;
};

// Closed-form vacuum transform F_vac(w) = int du e^{-u^2/2T^2} e^{iwu} W_M(u)
// in the eps -> 0 limit:
//   w >= 0:  (w/4pi)(1 + erf(w T/sqrt2)) + e^{-w^2T^2/2} / (2 pi sqrt(2pi) T)
//   w <  0:  e^{-x^2} mills_deficit(x) / (2 pi sqrt(2pi) T),  x = |w| T/sqrt2
// Nonnegative for all w; evaluated cancellation-free.
double vacuum_window_fourier(double omega, double T);

// C(D) = int_0^inf e^{-u^2/2T^2} e^{iDu} R(u) du by adaptive Gauss-Kronrod
// on s = a u / 2 (series region, split at s = 1, Gaussian-tail truncation).
SpectralValue regular_window_primitive(double D, double accel, double T,
                                       double rel_tol = 1e-10,
                                       double abs_tol = 1e-16);

// F(w) = F_vac(w) + 2 Re C(w) with propagated error estimate.
SpectralValue windowed_kernel_fourier(double omega, double accel, double T,
                                      double rel_tol = 1e-10,
                                      double abs_tol = 1e-16);

struct KmsResult {
  std::complex<double> positive_freq{0.0, 0.0};  // W~(+omega)
  std::complex<double> negative_freq{0.0, 0.0};  // W~(-omega)
  double ratio = 0.0;                            // |W~(omega)| / |W~(-omega)|
  std::vector<std::string> warnings;
};

// Power-spectrum detailed-balance probe: W~(+-omega) =
// int du e^{-u^2/2 window^2} W_a(u) e^{-+ i omega u}; for a thermal kernel
// the ratio tends to exp(-2 pi omega / a) as accel * window grows (warns
// below accel * window = 20).  Throws QuadratureError on nonconvergence and
// std::invalid_argument for omega = 0.
KmsResult kms_fourier_ratio(double omega, const WorldlineParams& params,
                            double window_width);

}  // namespace qdet
