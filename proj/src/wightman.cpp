#include "qdet/wightman.hpp"

#include "qdet/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qdet {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourPiSq = 4.0 * kPi * kPi;       // 4 pi^2
constexpr double kSixteenPiSq = 16.0 * kPi * kPi;   // 16 pi^2
const double kSqrt2 = std::sqrt(2.0);
const double kSqrt2Pi = std::sqrt(2.0 * kPi);

// Even power series of 1/s^2 - csch^2(s) about s = 0 (8 terms, constant
// through s^14).  Truncation below |s| = 0.05 is < 1e-16 relative.
constexpr double kDeficitSeries[8] = {
    1.0 / 3.0,
    -1.0 / 15.0,
    2.0 / 189.0,
    -1.0 / 675.0,
    2.0 / 10395.0,
    -1382.0 / 58046625.0,
    4.0 / 1403325.0,
    -3617.0 / 10854718875.0,
};

constexpr double kSeriesThreshold = 0.05;

template <typename Scalar>
Scalar deficit_series(Scalar s) {
  const Scalar s2 = s * s;
  Scalar acc = Scalar(kDeficitSeries[7]);
  for (int i = 6; i >= 0; --i) {
    acc = acc * s2 + Scalar(kDeficitSeries[i]);
  }
  return acc;
}

// csch^2 for real s > 0 without overflow: 4 e^{-2s} / (1 - e^{-2s})^2 with the
// denominator via expm1.
double csch_square(double s) {
  const double d = -std::expm1(-2.0 * s);
  const double e = std::exp(-2.0 * s);
  return 4.0 * e / (d * d);
}

std::complex<double> csch_square(std::complex<double> z) {
  if (z.real() < 0.0) {
    z = -z;  // csch^2 is even
  }
  const std::complex<double> e = std::exp(-2.0 * z);
  const std::complex<double> d = 1.0 - e;
  return 4.0 * e / (d * d);
}

void require_converged(const QuadratureResult& r, const char* what) {
  if (!r.converged) {
    throw QuadratureError(std::string(what) + ": quadrature did not converge", r);
  }
}

}  // namespace

std::vector<std::string> WorldlineParams::validate() const {
  if (!(accel > 0.0)) {
    throw std::invalid_argument("WorldlineParams: accel must be positive");
  }
  if (!(switching_width > 0.0)) {
    throw std::invalid_argument("WorldlineParams: switching_width must be positive");
  }
  std::vector<std::string> warnings;
  const double eps = epsilon();
  if (!(eps > 0.0)) {
    throw std::invalid_argument("WorldlineParams: i_epsilon must be positive");
  }
  if (eps >= switching_width / 100.0) {
    warnings.push_back("WorldlineParams: i_epsilon not small against the switching width (eps >= T/100)");
  }
  return warnings;
}

std::complex<double> accel_wightman(double u, const WorldlineParams& params) {
  const double a = params.accel;
  const double eps = params.epsilon();
  const std::complex<double> z(0.5 * a * u, -0.5 * a * eps);
  return -(a * a / kSixteenPiSq) * csch_square(z);
}

std::complex<double> inertial_thermal_wightman(double u, double beta, double epsilon) {
  if (!(beta > 0.0)) {
    throw std::invalid_argument("inertial_thermal_wightman: beta must be positive");
  }
  const std::complex<double> z(kPi * u / beta, -kPi * epsilon / beta);
  return -(1.0 / (4.0 * beta * beta)) * csch_square(z);
}

std::complex<double> vacuum_wightman(double u, double epsilon) {
  const std::complex<double> z(u, -epsilon);
  return -1.0 / (kFourPiSq * z * z);
}

double csch_square_deficit(double s) {
  const double as = std::abs(s);
  if (as < kSeriesThreshold) {
    return deficit_series(s);
  }
  return 1.0 / (s * s) - csch_square(as);
}

std::complex<double> csch_square_deficit(std::complex<double> s) {
  if (std::abs(s) < kSeriesThreshold) {
    return deficit_series(s);
  }
  return 1.0 / (s * s) - csch_square(s);
}

double regular_part(double u, double accel) {
  if (!(accel > 0.0)) {
    throw std::invalid_argument("regular_part: accel must be positive");
  }
  const double s = 0.5 * accel * u;
  return (accel * accel / kSixteenPiSq) * csch_square_deficit(s);
}

KernelSplit make_kernel_split(const WorldlineParams& params) {
  params.validate();
  const double a = params.accel;
  const double eps = params.epsilon();
  KernelSplit split;
  split.vacuum = [eps](double u) { return vacuum_wightman(u, eps); };
  split.regular = [a](double u) { return regular_part(u, a); };
  split.full = [a, eps](double u) {
    return vacuum_wightman(u, eps) + std::complex<double>(regular_part(u, a), 0.0);
  };
  return split;
}

double vacuum_window_fourier(double omega, double T) {
  const double norm = 1.0 / (2.0 * kPi * kSqrt2Pi * T);
  if (omega >= 0.0) {
    const double x = omega * T / kSqrt2;
    return (omega / (4.0 * kPi)) * (1.0 + std::erf(x)) + norm * std::exp(-x * x);
  }
  const double x = -omega * T / kSqrt2;
  return norm * std::exp(-x * x) * mills_deficit(x);
}

SpectralValue regular_window_primitive(double D, double accel, double T,
                                       double rel_tol, double abs_tol) {
  const double aT = accel * T;
  const double smax = 4.5 * aT;  // Gaussian window dead beyond u = 9T
  const double wavenumber = std::abs(2.0 * D / accel);

  std::vector<double> bp{0.0};
  if (smax <= 2.0 * kSeriesThreshold) {
    bp.push_back(smax);
  } else {
    bp.push_back(kSeriesThreshold);
    double x = 1.0;
    while (x < smax) {
      bp.push_back(x);
      x *= 2.0;
    }
    bp.push_back(smax);
  }
  const double cap = wavenumber > 0.0 ? 4.0 * kPi / wavenumber
                                      : std::numeric_limits<double>::infinity();
  bp = subdivide_panels(bp, cap);

  const double gauss_scale = 1.0 / (aT * aT);
  const double phase_k = 2.0 * D / accel;
  auto integrand = [gauss_scale, phase_k](double s) {
    const double g = std::exp(-2.0 * s * s * gauss_scale);
    const std::complex<double> ph(std::cos(phase_k * s), std::sin(phase_k * s));
    return g * ph * csch_square_deficit(s);
  };

  const double prefactor = accel / (8.0 * kPi * kPi);
  QuadratureResult r = adaptive_gauss_kronrod(integrand, bp, rel_tol,
                                              abs_tol / prefactor, 6000);
  require_converged(r, "regular_window_primitive");
  return SpectralValue{prefactor * r.value, prefactor * r.error};
}

SpectralValue windowed_kernel_fourier(double omega, double accel, double T,
                                      double rel_tol, double abs_tol) {
  const SpectralValue c = regular_window_primitive(omega, accel, T, rel_tol, abs_tol);
  const double fvac = vacuum_window_fourier(omega, T);
  SpectralValue out;
  out.value = std::complex<double>(fvac + 2.0 * c.value.real(), 0.0);
  out.error = 2.0 * c.error + 4e-16 * std::abs(fvac);
  return out;
}

KmsResult kms_fourier_ratio(double omega, const WorldlineParams& params,
                            double window_width) {
  if (omega == 0.0) {
    throw std::invalid_argument("kms_fourier_ratio: omega must be nonzero");
  }
  if (!(window_width > 0.0)) {
    throw std::invalid_argument("kms_fourier_ratio: window_width must be positive");
  }
  KmsResult result;
  result.warnings = params.validate();
  if (params.accel * window_width < 20.0) {
    result.warnings.push_back(
        "kms_fourier_ratio: accel * window below 20; ratio not yet in the thermal regime");
  }
  // W~(w) = int du e^{-u^2/2 window^2} W_a(u) e^{-iwu} = F(-w).
  const SpectralValue plus = windowed_kernel_fourier(-omega, params.accel, window_width);
  const SpectralValue minus = windowed_kernel_fourier(+omega, params.accel, window_width);
  result.positive_freq = plus.value;
  result.negative_freq = minus.value;
  result.ratio = std::abs(plus.value) / std::abs(minus.value);
  return result;
}

}  // namespace qdet
