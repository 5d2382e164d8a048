#include "qdet/response_integrals.hpp"

#include "qdet/special.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

namespace qdet {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourPiSq = 4.0 * kPi * kPi;
const double kSqrtHalfPi = std::sqrt(0.5 * kPi);   // sqrt(pi/2)
const double kSqrt32PiCubed = std::sqrt(32.0 * kPi * kPi * kPi);

double window_prefactor(double omega_sum, double T) {
  const double arg = T * omega_sum;
  return kSqrtHalfPi * T * std::exp(-arg * arg / 8.0);
}

std::complex<double> scale(double p, std::complex<double> z) {
  return {p * z.real(), p * z.imag()};
}

void require_converged(const QuadratureResult& r, const char* what) {
  if (!r.converged) {
    throw QuadratureError(std::string(what) + ": quadrature did not converge", r);
  }
}

// One-sided remainder transform at finite i-eps:
//   C_eps(D) = int_0^inf du e^{-u^2/2T^2} e^{iDu} R(u - i eps)
//            = (a/8pi^2) int_0^smax ds e^{-2s^2/(aT)^2} e^{i(2D/a)s}
//                                      deficit(s - i a eps / 2).
// Identical partitioning to the eps -> 0 path in the kernel module; only the
// deficit argument is shifted.
SpectralValue regular_window_primitive_eps(double D, double accel, double T,
                                           double eps, double rel_tol,
                                           double abs_tol) {
  const double aT = accel * T;
  const double smax = 4.5 * aT;
  const double wavenumber = std::abs(2.0 * D / accel);

  std::vector<double> bp{0.0};
  if (smax <= 0.1) {
    bp.push_back(smax);
  } else {
    bp.push_back(0.05);
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
  const double shift = 0.5 * accel * eps;
  auto integrand = [gauss_scale, phase_k, shift](double s) {
    const double g = std::exp(-2.0 * s * s * gauss_scale);
    const std::complex<double> ph(std::cos(phase_k * s), std::sin(phase_k * s));
    return g * ph * csch_square_deficit(std::complex<double>(s, -shift));
  };

  const double prefactor = accel / (8.0 * kPi * kPi);
  QuadratureResult r = adaptive_gauss_kronrod(integrand, bp, rel_tol,
                                              abs_tol / prefactor, 6000);
  require_converged(r, "regular_window_primitive_eps");
  return SpectralValue{scale(prefactor, r.value), prefactor * r.error};
}

// One-sided vacuum transform at finite i-eps by direct quadrature:
//   -(1/4pi^2) int_0^inf du e^{-u^2/2T^2} e^{iDu} (u - i eps)^{-2},
// with a geometric partition resolving the |u| ~ eps ridge.
SpectralValue half_vacuum_eps(double D, double T, double eps, double rel_tol,
                              double abs_tol) {
  const double L = 9.0 * T;
  std::vector<double> bp{0.0};
  if (2.0 * eps >= L) {
    bp.push_back(L);
  } else {
    bp.push_back(0.5 * eps);
    bp.push_back(2.0 * eps);
    double x = 8.0 * eps;
    while (x < L) {
      bp.push_back(x);
      x *= 4.0;
    }
    bp.push_back(L);
  }
  const double cap = D != 0.0 ? 4.0 * kPi / std::abs(D)
                              : std::numeric_limits<double>::infinity();
  bp = subdivide_panels(bp, cap);

  const double inv2T2 = 1.0 / (2.0 * T * T);
  auto integrand = [inv2T2, D, eps](double u) {
    const std::complex<double> z(u, -eps);
    const std::complex<double> ph(std::cos(D * u), std::sin(D * u));
    return -(1.0 / kFourPiSq) * std::exp(-u * u * inv2T2) * ph / (z * z);
  };

  QuadratureResult r = adaptive_gauss_kronrod(integrand, bp, rel_tol, abs_tol, 6000);
  require_converged(r, "half_plane_transform(finite-eps vacuum)");
  return SpectralValue{r.value, r.error};
}

// Regulated vacuum piece of H^+(D) in the distributional limit.  The real
// part is F_vac/2 for either scheme; the imaginary part carries the UV
// regulator:
//   NascentDelta:  -T^2 / (sqrt(32 pi^3) a0 (a0^2 + T^2)),  D = 0 only.
//   TanhHeaviside: -[ 1/(8 pi a0) + jt(D)/(4 pi^2) ].
SpectralValue half_vacuum_dist(double D, const IntegralParams& p) {
  const double T = p.worldline.switching_width;
  const double a0 = p.resolved_a0();
  const double re = 0.5 * vacuum_window_fourier(D, T);

  if (p.regulator.kind == RegulatorKind::NascentDelta) {
    if (D != 0.0) {
      throw UnsupportedRegulator(
          "NascentDelta defines half-line transforms only at zero relative "
          "frequency (the principal-value piece diverges otherwise); use "
          "TanhHeaviside");
    }
    const double im = -T * T / (kSqrt32PiCubed * a0 * (a0 * a0 + T * T));
    return SpectralValue{{re, im}, 4e-16 * (std::abs(re) + std::abs(im))};
  }

  double im = -1.0 / (8.0 * kPi * a0);
  double err = 4e-16 * (std::abs(re) + std::abs(im));
  if (D != 0.0) {
    const SpectralValue jt = jt_integral(D, a0, T, p.rel_tol, p.abs_tol);
    im -= jt.value.real() / kFourPiSq;
    err += jt.error / kFourPiSq;
  }
  return SpectralValue{{re, im}, err};
}

// Shared per-frequency primitives: the full-line transform F(D) and the
// (+)-half-line transform H^+(D), with error estimates.  H^- is always
// conj(H^+), so it is never stored.
struct FrequencyPrimitives {
  double full = 0.0;                    // F(D), real
  double full_error = 0.0;
  std::complex<double> half{0.0, 0.0};  // H^+(D)
  double half_error = 0.0;
};

FrequencyPrimitives compute_primitives(double D, const IntegralParams& p,
                                       bool need_half) {
  const double a = p.worldline.accel;
  const double T = p.worldline.switching_width;
  FrequencyPrimitives out;

  if (p.mode == KernelMode::DistributionalLimit) {
    const SpectralValue c = regular_window_primitive(D, a, T, p.rel_tol, p.abs_tol);
    const double fvac = vacuum_window_fourier(D, T);
    out.full = fvac + 2.0 * c.value.real();
    out.full_error = 2.0 * c.error + 4e-16 * std::abs(fvac);
    if (need_half) {
      const SpectralValue hv = half_vacuum_dist(D, p);
      // Re H^+ = F/2 identically (H^- = conj H^+ and H^+ + H^- = F), so the
      // real part is taken from the full-line value; completeness and
      // conjugation closure then hold bit-exactly.
      out.half = {0.5 * out.full, c.value.imag() + hv.value.imag()};
      out.half_error = c.error + hv.error;
    }
  } else {
    const double eps = p.worldline.epsilon();
    const SpectralValue c =
        regular_window_primitive_eps(D, a, T, eps, p.rel_tol, p.abs_tol);
    const double fvac = vacuum_window_fourier_eps(D, T, eps);
    out.full = fvac + 2.0 * c.value.real();
    out.full_error = 2.0 * c.error + 4e-16 * std::abs(fvac);
    if (need_half) {
      const SpectralValue hv = half_vacuum_eps(D, T, eps, p.rel_tol, p.abs_tol);
      out.half = hv.value + c.value;
      out.half_error = hv.error + c.error;
    }
  }
  return out;
}

std::string describe_key(const TableKey& key) {
  std::ostringstream os;
  os << "(" << key.omega1 << ", " << key.omega2 << ", ";
  switch (key.halfline) {
    case HalfLine::None: os << "none"; break;
    case HalfLine::Plus: os << "+"; break;
    case HalfLine::Minus: os << "-"; break;
  }
  os << ")";
  return os.str();
}

}  // namespace

std::vector<std::string> IntegralParams::validate() const {
  std::vector<std::string> warnings = worldline.validate();
  const double T = worldline.switching_width;
  const double a0 = resolved_a0();
  if (!(a0 > 0.0)) {
    throw std::invalid_argument("IntegralParams: regulator scale a0 must be positive");
  }
  if (a0 >= T) {
    throw std::invalid_argument(
        "IntegralParams: regulator scale a0 must sit strictly below the "
        "switching width");
  }
  if (a0 > T / 20.0) {
    warnings.push_back(
        "IntegralParams: regulator scale above T/20; UV and window scales are "
        "not well separated");
  }
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw std::invalid_argument("IntegralParams: tolerances must be positive");
  }
  return warnings;
}

const TableEntry& ResponseIntegralTable::at(const TableKey& key) const {
  auto it = entries.find(key);
  if (it == entries.end()) {
    throw std::out_of_range("ResponseIntegralTable: missing key " + describe_key(key));
  }
  return it->second;
}

double vacuum_window_fourier_eps(double omega, double T, double epsilon) {
  const double mu = omega - epsilon / (T * T);
  const double x = mu * T / std::numbers::sqrt2;
  const double outer = (std::sqrt(2.0 * kPi) / kFourPiSq) *
                       std::exp(epsilon * epsilon / (2.0 * T * T) - epsilon * omega);
  double bracket;
  if (mu >= 0.0) {
    bracket = std::exp(-x * x) / T + kSqrtHalfPi * mu * (1.0 + std::erf(x));
  } else {
    bracket = std::exp(-x * x) * mills_deficit(-x) / T;
  }
  return outer * bracket;
}

SpectralValue jt_integral(double omega, double a0, double T, double rel_tol,
                          double abs_tol) {
  if (omega == 0.0) {
    return SpectralValue{};
  }
  const double L = 9.0 * T;
  std::vector<double> bp{0.0};
  if (0.5 * a0 >= L) {
    bp.push_back(L);
  } else {
    double x = 0.5 * a0;
    while (x < L) {
      bp.push_back(x);
      x *= 2.0;
    }
    bp.push_back(L);
  }
  bp = subdivide_panels(bp, 4.0 * kPi / std::abs(omega));

  const double inv2T2 = 1.0 / (2.0 * T * T);
  auto integrand = [omega, a0, inv2T2](double u) {
    const double v = std::tanh(u / a0) * std::sin(omega * u) *
                     std::exp(-u * u * inv2T2) / (u * u);
    return std::complex<double>(v, 0.0);
  };

  QuadratureResult r = adaptive_gauss_kronrod(integrand, bp, rel_tol, abs_tol, 6000);
  require_converged(r, "jt_integral");
  return SpectralValue{r.value, r.error};
}

SpectralValue full_plane_transform(double omega1, double omega2,
                                   const IntegralParams& p) {
  p.validate();
  const double T = p.worldline.switching_width;
  const double D = 0.5 * (omega1 - omega2);
  const FrequencyPrimitives prim = compute_primitives(D, p, false);
  const double P = window_prefactor(omega1 + omega2, T);
  SpectralValue out;
  out.value = {P * prim.full, 0.0};
  out.error = P * prim.full_error + 4e-16 * std::abs(out.value);
  return out;
}

SpectralValue half_plane_transform(double omega1, double omega2, Sign sign,
                                   const IntegralParams& p) {
  p.validate();
  const double T = p.worldline.switching_width;
  const double D = 0.5 * (omega1 - omega2);
  const FrequencyPrimitives prim = compute_primitives(D, p, true);
  const double P = window_prefactor(omega1 + omega2, T);
  std::complex<double> h = prim.half;
  if (sign == Sign::Minus) {
    h = std::conj(h);
  }
  SpectralValue out;
  out.value = scale(P, h);
  out.error = P * prim.half_error + 4e-16 * std::abs(out.value);
  return out;
}

SpectralValue full_plane_vacuum_part(double omega1, double omega2,
                                     const IntegralParams& p) {
  p.validate();
  const double T = p.worldline.switching_width;
  const double D = 0.5 * (omega1 - omega2);
  const double P = window_prefactor(omega1 + omega2, T);
  const double fvac = p.mode == KernelMode::DistributionalLimit
                          ? vacuum_window_fourier(D, T)
                          : vacuum_window_fourier_eps(D, T, p.worldline.epsilon());
  return SpectralValue{{P * fvac, 0.0}, 4e-16 * P * std::abs(fvac)};
}

SpectralValue full_plane_regular_part(double omega1, double omega2,
                                      const IntegralParams& p) {
  p.validate();
  const double a = p.worldline.accel;
  const double T = p.worldline.switching_width;
  const double D = 0.5 * (omega1 - omega2);
  const double P = window_prefactor(omega1 + omega2, T);
  const SpectralValue c =
      p.mode == KernelMode::DistributionalLimit
          ? regular_window_primitive(D, a, T, p.rel_tol, p.abs_tol)
          : regular_window_primitive_eps(D, a, T, p.worldline.epsilon(),
                                         p.rel_tol, p.abs_tol);
  return SpectralValue{{P * 2.0 * c.value.real(), 0.0}, P * 2.0 * c.error};
}

SpectralValue half_plane_vacuum_part(double omega1, double omega2, Sign sign,
                                     const IntegralParams& p) {
  p.validate();
  const double T = p.worldline.switching_width;
  const double D = 0.5 * (omega1 - omega2);
  const double P = window_prefactor(omega1 + omega2, T);
  SpectralValue hv = p.mode == KernelMode::DistributionalLimit
                         ? half_vacuum_dist(D, p)
                         : half_vacuum_eps(D, T, p.worldline.epsilon(),
                                           p.rel_tol, p.abs_tol);
  if (sign == Sign::Minus) {
    hv.value = std::conj(hv.value);
  }
  return SpectralValue{scale(P, hv.value), P * hv.error};
}

SpectralValue half_plane_regular_part(double omega1, double omega2, Sign sign,
                                      const IntegralParams& p) {
  p.validate();
  const double a = p.worldline.accel;
  const double T = p.worldline.switching_width;
  const double D = 0.5 * (omega1 - omega2);
  const double P = window_prefactor(omega1 + omega2, T);
  SpectralValue c =
      p.mode == KernelMode::DistributionalLimit
          ? regular_window_primitive(D, a, T, p.rel_tol, p.abs_tol)
          : regular_window_primitive_eps(D, a, T, p.worldline.epsilon(),
                                         p.rel_tol, p.abs_tol);
  if (sign == Sign::Minus) {
    c.value = std::conj(c.value);
  }
  return SpectralValue{scale(P, c.value), P * c.error};
}

SpectralValue integral_I(const IntegralParams& p, double omega) {
  return full_plane_transform(omega, omega, p);
}

SpectralValue integral_L(const IntegralParams& p, Sign sign, double omega) {
  const double w = sign == Sign::Plus ? omega : -omega;
  return full_plane_transform(w, -w, p);
}

SpectralValue integral_Q(const IntegralParams& p, double omega) {
  return half_plane_transform(omega, omega, Sign::Plus, p);
}

SpectralValue integral_R(const IntegralParams& p, Sign sign, double omega) {
  const double w = sign == Sign::Plus ? omega : -omega;
  return half_plane_transform(w, -w, Sign::Plus, p);
}

SpectralValue integral_U(const IntegralParams& p, double q, double omega) {
  return full_plane_transform(q * omega, 0.0, p);
}

SpectralValue integral_V(const IntegralParams& p, double q, Sign sign, double omega) {
  return half_plane_transform(q * omega, 0.0, sign, p);
}

SpectralValue integral_Lq(const IntegralParams& p, double q, double omega) {
  return full_plane_transform(q * omega, -(q * omega), p);
}

SpectralValue integral_Rq(const IntegralParams& p, double q, double omega) {
  return half_plane_transform(q * omega, -(q * omega), Sign::Plus, p);
}

ResponseIntegralTable build_table(const DetectorModel& model,
                                  const IntegralParams& p, TableBuild build) {
  p.validate();
  const double T = p.worldline.switching_width;

  std::set<double> bohr_set;
  for (const TransitionRecord& r : transition_table(model).records) {
    bohr_set.insert(r.bohr);
  }
  const std::vector<double> bohr(bohr_set.begin(), bohr_set.end());

  // Distinct relative frequencies D = (w1 - w2)/2 over all ordered pairs.
  std::map<double, std::size_t> d_index;
  std::vector<double> d_values;
  for (double b1 : bohr) {
    for (double b2 : bohr) {
      const double D = 0.5 * (b1 - b2);
      if (d_index.emplace(D, d_values.size()).second) {
        d_values.push_back(D);
      }
    }
  }

  // Evaluate the shared primitives, optionally in parallel: each entry is a
  // pure function of its frequency, so results are independent of order.
  std::vector<FrequencyPrimitives> prims(d_values.size());
  std::exception_ptr first_error = nullptr;
  std::atomic<bool> failed{false};
  const auto n = static_cast<std::int64_t>(d_values.size());
  if (build == TableBuild::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) {
      if (failed.load(std::memory_order_relaxed)) {
        continue;
      }
      try {
        prims[static_cast<std::size_t>(i)] = compute_primitives(d_values[i], p, true);
      } catch (...) {
#pragma omp critical(qdet_build_table_error)
        {
          if (!failed.exchange(true)) {
            first_error = std::current_exception();
          }
        }
      }
    }
  } else {
    for (std::int64_t i = 0; i < n; ++i) {
      prims[static_cast<std::size_t>(i)] = compute_primitives(d_values[i], p, true);
    }
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }

  ResponseIntegralTable table;
  table.params = p;
  for (double b1 : bohr) {
    for (double b2 : bohr) {
      const double D = 0.5 * (b1 - b2);
      const FrequencyPrimitives& prim = prims[d_index.at(D)];
      const double P = window_prefactor(b1 + b2, T);

      TableEntry full;
      full.value = {P * prim.full, 0.0};
      full.error = P * prim.full_error + 4e-16 * std::abs(full.value);

      TableEntry plus;
      plus.value = scale(P, prim.half);
      plus.error = P * prim.half_error + 4e-16 * std::abs(plus.value);

      TableEntry minus;
      minus.value = std::conj(plus.value);
      minus.error = plus.error;

      table.entries[{b1, b2, HalfLine::None}] = full;
      table.entries[{b1, b2, HalfLine::Plus}] = plus;
      table.entries[{b1, b2, HalfLine::Minus}] = minus;
    }
  }

  double worst = 0.0;
  for (const auto& [key, entry] : table.entries) {
    worst = std::max(worst, entry.error);

    // Conjugation closure: value(-w2, -w1, flipped) = conj(value).
    const TableKey partner{-key.omega2, -key.omega1, flipped(key.halfline)};
    const TableEntry& other = table.at(partner);
    const double closure = std::abs(other.value - std::conj(entry.value));
    if (closure > entry.error + other.error + 1e-13 * (1.0 + std::abs(entry.value))) {
      throw std::runtime_error(
          "ResponseIntegralTable: conjugation closure violated at key " +
          describe_key(key));
    }

    // Half-line completeness: value(+) + value(-) = value(none).
    if (key.halfline == HalfLine::None) {
      const TableEntry& hp = table.at({key.omega1, key.omega2, HalfLine::Plus});
      const TableEntry& hm = table.at({key.omega1, key.omega2, HalfLine::Minus});
      const double gap = std::abs(hp.value + hm.value - entry.value);
      if (gap > entry.error + hp.error + hm.error +
                    1e-13 * (1.0 + std::abs(entry.value))) {
        throw std::runtime_error(
            "ResponseIntegralTable: half-line completeness violated at key " +
            describe_key(key));
      }
    }
  }
  table.worst_error = worst;
  return table;
}

}  // namespace qdet
