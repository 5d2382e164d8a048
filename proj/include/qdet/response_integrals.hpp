#pragma once

// Windowed double-time response integrals over the accelerated worldline.
//
// Every integral in this artifact is an instance of one of two primitives.
// With chi(t) = exp(-t^2 / T^2) the Gaussian window and W_a the pulled-back
// kernel,
//
//   G(w1, w2)         = int dt dt' chi(t) chi(t') e^{i w1 t + i w2 t'} W_a(t - t'),
//   G_half(w1, w2, s) = same, with Theta(s (t - t')) inserted,  s in {+, -}.
//
// Rotating to u = t - t', v = t + t' (Jacobian 1/2) factorizes the window,
// the v-integral is a pure Gaussian, and
//
//   G      = sqrt(pi/2) T e^{-T^2 (w1+w2)^2 / 8} F(D),        D = (w1 - w2)/2,
//   G_half = sqrt(pi/2) T e^{-T^2 (w1+w2)^2 / 8} H^s(D),
//
// where F(D) (full-line transform of W_a against the u-window) splits into the
// closed-form vacuum transform plus quadrature over the smooth remainder, and
// H^s(D) (half-line transform) additionally needs a UV prescription for the
// vacuum piece's squared pole at u = 0:
//
//   * NascentDelta(a0): Gaussian nascent-delta evaluation of the
//     principal-value + smeared-delta' decomposition.  Analytic, but only
//     well defined at D = 0 (the p.v. piece log-diverges otherwise); other D
//     raise UnsupportedRegulator.
//   * TanhHeaviside(a0): smooth step Theta_{a0}(u) = (1 + tanh(u/a0))/2.
//     The delta' part is analytic; the odd p.v. part reduces to a regular
//     1-D quadrature (see jt below).  Valid for every integral; the default.
//
// The half-line remainder piece needs no regulator (the remainder is smooth)
// and equals the one-sided transform C(D) directly.
//
// Named integrals (coupling-squared factored out of every value):
//   I      = G(W, W)            L_{+-} = G(+-W, -+W)
//   Q      = G_half(W, W, +)    R_{+-} = G_half(+-W, -+W, +)
//   U_q    = G(qW, 0)           V_q^{+-} = G_half(qW, 0, +-)
//   L_q    = G(qW, -qW)         R_q    = G_half(qW, -qW, +)

#include "qdet/qudit_algebra.hpp"
#include "qdet/wightman.hpp"

#include <complex>
#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdet {

enum class RegulatorKind { NascentDelta, TanhHeaviside };

struct RegulatorScheme {
  RegulatorKind kind = RegulatorKind::TanhHeaviside;
  double a0 = -1.0;  // UV cutoff time-scale; < 0 selects switching_width / 200

  double resolved_a0(double switching_width) const {
    return a0 < 0.0 ? switching_width / 200.0 : a0;
  }
};

// DistributionalLimit evaluates the i-eps -> 0 structure (closed-form vacuum
// transforms, regulated half-line vacuum pieces).  FiniteEpsilon keeps the
// worldline's i-eps in every piece, for comparison against brute-force
// quadrature oracles run at the same eps.
enum class KernelMode { DistributionalLimit, FiniteEpsilon };

enum class Sign { Plus, Minus };
enum class HalfLine { None, Plus, Minus };

inline Sign flipped(Sign s) { return s == Sign::Plus ? Sign::Minus : Sign::Plus; }
inline HalfLine flipped(HalfLine h) {
  switch (h) {
    case HalfLine::Plus: return HalfLine::Minus;
    case HalfLine::Minus: return HalfLine::Plus;
    default: return HalfLine::None;
  }
}

// Raised when the requested regulator cannot define the requested integral
// (NascentDelta with a nonzero half-line phase frequency).
class UnsupportedRegulator : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IntegralParams {
  WorldlineParams worldline{};
  RegulatorScheme regulator{};
  KernelMode mode = KernelMode::DistributionalLimit;
  bool lambda_stripped = true;  // values carry no coupling factor
  double rel_tol = 1e-10;
  double abs_tol = 1e-16;

  double resolved_a0() const {
    return regulator.resolved_a0(worldline.switching_width);
  }

  // Throws std::invalid_argument for non-positive scales and for a regulator
  // scale at or above the window width; returns soft warnings (regulator not
  // deep below the window, i-eps not small).
  std::vector<std::string> validate() const;
};

struct TableKey {
  double omega1 = 0.0;
  double omega2 = 0.0;
  HalfLine halfline = HalfLine::None;

  friend auto operator<=>(const TableKey&, const TableKey&) = default;
};

struct TableEntry {
  std::complex<double> value{0.0, 0.0};
  double error = 0.0;
};

// Memoized values of the two primitives over a model's Bohr-frequency pairs.
// Immutable once built; safe to share across threads.
struct ResponseIntegralTable {
  std::map<TableKey, TableEntry> entries;
  IntegralParams params;
  double worst_error = 0.0;

  bool contains(const TableKey& key) const { return entries.count(key) != 0; }
  std::size_t size() const { return entries.size(); }
  // Throws std::out_of_range naming the missing key.
  const TableEntry& at(const TableKey& key) const;
};

// --- primitives -----------------------------------------------------------

SpectralValue full_plane_transform(double omega1, double omega2,
                                   const IntegralParams& p);
SpectralValue half_plane_transform(double omega1, double omega2, Sign sign,
                                   const IntegralParams& p);

// Constituents under the same sqrt(pi/2) T e^{-T^2 (w1+w2)^2/8} prefactor;
// each transform equals vacuum_part + regular_part to rounding.
SpectralValue full_plane_vacuum_part(double omega1, double omega2,
                                     const IntegralParams& p);
SpectralValue full_plane_regular_part(double omega1, double omega2,
                                      const IntegralParams& p);
SpectralValue half_plane_vacuum_part(double omega1, double omega2, Sign sign,
                                     const IntegralParams& p);
SpectralValue half_plane_regular_part(double omega1, double omega2, Sign sign,
                                      const IntegralParams& p);

// Closed-form windowed vacuum transform at finite i-eps,
//   int du e^{-u^2/2T^2} e^{i w u} W_M(u - i eps)   (real for eps > 0).
double vacuum_window_fourier_eps(double omega, double T, double epsilon);

// The odd principal-value reduction behind the TanhHeaviside vacuum piece:
//   jt(w) = int_0^inf du tanh(u/a0) sin(w u) e^{-u^2/2T^2} / u^2,
// regular at u = 0 (value w/a0 there), odd in w, -> (pi/2 a0) sign(w) for
// large |w| a0.
SpectralValue jt_integral(double omega, double a0, double T,
                          double rel_tol = 1e-10, double abs_tol = 1e-16);

// --- named integrals (frequency-wrapper layer) ----------------------------
// `omega` is the model gap scale W entering the phases; q scales it.

SpectralValue integral_I(const IntegralParams& p, double omega);
SpectralValue integral_L(const IntegralParams& p, Sign sign, double omega);
SpectralValue integral_Q(const IntegralParams& p, double omega);
SpectralValue integral_R(const IntegralParams& p, Sign sign, double omega);
SpectralValue integral_U(const IntegralParams& p, double q, double omega);
SpectralValue integral_V(const IntegralParams& p, double q, Sign sign, double omega);
SpectralValue integral_Lq(const IntegralParams& p, double q, double omega);
SpectralValue integral_Rq(const IntegralParams& p, double q, double omega);

// --- table ----------------------------------------------------------------

enum class TableBuild { Parallel, Serial };

// Precomputes every (Bohr, Bohr, halfline) key reachable from the model's
// nonzero monopole transitions.  Shared scalar primitives are memoized per
// distinct frequency bit-pattern, so conjugation closure
//   value(-w2, -w1, flipped) = conj(value(w1, w2, halfline))
// and half-line completeness  value(+) + value(-) = value(none)  hold
// bit-exactly in the distributional mode; both are asserted at build time
// (within error estimates in FiniteEpsilon mode).  Results are independent of
// the build mode; Serial exists as the reference for the parallel path.
ResponseIntegralTable build_table(const DetectorModel& model,
                                  const IntegralParams& p,
                                  TableBuild build = TableBuild::Parallel);

}  // namespace qdet
