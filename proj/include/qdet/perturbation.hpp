#pragma once

// Second-order perturbative state correction for a monopole-coupled detector,
//
//   rho(2) = rho^(1,1) + rho^(2,0) + rho^(0,2),
//
// assembled slot-by-slot from the frequency-decomposed response table.  With
// O_mn the monopole matrix elements, w_mn = E_m - E_n the Bohr frequencies,
// G / G_half the full- and half-line transforms, and the coupling squared
// factored back in at the end:
//
//   rho^(1,1)_mn = sum_{p,q} O_mp rho_pq O_qn  G(w_qn, w_mp)
//   rho^(2,0)_mn = - sum_{p,q} O_mp O_pq rho_qn  G_half(w_mp, w_pq, +)
//   rho^(0,2)    = adjoint of rho^(2,0)
//
// The argument pairing is pinned by exact agreement with independently
// transcribed oracle matrices (three-level ladder, five-level ladder, clock
// model), which is the binding cross-check in the test suite.  Terms with an
// exactly zero coefficient are skipped, so selection-rule zeros (populations
// reachable only at fourth order) stay exactly zero.

#include "qdet/qudit_algebra.hpp"
#include "qdet/response_integrals.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace qdet {

// One table lookup entering a slot: slot += coefficient * value(key), with
// the value conjugated first when `conjugated` is set (adjoint-side terms).
struct ProvenanceTerm {
  TableKey key;
  std::complex<double> coefficient{0.0, 0.0};
  bool conjugated = false;
};

struct SlotProvenance {
  int row = 0;
  int col = 0;
  std::vector<ProvenanceTerm> terms;
};

struct CorrectionReport {
  Eigen::MatrixXcd correction;            // order coupling^2; traceless, Hermitian
  std::vector<SlotProvenance> provenance; // lookups behind each nonzero slot
  double worst_error = 0.0;               // max per-slot propagated table error
};

// Generic engine.  The first overload builds the integral table itself; the
// second reuses a prebuilt table (must come from the same model/params).
CorrectionReport second_order_correction(const DetectorModel& model,
                                         const DensityMatrix& initial,
                                         const IntegralParams& p,
                                         double coupling);
CorrectionReport second_order_correction(const DetectorModel& model,
                                         const DensityMatrix& initial,
                                         const ResponseIntegralTable& table,
                                         double coupling);

// --- transcribed oracle matrices (unit coupling) --------------------------
//
// Each oracle is an independent hard-coded transcription of a closed-form
// correction matrix, evaluated through the same integral table; comparing the
// generic engine against them pins every sign and ordering convention.
// Frequencies are taken from the table's own key set (largest positive key),
// never recomputed from model parameters, so lookups match bit-for-bit.

// Three-level ladder (su2 j=1), diagonal initial diag(a, b, c) in the basis
// ordered top level first.  Populations must sum to 1 and be nonnegative.
CorrectionReport qutrit_oracle_diagonal(double a, double b, double c,
                                        const ResponseIntegralTable& integrals);

// Three-level ladder, general initial [[a, d, e], [d*, b, f], [e*, f*, c]].
// The assembled matrix must pass DensityMatrix validation.
CorrectionReport qutrit_oracle_general(std::complex<double> a,
                                       std::complex<double> b,
                                       std::complex<double> c,
                                       std::complex<double> d,
                                       std::complex<double> e,
                                       std::complex<double> f,
                                       const ResponseIntegralTable& integrals);

// Three-level ladder, the equal superposition of the top two levels
// (|top> + |mid>)/sqrt(2): all nine slots in closed form.
CorrectionReport qutrit_oracle_coherent(const ResponseIntegralTable& integrals);

// Five-level ladder (su2 j=2), initial in the middle level.  Half-line
// corner slots are recorded with the resolved phase convention; the pattern
// and coefficient magnitudes are the transcribed content.
CorrectionReport ququint_oracle_middle(const ResponseIntegralTable& integrals);

// Clock model (hw d=3), diagonal initial diag(a, b, c): top level then the
// degenerate pair.
CorrectionReport hw_qutrit_oracle_diagonal(double a, double b, double c,
                                           const ResponseIntegralTable& integrals);

// initial + correction.  Enforces dimensions, Hermiticity, and unit trace;
// positivity is deliberately not enforced (second-order truncation admits
// order-coupling^4 negative eigenvalues; inspect via min_eigenvalue()).
DensityMatrix assemble_final_state(const DensityMatrix& initial,
                                   const CorrectionReport& report);

}  // namespace qdet
