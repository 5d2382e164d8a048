#pragma once

// Physics verdicts built on the correction engine: reinitialized transition
// probabilities, excitation/deexcitation ratios against the thermal target
// e^{-beta dE} with beta = 2 pi / accel, distance to the Gibbs state,
// coherence norms, and the secular (linear-in-window) growth fit.

#include "qdet/perturbation.hpp"

#include <string>
#include <vector>

namespace qdet {

struct EdrVerdict {
  int from_level = 0;
  int to_level = 0;
  double forward = 0.0;   // P(from -> to), order coupling^2
  double backward = 0.0;  // P(to -> from)
  double ratio = 0.0;     // forward / backward; NaN when indeterminate
  bool indeterminate = false;
  double target = 0.0;    // exp(-2 pi (E_to - E_from) / accel)
  double residual = 0.0;  // |ratio - target| / target; NaN when indeterminate
};

// Probability (order coupling^2) of finding the detector in |to> after
// preparing |from>: the (to, to) slot of the second-order correction for the
// reinitialized state.  Requires from != to.
double transition_probability(const DetectorModel& model, int from, int to,
                              const IntegralParams& p, double coupling);
double transition_probability(const DetectorModel& model, int from, int to,
                              const ResponseIntegralTable& table, double coupling);

// Excitation/deexcitation ratio for the ordered pair.  Flagged INDETERMINATE
// when both probabilities sit below 1e-3 * max|table entry| * coupling^2 --
// the fourth-order floor separating true selection-rule zeros from small but
// finite channels.  Degenerate pairs give ratio exactly 1 (both directions
// read the same zero-frequency table entry).
EdrVerdict edr(const DetectorModel& model, int from, int to,
               const IntegralParams& p, double coupling);
EdrVerdict edr(const DetectorModel& model, int from, int to,
               const ResponseIntegralTable& table, double coupling);

// (1/2) sum |eigenvalues| of the (Hermitian) difference.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

// Trace distance to exp(-beta H)/Z for the model Hamiltonian.
double gibbs_distance(const DensityMatrix& state, const DetectorModel& model,
                      double beta);

// l1 norm of the off-diagonal entries.
double coherence_norm(const DensityMatrix& state);

struct SecularFit {
  double slope = 0.0;
  double r_squared = 0.0;
  std::vector<std::string> warnings;
};

// Least-squares linear fit of the ground-state excitation probability against
// the window width over window_grid (strictly increasing, >= 2 points).  The
// fit is meaningful in the regime accel * T >= 50, gap * T >= 10; points
// outside produce warnings, not errors.
SecularFit secular_fit(const DetectorModel& model, const IntegralParams& p,
                       double coupling, const std::vector<double>& window_grid);

}  // namespace qdet
