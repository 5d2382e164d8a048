#pragma once

// Adaptive Gauss-Kronrod (7-15) quadrature for complex-valued integrands on a
// real interval.  The caller supplies an initial partition (breakpoints at
// known structure: kernel ridges, series/direct switchovers, oscillation
// scales); the worst panel by embedded error estimate is bisected until the
// global estimate meets  max(rel_tol * |I|, abs_tol)  or the panel budget is
// exhausted.

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace qdet {

struct QuadratureResult {
  std::complex<double> value{0.0, 0.0};
  double error = 0.0;   // conservative global error estimate
  int panels = 0;       // panels in the final partition
  bool converged = false;
};

// Thrown by evaluation paths that require a converged integral.  Carries the
// achieved estimate so callers can report how far the evaluation got.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, QuadratureResult achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  const QuadratureResult& achieved() const noexcept { return achieved_; }

 private:
  QuadratureResult achieved_;
};

using ComplexIntegrand = std::function<std::complex<double>(double)>;

// Integrate f over [breakpoints.front(), breakpoints.back()] with the given
// initial partition.  breakpoints must be strictly increasing, size >= 2.
QuadratureResult adaptive_gauss_kronrod(const ComplexIntegrand& f,
                                        const std::vector<double>& breakpoints,
                                        double rel_tol = 1e-10,
                                        double abs_tol = 1e-16,
                                        int max_panels = 4000);

// Convenience: geometric subdivision of [a, b] (a > 0) into n panels, plus
// helpers to assemble breakpoint lists.
std::vector<double> geometric_breakpoints(double a, double b, int n);

// Uniformly subdivide any panel longer than max_length (no-op for a
// non-finite or non-positive cap).  Used to seed oscillation-aware initial
// partitions.  At most 512 pieces per input panel.
std::vector<double> subdivide_panels(const std::vector<double>& breakpoints,
                                     double max_length);

}  // namespace qdet
