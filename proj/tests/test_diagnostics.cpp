#include "qdet/diagnostics.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "qdet/perturbation.hpp"
#include "qdet/qudit_algebra.hpp"
#include "qdet/response_integrals.hpp"

using namespace qdet;

namespace {

IntegralParams make_params(double accel, double width) {
  IntegralParams p;
  p.worldline.accel = accel;
  p.worldline.switching_width = width;
  return p;
}

}  // namespace

TEST_CASE("diagnostics: transition probability is the reinitialized slot") {
  const DetectorModel model = build_su2_model(1.0, 0.5);
  const ResponseIntegralTable table = build_table(model, make_params(1.0, 8.0));

  const double tp = transition_probability(model, 2, 1, table, 0.3);
  const CorrectionReport r = second_order_correction(
      model, DensityMatrix::basis_state(3, 2), table, 0.3);
  CHECK(tp == r.correction(1, 1).real());
  CHECK(tp > 0.0);

  // The overload that builds its own table agrees bit-for-bit.
  CHECK(transition_probability(model, 2, 1, make_params(1.0, 8.0), 0.3) == tp);

  // Forbidden two-rung transition: exactly zero probability.
  CHECK(transition_probability(model, 2, 0, table, 0.3) == 0.0);

  CHECK_THROWS_AS((void)transition_probability(model, 1, 1, table, 0.3),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)transition_probability(model, 0, 3, table, 0.3),
                  std::invalid_argument);
}

TEST_CASE("diagnostics: detailed-balance residual shrinks with the window") {
  const DetectorModel model = build_su2_model(1.0, 0.5);
  std::vector<double> residuals;
  for (double width : {20.0, 50.0, 100.0}) {
    const EdrVerdict v =
        edr(model, 2, 1, make_params(1.0, width), 1.0);
    REQUIRE_FALSE(v.indeterminate);
    CHECK(v.forward > 0.0);
    CHECK(v.backward > v.forward);  // deexcitation dominates
    CHECK(v.target == doctest::Approx(std::exp(-std::acos(-1.0))).epsilon(1e-12));
    residuals.push_back(v.residual);
  }
  CHECK(residuals[1] < residuals[0]);
  CHECK(residuals[2] < residuals[1]);
  CHECK(residuals[1] < 0.01);

  // Reversing the pair inverts the ratio.
  const ResponseIntegralTable table = build_table(model, make_params(1.0, 50.0));
  const EdrVerdict up = edr(model, 2, 1, table, 1.0);
  const EdrVerdict down = edr(model, 1, 2, table, 1.0);
  CHECK(up.ratio * down.ratio == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(down.target == doctest::Approx(1.0 / up.target).epsilon(1e-14));
}

TEST_CASE("diagnostics: degenerate clock pair balances exactly") {
  const DetectorModel model = build_hw_model(3, 1.0);
  const ResponseIntegralTable table = build_table(model, make_params(1.0, 8.0));
  const EdrVerdict v = edr(model, 1, 2, table, 0.5);
  REQUIRE_FALSE(v.indeterminate);
  CHECK(v.forward == v.backward);
  CHECK(v.ratio == 1.0);
  CHECK(v.target == 1.0);
  CHECK(v.residual == 0.0);
}

TEST_CASE("diagnostics: forbidden pair is flagged indeterminate") {
  const DetectorModel model = build_su2_model(1.0, 0.5);
  const ResponseIntegralTable table = build_table(model, make_params(1.0, 8.0));
  const EdrVerdict v = edr(model, 2, 0, table, 0.5);
  CHECK(v.indeterminate);
  CHECK(std::isnan(v.ratio));
  CHECK(std::isnan(v.residual));
  CHECK(v.forward == 0.0);
  CHECK(v.backward == 0.0);
}

TEST_CASE("diagnostics: trace distance") {
  const DensityMatrix a = DensityMatrix::basis_state(3, 0);
  const DensityMatrix b = DensityMatrix::basis_state(3, 1);
  CHECK(trace_distance(a, a) == 0.0);
  CHECK(trace_distance(a, b) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(trace_distance(a, b) - trace_distance(b, a)) <= 1e-15);

  const DensityMatrix c = DensityMatrix::diagonal({0.5, 0.5, 0.0});
  const DensityMatrix d = DensityMatrix::diagonal({0.5, 0.0, 0.5});
  CHECK(trace_distance(c, d) == doctest::Approx(0.5).epsilon(1e-14));

  const DensityMatrix five = DensityMatrix::basis_state(5, 2);
  CHECK_THROWS_AS((void)trace_distance(a, five), std::invalid_argument);
}

TEST_CASE("diagnostics: evolution from the ground state approaches Gibbs") {
  const DetectorModel model = build_su2_model(1.0, 0.5);
  const double accel = 2.0;
  const double beta = 2.0 * std::acos(-1.0) / accel;
  const ResponseIntegralTable table = build_table(model, make_params(accel, 8.0));

  const DensityMatrix initial = DensityMatrix::basis_state(3, 2);
  const CorrectionReport r = second_order_correction(model, initial, table, 0.1);
  const DensityMatrix final_state = assemble_final_state(initial, r);

  const double before = gibbs_distance(initial, model, beta);
  const double after = gibbs_distance(final_state, model, beta);
  CHECK(after < before);

  CHECK(gibbs_distance(gibbs_state(model, beta), model, beta) <= 1e-15);
  CHECK_THROWS_AS((void)gibbs_distance(DensityMatrix::basis_state(5, 0), model,
                                       beta),
                  std::invalid_argument);
}

TEST_CASE("diagnostics: coherence norm") {
  CHECK(coherence_norm(DensityMatrix::diagonal({0.2, 0.3, 0.5})) == 0.0);

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(3, 3);
  rho(0, 0) = rho(0, 1) = rho(1, 0) = rho(1, 1) = 0.5;
  CHECK(coherence_norm(DensityMatrix::from_matrix(rho)) == 1.0);

  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(3, 3);
  x(0, 0) = 0.5;
  x(1, 1) = 0.2;
  x(2, 2) = 0.3;
  x(0, 2) = {0.1, 0.05};
  x(2, 0) = std::conj(x(0, 2));
  CHECK(coherence_norm(DensityMatrix::from_matrix(x)) ==
        doctest::Approx(2.0 * std::abs(x(0, 2))).epsilon(1e-15));
}

TEST_CASE("diagnostics: secular growth fit in the linear regime") {
  const DetectorModel model = build_su2_model(1.0, 0.25);
  const SecularFit fit = secular_fit(model, make_params(1.0, 8.0), 1.0,
                                     {50.0, 60.0, 70.0, 80.0});
  CHECK(fit.slope > 0.0);
  CHECK(fit.r_squared >= 0.999);
  CHECK(fit.warnings.empty());
}

TEST_CASE("diagnostics: secular fit outside the regime warns but fits") {
  const DetectorModel model = build_su2_model(1.0, 1.0);
  const SecularFit fit =
      secular_fit(model, make_params(1.0, 8.0), 1.0, {2.0, 4.0});
  CHECK(fit.warnings.size() == 2);
  CHECK(std::isfinite(fit.slope));

  CHECK_THROWS_AS((void)secular_fit(model, make_params(1.0, 8.0), 1.0, {50.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      (void)secular_fit(model, make_params(1.0, 8.0), 1.0, {60.0, 50.0}),
      std::invalid_argument);
}
