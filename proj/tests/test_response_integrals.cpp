#include "qdet/response_integrals.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "oracle_utils.hpp"
#include "qdet/qudit_algebra.hpp"

using namespace qdet;

namespace {
constexpr double kPi = std::numbers::pi;

IntegralParams base_params(double accel, double T) {
  IntegralParams p;
  p.worldline.accel = accel;
  p.worldline.switching_width = T;
  return p;
}

double sigma_prefactor(double T, double sum_freq) {
  return std::sqrt(kPi / 2.0) * T *
         std::exp(-T * T * sum_freq * sum_freq / 8.0);
}

// Frozen 30-digit references for this parameter block (17 significant
// digits).  F_vac is the closed-form vacuum transform, C the one-sided
// remainder transform, J_t the tanh principal-value reduction.
constexpr double kFvac0T8 = 0.0079367044917801212;
constexpr double kFvac1T8 = 0.15915494309189534;
constexpr double kFvacM1T8 = 1.5020769806277767e-18;
const std::complex<double> kC0A1T8{0.009329092103441567, 0.0};
const std::complex<double> kC075A1T8{0.0006469738326937068,
                                     0.00335344425805429};
const std::complex<double> kCM15A2T4{0.0012939476653874135,
                                     -0.00670688851610858};
const std::complex<double> kC025A05T16{0.001032920426891299,
                                       0.0022882085949569196};
constexpr double kJt1 = 4.4526795198616331;   // jt(1, 0.04, 8)
constexpr double kJt05 = 2.2140860680390021;  // jt(0.5, 0.08, 8)
constexpr double kJt2 = 10.291481229754274;   // jt(2, 0.01, 4)

// Finite-i-eps references at eps = 1e-3 (eps = 1e-2 where noted).
constexpr double kFvacEps1 = 0.1589933846314588;       // (1, 8, 1e-3)
constexpr double kFvacEpsM05 = 1.4214271548110472e-7;  // (-0.5, 8, 1e-3)
constexpr double kFvacEps075 = 0.11844971995548127;    // (0.75, 8, 1e-2)
const std::complex<double> kHeps075{0.060283654110556239,
                                    -25.452295260986046};
const std::complex<double> kHepsM075{0.00064740997512122343,
                                     -25.208075287935161};
const std::complex<double> kCeps075{0.00064653799548655058,
                                    0.0033531095157879121};

void check_complex(std::complex<double> got, std::complex<double> want,
                   double rel, double extra_abs = 0.0) {
  CAPTURE(got);
  CAPTURE(want);
  CHECK(std::abs(got - want) <= rel * std::abs(want) + extra_abs);
}

}  // namespace

TEST_CASE("response: table key inventory per model") {
  const IntegralParams p = base_params(1.0, 8.0);
  CHECK(build_table(build_su2_model(1.0, 1.0), p).size() == 12);
  CHECK(build_table(build_su2_model(2.0, 1.0), p).size() == 12);
  CHECK(build_table(build_hw_model(3, 1.0), p).size() == 27);
  CHECK(build_table(build_hw_model(5, 1.0), p).size() == 75);
}

TEST_CASE("response: bit-exact structural identities on the table") {
  const IntegralParams p = base_params(1.0, 8.0);
  const ResponseIntegralTable table = build_table(build_su2_model(1.0, 1.0), p);

  for (const auto& [key, entry] : table.entries) {
    // Conjugation closure, exact.
    const TableKey mirror{-key.omega2, -key.omega1, flipped(key.halfline)};
    REQUIRE(table.contains(mirror));
    CHECK(table.at(mirror).value == std::conj(entry.value));

    // Half-line completeness, exact.
    if (key.halfline == HalfLine::None) {
      const TableKey plus{key.omega1, key.omega2, HalfLine::Plus};
      const TableKey minus{key.omega1, key.omega2, HalfLine::Minus};
      CHECK(table.at(plus).value + table.at(minus).value == entry.value);
    }
  }

  // G(W, W) and G(-W, -W) coincide bitwise (real values, conjugate pair).
  CHECK(table.at({1.0, 1.0, HalfLine::None}).value ==
        table.at({-1.0, -1.0, HalfLine::None}).value);
}

TEST_CASE("response: distributional vacuum parts against frozen references") {
  const IntegralParams p = base_params(1.0, 8.0);
  const double P0 = sigma_prefactor(8.0, 0.0);

  // Zero-frequency identity: exactly 1 / 4 pi.
  const SpectralValue zz = full_plane_vacuum_part(0.0, 0.0, p);
  CHECK(std::abs(zz.value.real() - 1.0 / (4.0 * kPi)) <= 1e-15);
  CHECK(zz.value.imag() == 0.0);

  check_complex(full_plane_vacuum_part(1.0, -1.0, p).value, P0 * kFvac1T8,
                1e-13);
  check_complex(full_plane_vacuum_part(-1.0, 1.0, p).value, P0 * kFvacM1T8,
                1e-12);

  // Nonzero Sigma picks up the Gaussian prefactor.
  check_complex(full_plane_vacuum_part(1.0, 1.0, p).value,
                sigma_prefactor(8.0, 2.0) * kFvac0T8, 1e-12);
}

TEST_CASE("response: distributional regular parts against frozen references") {
  {
    const IntegralParams p = base_params(1.0, 8.0);
    const double P0 = sigma_prefactor(8.0, 0.0);
    const SpectralValue full = full_plane_regular_part(0.75, -0.75, p);
    check_complex(full.value, P0 * 2.0 * kC075A1T8.real(), 1e-9,
                  5.0 * full.error);
    const SpectralValue half =
        half_plane_regular_part(0.75, -0.75, Sign::Plus, p);
    check_complex(half.value, P0 * kC075A1T8, 1e-9, 5.0 * half.error);
    // The (-) half-line is the exact conjugate.
    CHECK(half_plane_regular_part(0.75, -0.75, Sign::Minus, p).value ==
          std::conj(half.value));
  }
  {
    const IntegralParams p = base_params(2.0, 4.0);
    const double P0 = sigma_prefactor(4.0, 0.0);
    const SpectralValue half =
        half_plane_regular_part(-1.5, 1.5, Sign::Plus, p);
    check_complex(half.value, P0 * kCM15A2T4, 1e-9, 5.0 * half.error);
  }
  {
    const IntegralParams p = base_params(0.5, 16.0);
    const double P0 = sigma_prefactor(16.0, 0.0);
    const SpectralValue half =
        half_plane_regular_part(0.25, -0.25, Sign::Plus, p);
    check_complex(half.value, P0 * kC025A05T16, 1e-9, 5.0 * half.error);
  }
}

TEST_CASE("response: tanh-regulated vacuum piece") {
  IntegralParams p = base_params(1.0, 8.0);
  const double a0 = p.resolved_a0();
  CHECK(a0 == 8.0 / 200.0);

  // D = 0: imaginary part is exactly -P / (8 pi a0); jt contributes nothing.
  {
    const double pref = sigma_prefactor(8.0, 2.0);
    const SpectralValue q = half_plane_vacuum_part(1.0, 1.0, Sign::Plus, p);
    check_complex(q.value,
                  pref * std::complex<double>(0.5 * kFvac0T8,
                                              -1.0 / (8.0 * kPi * a0)),
                  1e-12);
  }

  // D = 1: the jt principal-value term joins, against its frozen value.
  {
    const double pref = sigma_prefactor(8.0, 0.0);
    const SpectralValue r = half_plane_vacuum_part(1.0, -1.0, Sign::Plus, p);
    const std::complex<double> want(
        0.5 * kFvac1T8,
        -(1.0 / (8.0 * kPi * a0) + kJt1 / (4.0 * kPi * kPi)));
    check_complex(r.value, pref * want, 1e-9, 5.0 * r.error);
  }

  // The D = 0 imaginary part scales exactly as 1 / a0.
  {
    IntegralParams doubled = p;
    doubled.regulator.a0 = 2.0 * a0;
    const double im1 = half_plane_vacuum_part(1.0, 1.0, Sign::Plus, p).value.imag();
    const double im2 =
        half_plane_vacuum_part(1.0, 1.0, Sign::Plus, doubled).value.imag();
    CHECK(std::abs(im1 / im2 - 2.0) <= 1e-13);
  }
}

TEST_CASE("response: jt principal-value reduction") {
  const auto near = [](const SpectralValue& got, double want) {
    CHECK(std::abs(got.value.real() - want) <=
          std::max(1e-10 * std::abs(want), 3.0 * got.error));
    CHECK(got.value.imag() == 0.0);
  };
  near(jt_integral(1.0, 0.04, 8.0), kJt1);
  near(jt_integral(0.5, 0.08, 8.0), kJt05);
  near(jt_integral(2.0, 0.01, 4.0), kJt2);

  // Exact zero at omega = 0; odd in omega.
  CHECK(jt_integral(0.0, 0.04, 8.0).value == std::complex<double>{0.0, 0.0});
  CHECK(std::abs(jt_integral(-1.0, 0.04, 8.0).value.real() + kJt1) <=
        1e-10 * kJt1);

  // Deep regulated regime |omega| a0 >> 1: pi / (2 a0).
  const double asym = jt_integral(50.0, 1.0, 8.0).value.real();
  CHECK(std::abs(asym - kPi / 2.0) <= 1e-4 * kPi / 2.0);
}

TEST_CASE("response: nascent-delta regulator") {
  IntegralParams tanh_p = base_params(1.0, 8.0);
  IntegralParams nascent_p = tanh_p;
  nascent_p.regulator.kind = RegulatorKind::NascentDelta;
  const double a0 = nascent_p.resolved_a0();
  const double T = 8.0;

  // Q is defined (D = 0): real part identical to the tanh scheme, imaginary
  // part from the smeared-delta' closed form.
  const SpectralValue qn = integral_Q(nascent_p, 1.0);
  const SpectralValue qt = integral_Q(tanh_p, 1.0);
  CHECK(qn.value.real() == qt.value.real());
  const double want_im = -sigma_prefactor(T, 2.0) * T * T /
                         (std::sqrt(32.0 * kPi * kPi * kPi) * a0 *
                          (a0 * a0 + T * T));
  CHECK(std::abs(qn.value.imag() - want_im) <= 1e-12 * std::abs(want_im));

  // Any nonzero relative frequency is undefined under this scheme.
  CHECK_THROWS_AS((void)integral_R(nascent_p, Sign::Plus, 1.0),
                  UnsupportedRegulator);
  CHECK_THROWS_AS((void)integral_V(nascent_p, 1.0, Sign::Plus, 1.0),
                  UnsupportedRegulator);
  CHECK_NOTHROW((void)integral_V(nascent_p, 0.0, Sign::Plus, 1.0));
  CHECK_THROWS_AS(
      (void)build_table(build_su2_model(1.0, 1.0), nascent_p),
      UnsupportedRegulator);

  // Finite-eps mode needs no distributional regulator at all.
  IntegralParams fe = nascent_p;
  fe.mode = KernelMode::FiniteEpsilon;
  fe.worldline.i_epsilon = 1e-3;
  CHECK_NOTHROW((void)integral_R(fe, Sign::Plus, 1.0));
}

TEST_CASE("response: named wrappers dispatch to the two primitives") {
  const IntegralParams p = base_params(1.0, 8.0);
  const double w = 1.0;
  CHECK(integral_I(p, w).value == full_plane_transform(w, w, p).value);
  CHECK(integral_L(p, Sign::Plus, w).value ==
        full_plane_transform(w, -w, p).value);
  CHECK(integral_L(p, Sign::Minus, w).value ==
        full_plane_transform(-w, w, p).value);
  CHECK(integral_Q(p, w).value ==
        half_plane_transform(w, w, Sign::Plus, p).value);
  CHECK(integral_R(p, Sign::Plus, w).value ==
        half_plane_transform(w, -w, Sign::Plus, p).value);
  CHECK(integral_R(p, Sign::Minus, w).value ==
        half_plane_transform(-w, w, Sign::Plus, p).value);
  CHECK(integral_U(p, 0.6, w).value ==
        full_plane_transform(0.6 * w, 0.0, p).value);
  CHECK(integral_V(p, 0.6, Sign::Minus, w).value ==
        half_plane_transform(0.6 * w, 0.0, Sign::Minus, p).value);
  CHECK(integral_Lq(p, 0.6, w).value ==
        full_plane_transform(0.6 * w, -0.6 * w, p).value);
  CHECK(integral_Rq(p, 0.6, w).value ==
        half_plane_transform(0.6 * w, -0.6 * w, Sign::Plus, p).value);
}

TEST_CASE("response: half-line closures and positivity") {
  const IntegralParams p = base_params(1.0, 8.0);

  // V+ + V- = U, exactly.
  const SpectralValue u = integral_U(p, 1.0, 1.0);
  CHECK(integral_V(p, 1.0, Sign::Plus, 1.0).value +
            integral_V(p, 1.0, Sign::Minus, 1.0).value ==
        u.value);

  // Q and R are exactly half the real part of their full-line partners.
  CHECK(integral_Q(p, 1.0).value.real() ==
        0.5 * integral_I(p, 1.0).value.real());
  CHECK(integral_R(p, Sign::Plus, 1.0).value.real() ==
        0.5 * integral_L(p, Sign::Plus, 1.0).value.real());
  CHECK(integral_R(p, Sign::Minus, 1.0).value.real() ==
        0.5 * integral_L(p, Sign::Minus, 1.0).value.real());

  // U at q = 0 is the real, positive zero-frequency response, with frozen
  // vacuum + remainder content.
  const SpectralValue u0 = integral_U(p, 0.0, 1.0);
  CHECK(u0.value.imag() == 0.0);
  const double want =
      sigma_prefactor(8.0, 0.0) * (kFvac0T8 + 2.0 * kC0A1T8.real());
  CHECK(std::abs(u0.value.real() - want) <=
        std::max(1e-10 * want, 3.0 * u0.error));

  // Gap-window suppression: at W T = 10 the Sigma != 0 integrals are dead.
  CHECK(std::abs(integral_I(p, 1.25).value) <= 1e-8);
  CHECK(std::abs(integral_Q(p, 1.25).value) <= 1e-8);
}

TEST_CASE("response: finite-eps closed vacuum transform") {
  CHECK(std::abs(vacuum_window_fourier_eps(1.0, 8.0, 1e-3) - kFvacEps1) <=
        1e-11 * kFvacEps1);
  CHECK(std::abs(vacuum_window_fourier_eps(-0.5, 8.0, 1e-3) - kFvacEpsM05) <=
        1e-9 * kFvacEpsM05);
  CHECK(std::abs(vacuum_window_fourier_eps(0.75, 8.0, 1e-2) - kFvacEps075) <=
        1e-11 * kFvacEps075);
  // eps -> 0 recovers the distributional transform.
  CHECK(std::abs(vacuum_window_fourier_eps(1.0, 8.0, 1e-9) -
                 vacuum_window_fourier(1.0, 8.0)) <= 1e-7);
}

TEST_CASE("response: finite-eps transforms against frozen references") {
  IntegralParams fe = base_params(1.0, 8.0);
  fe.mode = KernelMode::FiniteEpsilon;
  fe.worldline.i_epsilon = 1e-3;
  const double P0 = sigma_prefactor(8.0, 0.0);

  const SpectralValue hp = half_plane_transform(0.75, -0.75, Sign::Plus, fe);
  check_complex(hp.value, P0 * kHeps075, 1e-8, 3.0 * hp.error);

  const SpectralValue hm = half_plane_transform(-0.75, 0.75, Sign::Plus, fe);
  check_complex(hm.value, P0 * kHepsM075, 1e-8, 3.0 * hm.error);

  // Full line = 2 Re H+ at finite eps.
  const SpectralValue fp = full_plane_transform(0.75, -0.75, fe);
  check_complex(fp.value, P0 * 2.0 * kHeps075.real(), 1e-8, 3.0 * fp.error);

  // Remainder piece alone.
  const SpectralValue hr = half_plane_regular_part(0.75, -0.75, Sign::Plus, fe);
  check_complex(hr.value, P0 * kCeps075, 1e-8, 5.0 * hr.error);
}

TEST_CASE("response: brute-force oracle cross-check at one point") {
  IntegralParams fe = base_params(1.0, 8.0);
  fe.mode = KernelMode::FiniteEpsilon;
  fe.worldline.i_epsilon = 1e-3;
  const double P0 = sigma_prefactor(8.0, 0.0);

  const qdet_test::BruteForceOracle oracle(1.0, 8.0, 1e-3);
  const std::complex<double> bf_full = oracle.full(0.75, -0.75);
  const std::complex<double> bf_half = oracle.half(0.75, -0.75);

  // The oracle agrees with the independently frozen high-precision values...
  check_complex(bf_half, P0 * kHeps075, 1e-6);
  check_complex(bf_full, P0 * 2.0 * kHeps075.real(), 1e-6,
                1e-6 * std::abs(P0 * kHeps075));
  // ...and with the factorized library evaluation.
  const std::complex<double> lib_full =
      full_plane_transform(0.75, -0.75, fe).value;
  const std::complex<double> lib_half =
      half_plane_transform(0.75, -0.75, Sign::Plus, fe).value;
  CHECK(std::abs(bf_full - lib_full) <=
        1e-6 * std::max(1.0, std::abs(lib_full)));
  CHECK(std::abs(bf_half - lib_half) <= 1e-6 * std::abs(lib_half));
}

TEST_CASE("response: serial and parallel table builds are identical") {
  const IntegralParams p = base_params(1.0, 8.0);
  const DetectorModel model = build_su2_model(1.0, 1.0);
  const ResponseIntegralTable serial = build_table(model, p, TableBuild::Serial);
  const ResponseIntegralTable parallel =
      build_table(model, p, TableBuild::Parallel);
  REQUIRE(serial.size() == parallel.size());
  for (const auto& [key, entry] : serial.entries) {
    REQUIRE(parallel.contains(key));
    CHECK(parallel.at(key).value == entry.value);
    CHECK(parallel.at(key).error == entry.error);
  }
  CHECK(serial.worst_error == parallel.worst_error);
  CHECK(serial.worst_error > 0.0);
  CHECK(serial.worst_error < 1e-8);
}

TEST_CASE("response: missing table key raises") {
  const IntegralParams p = base_params(1.0, 8.0);
  const ResponseIntegralTable table = build_table(build_su2_model(1.0, 1.0), p);
  CHECK_THROWS_AS((void)table.at({7.0, 7.0, HalfLine::None}),
                  std::out_of_range);
}

TEST_CASE("response: parameter validation") {
  IntegralParams p = base_params(1.0, 8.0);
  CHECK(p.validate().empty());

  IntegralParams coarse = p;
  coarse.regulator.a0 = 8.0;  // at the window scale: ill-posed
  CHECK_THROWS_AS((void)coarse.validate(), std::invalid_argument);

  IntegralParams shallow = p;
  shallow.regulator.a0 = 0.8;  // inside, but not deep: warn
  CHECK_FALSE(shallow.validate().empty());
}
