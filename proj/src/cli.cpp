#include "qdet/cli.hpp"

#include "qdet/diagnostics.hpp"
#include "qdet/perturbation.hpp"
#include "qdet/quadrature.hpp"
#include "qdet/response_integrals.hpp"
#include "qdet/wightman.hpp"

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <utility>

namespace qdet {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double max_positive_bohr(const DetectorModel& model) {
  double w = 0.0;
  for (const TransitionRecord& r : transition_table(model).records)
    w = std::max(w, r.bohr);
  return w;
}

void emit_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i != 0) os << ',';
    os << cells[i];
  }
  os << '\n';
}

// Per-point configs with parameters validated up front, so that a bad sweep
// value (e.g. a regulator scale crossing the window width) is reported as a
// configuration error rather than a mid-run failure.
std::vector<RunConfig> sweep_points(const RunConfig& config,
                                    const std::vector<double>& values) {
  std::vector<RunConfig> points;
  points.reserve(values.size());
  for (double v : values) {
    RunConfig point = apply_sweep(config, v);
    try {
      point.integral_params().validate();
      (void)point.build_model();
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "config error at sweep value " << format_number(v) << ": " << e.what();
      throw ConfigError(os.str());
    }
    points.push_back(std::move(point));
  }
  return points;
}

void push_state(std::vector<std::string>& cells, const Eigen::MatrixXcd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      cells.push_back(format_number(m(r, c).real()));
      cells.push_back(format_number(m(r, c).imag()));
    }
  }
}

void push_state_header(std::vector<std::string>& cells, const std::string& tag,
                       int dim) {
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      const std::string slot = tag + "_" + std::to_string(r) + std::to_string(c);
      cells.push_back(slot + "_re");
      cells.push_back(slot + "_im");
    }
  }
}

}  // namespace

std::string format_number(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

double max_relative_deviation(const Eigen::MatrixXcd& got,
                              const Eigen::MatrixXcd& want) {
  const double scale = std::max(want.cwiseAbs().maxCoeff(), 1e-300);
  return (got - want).cwiseAbs().maxCoeff() / scale;
}

int run_integrals(const RunConfig& config, std::ostream& os) {
  config.validate();
  const std::vector<double> values = sweep_values(config);
  const std::vector<RunConfig> points = sweep_points(config, values);
  const bool clock = config.model == ModelKind::Hw;
  const int n_integrals = clock ? 10 : 6;

  struct Row {
    std::vector<double> cells;
    bool failed = false;
  };
  std::vector<Row> rows(points.size());
  std::exception_ptr first_error = nullptr;
  std::atomic<bool> broken{false};

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(points.size()); ++k) {
    if (broken.load(std::memory_order_relaxed)) continue;
    try {
      const RunConfig& point = points[static_cast<std::size_t>(k)];
      const IntegralParams p = point.integral_params();
      const double w = max_positive_bohr(point.build_model());
      Row row;
      row.cells.reserve(static_cast<std::size_t>(3 * n_integrals));
      auto add = [&row](auto&& compute) {
        try {
          const SpectralValue s = compute();
          row.cells.push_back(s.value.real());
          row.cells.push_back(s.value.imag());
          row.cells.push_back(s.error);
        } catch (const QuadratureError&) {
          row.cells.push_back(kNaN);
          row.cells.push_back(kNaN);
          row.cells.push_back(kNaN);
          row.failed = true;
        }
      };
      add([&] { return integral_I(p, w); });
      add([&] { return integral_L(p, Sign::Plus, w); });
      add([&] { return integral_L(p, Sign::Minus, w); });
      add([&] { return integral_Q(p, w); });
      add([&] { return integral_R(p, Sign::Plus, w); });
      add([&] { return integral_R(p, Sign::Minus, w); });
      if (clock) {
        add([&] { return integral_U(p, 0.0, w); });
        add([&] { return integral_U(p, 1.0, w); });
        add([&] { return integral_V(p, 1.0, Sign::Plus, w); });
        add([&] { return integral_V(p, 1.0, Sign::Minus, w); });
      }
      rows[static_cast<std::size_t>(k)] = std::move(row);
    } catch (...) {
#pragma omp critical(qdet_run_integrals_error)
      {
        if (!first_error) first_error = std::current_exception();
      }
      broken.store(true, std::memory_order_relaxed);
    }
  }
  if (first_error) std::rethrow_exception(first_error);

  std::vector<std::string> header{sweep_axis_name(config)};
  static const char* kNames[] = {"I",  "Lplus",  "Lminus",  "Q",      "Rplus",
                                 "Rminus", "U0", "U1", "V1plus", "V1minus"};
  for (int i = 0; i < n_integrals; ++i) {
    header.push_back(std::string(kNames[i]) + "_re");
    header.push_back(std::string(kNames[i]) + "_im");
    header.push_back(std::string(kNames[i]) + "_err");
  }
  emit_row(os, header);

  int code = kExitOk;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    std::vector<std::string> cells{format_number(values[k])};
    for (double x : rows[k].cells) cells.push_back(format_number(x));
    emit_row(os, cells);
    if (rows[k].failed) code = kExitNumerical;
  }
  return code;
}

int run_evolve(const RunConfig& config, std::ostream& os) {
  config.validate();
  const std::vector<double> values = sweep_values(config);
  const std::vector<RunConfig> points = sweep_points(config, values);
  const DensityMatrix initial = config.build_initial();
  const int dim = initial.dim();

  std::vector<std::string> header{sweep_axis_name(config)};
  push_state_header(header, "init", dim);
  push_state_header(header, "corr", dim);
  push_state_header(header, "final", dim);
  header.push_back("trace");
  header.push_back("min_eigenvalue");
  header.push_back("coherence_norm");
  emit_row(os, header);

  int code = kExitOk;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const RunConfig& point = points[k];
    std::vector<std::string> cells{format_number(values[k])};
    push_state(cells, initial.entries);
    try {
      const DetectorModel model = point.build_model();
      const ResponseIntegralTable table =
          build_table(model, point.integral_params());
      const CorrectionReport report =
          second_order_correction(model, initial, table, point.coupling);
      const DensityMatrix final_state = assemble_final_state(initial, report);
      push_state(cells, report.correction);
      push_state(cells, final_state.entries);
      cells.push_back(format_number(final_state.entries.trace().real()));
      cells.push_back(format_number(final_state.min_eigenvalue()));
      cells.push_back(format_number(coherence_norm(final_state)));
    } catch (const QuadratureError&) {
      for (int i = 0; i < 4 * dim * dim + 3; ++i)
        cells.push_back(format_number(kNaN));
      code = kExitNumerical;
    }
    emit_row(os, cells);
  }
  return code;
}

int run_edr_sweep(const RunConfig& config, std::ostream& os) {
  config.validate();
  const std::vector<double> values = sweep_values(config);
  const std::vector<RunConfig> points = sweep_points(config, values);
  const int dim = config.build_model().dim;

  emit_row(os, {sweep_axis_name(config), "from", "to", "forward", "backward",
                "ratio", "target", "residual"});

  int code = kExitOk;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const RunConfig& point = points[k];
    const DetectorModel model = point.build_model();
    bool have_table = true;
    ResponseIntegralTable table;
    try {
      table = build_table(model, point.integral_params());
    } catch (const QuadratureError&) {
      have_table = false;
      code = kExitNumerical;
    }
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        if (i == j) continue;
        std::vector<std::string> cells{format_number(values[k]),
                                       std::to_string(i), std::to_string(j)};
        if (!have_table) {
          for (int c = 0; c < 5; ++c) cells.push_back(format_number(kNaN));
        } else {
          const EdrVerdict v = edr(model, i, j, table, point.coupling);
          cells.push_back(format_number(v.forward));
          cells.push_back(format_number(v.backward));
          if (v.indeterminate) {
            cells.push_back("INDETERMINATE");
            cells.push_back(format_number(v.target));
            cells.push_back("INDETERMINATE");
          } else {
            cells.push_back(format_number(v.ratio));
            cells.push_back(format_number(v.target));
            cells.push_back(format_number(v.residual));
          }
        }
        emit_row(os, cells);
      }
    }
  }
  return code;
}

int run_kms_check(const RunConfig& config, std::ostream& os) {
  config.validate();
  std::vector<double> omegas = config.kms_omegas;
  if (omegas.empty())
    omegas = {0.25 * config.accel, 0.5 * config.accel, 1.0 * config.accel,
              2.0 * config.accel};
  const double window =
      config.kms_window > 0.0 ? config.kms_window : config.switching;

  emit_row(os, {"omega", "wtilde_plus", "wtilde_plus_err", "wtilde_minus",
                "wtilde_minus_err", "ratio", "target", "residual"});

  int code = kExitOk;
  for (double omega : omegas) {
    std::vector<std::string> cells{format_number(omega)};
    try {
      // Excitation side: the transform at -omega is the suppressed channel.
      const SpectralValue plus =
          windowed_kernel_fourier(-omega, config.accel, window);
      const SpectralValue minus =
          windowed_kernel_fourier(+omega, config.accel, window);
      const double ratio = plus.value.real() / minus.value.real();
      const double target =
          std::exp(-2.0 * std::numbers::pi * omega / config.accel);
      cells.push_back(format_number(plus.value.real()));
      cells.push_back(format_number(plus.error));
      cells.push_back(format_number(minus.value.real()));
      cells.push_back(format_number(minus.error));
      cells.push_back(format_number(ratio));
      cells.push_back(format_number(target));
      cells.push_back(format_number(std::abs(ratio - target) / target));
    } catch (const QuadratureError&) {
      for (int c = 0; c < 7; ++c) cells.push_back(format_number(kNaN));
      code = kExitNumerical;
    }
    emit_row(os, cells);
  }
  return code;
}

std::vector<SuiteResult> oracle_suites(const RunConfig& config) {
  config.validate();
  const IntegralParams p = config.integral_params();
  constexpr double kThreshold = 1e-10;
  std::vector<SuiteResult> suites;
  auto record = [&suites](std::string name, double deviation) {
    suites.push_back(
        {std::move(name), deviation, kThreshold, deviation <= kThreshold});
  };

  const DetectorModel ladder3 = build_su2_model(1.0, config.gap);
  const ResponseIntegralTable table3 = build_table(ladder3, p);
  const double population_sets[][3] = {{1.0, 0.0, 0.0},
                                       {0.0, 1.0, 0.0},
                                       {0.0, 0.0, 1.0},
                                       {0.2, 0.3, 0.5},
                                       {1.0 / 3, 1.0 / 3, 1.0 / 3}};

  {
    double dev = 0.0;
    for (const auto& set : population_sets) {
      const std::vector<double> pops{set[0], set[1], set[2]};
      const CorrectionReport got = second_order_correction(
          ladder3, DensityMatrix::diagonal(pops), table3, 1.0);
      const CorrectionReport want =
          qutrit_oracle_diagonal(set[0], set[1], set[2], table3);
      dev = std::max(dev,
                     max_relative_deviation(got.correction, want.correction));
    }
    record("qutrit-diagonal", dev);
  }

  {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(3, 3);
    rho(0, 0) = rho(0, 1) = rho(1, 0) = rho(1, 1) = 0.5;
    const CorrectionReport got = second_order_correction(
        ladder3, DensityMatrix::from_matrix(rho), table3, 1.0);
    const CorrectionReport want = qutrit_oracle_coherent(table3);
    record("qutrit-coherent",
           max_relative_deviation(got.correction, want.correction));
  }

  {
    std::mt19937 rng(20260823u);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double dev = 0.0;
    for (int sample = 0; sample < 100; ++sample) {
      Eigen::MatrixXcd g(3, 3);
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
          g(r, c) = std::complex<double>(gauss(rng), gauss(rng));
      Eigen::MatrixXcd rho = g * g.adjoint();
      rho /= rho.trace().real();
      const CorrectionReport got = second_order_correction(
          ladder3, DensityMatrix::from_matrix(rho), table3, 1.0);
      const CorrectionReport want =
          qutrit_oracle_general(rho(0, 0), rho(1, 1), rho(2, 2), rho(0, 1),
                                rho(0, 2), rho(1, 2), table3);
      dev = std::max(dev,
                     max_relative_deviation(got.correction, want.correction));
    }
    record("qutrit-random", dev);
  }

  {
    const DetectorModel ladder5 = build_su2_model(2.0, config.gap);
    const ResponseIntegralTable table5 = build_table(ladder5, p);
    const CorrectionReport got = second_order_correction(
        ladder5, DensityMatrix::basis_state(5, 2), table5, 1.0);
    const CorrectionReport want = ququint_oracle_middle(table5);
    double dev = max_relative_deviation(got.correction, want.correction);
    // Slots the closed form leaves empty must be exact (bitwise) zeros.
    for (int r = 0; r < 5; ++r) {
      for (int c = 0; c < 5; ++c) {
        if (want.correction(r, c) == std::complex<double>(0.0, 0.0) &&
            got.correction(r, c) != std::complex<double>(0.0, 0.0))
          dev = std::max(dev, 1.0);
      }
    }
    record("ququint-pattern", dev);
  }

  {
    const DetectorModel clock = build_hw_model(3, config.gap);
    const ResponseIntegralTable table_clock = build_table(clock, p);
    double dev = 0.0;
    for (const auto& set : population_sets) {
      const std::vector<double> pops{set[0], set[1], set[2]};
      const CorrectionReport got = second_order_correction(
          clock, DensityMatrix::diagonal(pops), table_clock, 1.0);
      const CorrectionReport want =
          hw_qutrit_oracle_diagonal(set[0], set[1], set[2], table_clock);
      dev = std::max(dev,
                     max_relative_deviation(got.correction, want.correction));
    }
    record("clock-qutrit", dev);
  }

  return suites;
}

int run_oracle_check(const RunConfig& config, std::ostream& os) {
  const std::vector<SuiteResult> suites = oracle_suites(config);
  int passed = 0;
  for (const SuiteResult& suite : suites) {
    os << "suite " << suite.name << ": max deviation "
       << format_number(suite.deviation) << " (threshold "
       << format_number(suite.threshold) << ") "
       << (suite.passed ? "PASS" : "FAIL") << '\n';
    if (suite.passed) ++passed;
  }
  os << "oracle-check: " << passed << "/" << suites.size() << " suites passed"
     << '\n';
  return passed == static_cast<int>(suites.size()) ? kExitOk : kExitNumerical;
}

int dispatch_command(const std::string& command, const RunConfig& config,
                     std::ostream& os) {
  if (command == "integrals") return run_integrals(config, os);
  if (command == "evolve") return run_evolve(config, os);
  if (command == "edr-sweep") return run_edr_sweep(config, os);
  if (command == "kms-check") return run_kms_check(config, os);
  if (command == "oracle-check") return run_oracle_check(config, os);
  throw ConfigError("unknown command '" + command + "'");
}

}  // namespace qdet
