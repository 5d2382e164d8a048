#pragma once

// Programmatic entry points behind the command-line tool.  Each runner
// validates the configuration, computes, and writes CSV (or a short report
// for oracle-check) to the stream, returning a process exit code:
//
//   0  success
//   2  configuration problem (also: a regulator/model combination whose
//      half-line integrals do not exist in the distributional limit)
//   3  numerical failure -- a quadrature that did not converge (the affected
//      cells are emitted as nan with nan error columns) or an oracle suite
//      exceeding its threshold
//
// All numbers are printed with %.17g so that a double round-trips exactly;
// output is byte-deterministic for a fixed configuration.  Sweep points are
// computed independently (the integrals runner distributes them across
// threads) and always emitted in sweep order.

#include "qdet/config.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace qdet {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

// %.17g with the C locale's decimal point.
std::string format_number(double x);

// Windowed response integrals along the sweep.  Columns: the sweep value,
// then re/im/err triples for I, L+, L-, Q, R+, R- at the model's largest
// level splitting (plus U0, U1, V1+, V1- triples for the clock model).
int run_integrals(const RunConfig& config, std::ostream& os);

// Initial state, second-order correction, and assembled final state
// (row-major, re/im interleaved), with trace, minimum eigenvalue, and
// coherence norm, one row per sweep point.
int run_evolve(const RunConfig& config, std::ostream& os);

// Excitation/deexcitation ratio for every ordered level pair at every sweep
// point; sub-threshold channels print INDETERMINATE in the ratio and
// residual columns.
int run_edr_sweep(const RunConfig& config, std::ostream& os);

// Windowed Fourier transform of the kernel at +/- each requested frequency,
// with the detailed-balance ratio, target, and relative residual.
int run_kms_check(const RunConfig& config, std::ostream& os);

// Runs the five transcription suites (second-order engine against the
// hard-coded closed-form matrices) and reports the worst deviation of each.
int run_oracle_check(const RunConfig& config, std::ostream& os);

// Dispatch by subcommand name: integrals, evolve, edr-sweep, kms-check,
// oracle-check.
int dispatch_command(const std::string& command, const RunConfig& config,
                     std::ostream& os);

struct SuiteResult {
  std::string name;
  double deviation = 0.0;
  double threshold = 1e-10;
  bool passed = false;
};

// The five suites behind run_oracle_check, exposed for tests.
std::vector<SuiteResult> oracle_suites(const RunConfig& config);

// max_ij |got - want| / max(|want|_inf, 1e-300).
double max_relative_deviation(const Eigen::MatrixXcd& got,
                              const Eigen::MatrixXcd& want);

}  // namespace qdet
