#pragma once

// Flat INI-style run configuration: [section] headers, key = value lines,
// '#' or ';' comments.  Grammar (all keys optional unless noted):
//
//   [model]     type = su2 | hw ; j = <half-integer> ; d = <int> ; gap = <real>
//   [worldline] accel = <real> ; switching = <real> ; i_epsilon = <real>
//   [coupling]  lambda = <real >= 0>
//   [regulator] kind = tanh | nascent ; a0 = <real>  (negative -> T/200)
//   [initial]   kind = basis | diagonal | matrix ; index = <int> ;
//               populations = p0, p1, ... ;
//               row<k> = re, im, re, im, ...   (one per matrix row)
//   [sweep]     axis = accel | switching | gap | a0 ; from = ; to = ; points =
//   [kms]       omegas = w0, w1, ... ; window = <real>  (kms-check only)
//   [output]    path = <file>
//
// Parse errors carry the line number and field; cross-field consistency is
// checked by validate().

#include "qdet/qudit_algebra.hpp"
#include "qdet/response_integrals.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdet {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModelKind { Su2, Hw };
enum class InitialKind { Basis, Diagonal, Matrix };
enum class SweepAxis { Accel, Switching, Gap, RegulatorScale };

struct SweepSpec {
  SweepAxis axis = SweepAxis::Switching;
  double from = 0.0;
  double to = 0.0;
  int points = 1;
};

struct RunConfig {
  ModelKind model = ModelKind::Su2;
  double j = 1.0;
  int d = 3;
  double gap = 1.0;

  double accel = 1.0;
  double switching = 8.0;
  double i_epsilon = -1.0;  // negative -> worldline default
  double coupling = 0.01;
  RegulatorScheme regulator{};

  InitialKind initial_kind = InitialKind::Basis;
  int initial_index = 0;
  std::vector<double> populations;
  std::vector<std::vector<double>> matrix_rows;  // re, im interleaved

  std::optional<SweepSpec> sweep;
  std::vector<double> kms_omegas;
  double kms_window = -1.0;  // negative -> switching width
  std::string output;

  // Cross-field consistency; throws ConfigError.
  void validate() const;

  DetectorModel build_model() const;
  DensityMatrix build_initial() const;
  IntegralParams integral_params() const;
};

// The sweep grid (a single point at the switching width when no sweep is
// configured) and the per-point parameter substitution.
std::vector<double> sweep_values(const RunConfig& config);
RunConfig apply_sweep(const RunConfig& config, double value);
std::string sweep_axis_name(const RunConfig& config);

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

}  // namespace qdet
