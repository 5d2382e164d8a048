#include "qdet/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qdet {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(int line, const std::string& field, const std::string& what) {
  std::ostringstream os;
  os << "config error at line " << line;
  if (!field.empty()) os << ", field '" << field << "'";
  os << ": " << what;
  throw ConfigError(os.str());
}

double parse_double(const std::string& value, int line, const std::string& field) {
  try {
    std::size_t used = 0;
    const double x = std::stod(value, &used);
    if (trim(value.substr(used)).empty()) return x;
  } catch (const std::exception&) {
  }
  fail(line, field, "expected a real number, got '" + value + "'");
}

int parse_int(const std::string& value, int line, const std::string& field) {
  try {
    std::size_t used = 0;
    const long x = std::stol(value, &used);
    if (trim(value.substr(used)).empty()) return static_cast<int>(x);
  } catch (const std::exception&) {
  }
  fail(line, field, "expected an integer, got '" + value + "'");
}

std::vector<double> parse_list(const std::string& value, int line, const std::string& field) {
  std::vector<double> out;
  std::string item;
  std::istringstream is(value);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(line, field, "empty element in list");
    out.push_back(parse_double(item, line, field));
  }
  if (out.empty()) fail(line, field, "expected a comma-separated list");
  return out;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig config;
  std::istringstream stream(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(stream, raw)) {
    ++line;
    const std::size_t cut = raw.find_first_of("#;");
    if (cut != std::string::npos) raw.erase(cut);
    const std::string text_line = trim(raw);
    if (text_line.empty()) continue;

    if (text_line.front() == '[') {
      if (text_line.back() != ']') fail(line, "", "unterminated section header");
      section = trim(text_line.substr(1, text_line.size() - 2));
      static const char* kSections[] = {"model",   "worldline", "coupling", "regulator",
                                        "initial", "sweep",     "kms",      "output"};
      bool known = false;
      for (const char* name : kSections) known = known || section == name;
      if (!known) fail(line, section, "unknown section");
      continue;
    }

    const std::size_t eq = text_line.find('=');
    if (eq == std::string::npos) fail(line, "", "expected 'key = value'");
    const std::string key = trim(text_line.substr(0, eq));
    const std::string value = trim(text_line.substr(eq + 1));
    if (key.empty()) fail(line, "", "missing key before '='");
    if (value.empty()) fail(line, key, "missing value");
    if (section.empty()) fail(line, key, "key outside any [section]");

    if (section == "model") {
      if (key == "type") {
        if (value == "su2")
          config.model = ModelKind::Su2;
        else if (value == "hw")
          config.model = ModelKind::Hw;
        else
          fail(line, key, "expected 'su2' or 'hw'");
      } else if (key == "j") {
        config.j = parse_double(value, line, key);
      } else if (key == "d") {
        config.d = parse_int(value, line, key);
      } else if (key == "gap") {
        config.gap = parse_double(value, line, key);
      } else {
        fail(line, key, "unknown key in [model]");
      }
    } else if (section == "worldline") {
      if (key == "accel")
        config.accel = parse_double(value, line, key);
      else if (key == "switching")
        config.switching = parse_double(value, line, key);
      else if (key == "i_epsilon")
        config.i_epsilon = parse_double(value, line, key);
      else
        fail(line, key, "unknown key in [worldline]");
    } else if (section == "coupling") {
      if (key == "lambda")
        config.coupling = parse_double(value, line, key);
      else
        fail(line, key, "unknown key in [coupling]");
    } else if (section == "regulator") {
      if (key == "kind") {
        if (value == "tanh" || value == "tanh_heaviside")
          config.regulator.kind = RegulatorKind::TanhHeaviside;
        else if (value == "nascent" || value == "nascent_delta")
          config.regulator.kind = RegulatorKind::NascentDelta;
        else
          fail(line, key, "expected 'tanh' or 'nascent'");
      } else if (key == "a0") {
        config.regulator.a0 = parse_double(value, line, key);
      } else {
        fail(line, key, "unknown key in [regulator]");
      }
    } else if (section == "initial") {
      if (key == "kind") {
        if (value == "basis")
          config.initial_kind = InitialKind::Basis;
        else if (value == "diagonal")
          config.initial_kind = InitialKind::Diagonal;
        else if (value == "matrix")
          config.initial_kind = InitialKind::Matrix;
        else
          fail(line, key, "expected 'basis', 'diagonal' or 'matrix'");
      } else if (key == "index") {
        config.initial_index = parse_int(value, line, key);
      } else if (key == "populations") {
        config.populations = parse_list(value, line, key);
      } else if (key.rfind("row", 0) == 0) {
        int row = -1;
        try {
          std::size_t used = 0;
          row = std::stoi(key.substr(3), &used);
          if (used != key.size() - 3) row = -1;
        } catch (const std::exception&) {
        }
        if (row < 0 || row > 63) fail(line, key, "expected row0, row1, ...");
        if (config.matrix_rows.size() <= static_cast<std::size_t>(row))
          config.matrix_rows.resize(static_cast<std::size_t>(row) + 1);
        config.matrix_rows[static_cast<std::size_t>(row)] = parse_list(value, line, key);
      } else {
        fail(line, key, "unknown key in [initial]");
      }
    } else if (section == "sweep") {
      if (!config.sweep) config.sweep.emplace();
      if (key == "axis") {
        if (value == "accel" || value == "a")
          config.sweep->axis = SweepAxis::Accel;
        else if (value == "switching" || value == "T" || value == "t")
          config.sweep->axis = SweepAxis::Switching;
        else if (value == "gap" || value == "omega")
          config.sweep->axis = SweepAxis::Gap;
        else if (value == "a0")
          config.sweep->axis = SweepAxis::RegulatorScale;
        else
          fail(line, key, "expected one of accel, switching, gap, a0");
      } else if (key == "from") {
        config.sweep->from = parse_double(value, line, key);
      } else if (key == "to") {
        config.sweep->to = parse_double(value, line, key);
      } else if (key == "points") {
        config.sweep->points = parse_int(value, line, key);
      } else {
        fail(line, key, "unknown key in [sweep]");
      }
    } else if (section == "kms") {
      if (key == "omegas")
        config.kms_omegas = parse_list(value, line, key);
      else if (key == "window")
        config.kms_window = parse_double(value, line, key);
      else
        fail(line, key, "unknown key in [kms]");
    } else if (section == "output") {
      if (key == "path")
        config.output = value;
      else
        fail(line, key, "unknown key in [output]");
    }
  }
  return config;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

void RunConfig::validate() const {
  auto positive = [](double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x))
      throw ConfigError(std::string("config error: ") + name + " must be positive and finite");
  };
  positive(gap, "model.gap");
  positive(accel, "worldline.accel");
  positive(switching, "worldline.switching");
  if (i_epsilon == 0.0) throw ConfigError("config error: worldline.i_epsilon must be nonzero");
  if (!(coupling >= 0.0) || !std::isfinite(coupling))
    throw ConfigError("config error: coupling.lambda must be nonnegative and finite");

  if (model == ModelKind::Su2) {
    const double twice = 2.0 * j;
    if (!(j > 0.0) || std::abs(twice - std::round(twice)) > 1e-9)
      throw ConfigError("config error: model.j must be a positive half-integer");
  } else if (d < 2) {
    throw ConfigError("config error: model.d must be at least 2");
  }

  try {
    const DetectorModel m = build_model();
    (void)build_initial();
    integral_params().validate();
    (void)m;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }

  if (sweep) {
    if (sweep->points < 1) throw ConfigError("config error: sweep.points must be at least 1");
    if (!(sweep->from > 0.0))
      throw ConfigError("config error: sweep.from must be positive (all axes are scales)");
    if (sweep->points > 1 && !(sweep->to > sweep->from))
      throw ConfigError("config error: sweep range must be increasing (from < to)");
  }
  for (double w : kms_omegas) {
    if (w == 0.0 || !std::isfinite(w))
      throw ConfigError("config error: kms.omegas entries must be nonzero and finite");
  }
  if (kms_window == 0.0 || (kms_window > 0.0 && !std::isfinite(kms_window)))
    throw ConfigError("config error: kms.window must be positive (or omitted)");
}

DetectorModel RunConfig::build_model() const {
  if (model == ModelKind::Su2) return build_su2_model(j, gap);
  return build_hw_model(d, gap);
}

DensityMatrix RunConfig::build_initial() const {
  const DetectorModel m = build_model();
  const int dim = m.dim;
  switch (initial_kind) {
    case InitialKind::Basis:
      if (initial_index < 0 || initial_index >= dim)
        throw ConfigError("config error: initial.index out of range for model dimension " +
                          std::to_string(dim));
      return DensityMatrix::basis_state(dim, initial_index);
    case InitialKind::Diagonal: {
      if (static_cast<int>(populations.size()) != dim)
        throw ConfigError("config error: initial.populations needs exactly " +
                          std::to_string(dim) + " entries");
      return DensityMatrix::diagonal(populations);
    }
    case InitialKind::Matrix: {
      if (static_cast<int>(matrix_rows.size()) != dim)
        throw ConfigError("config error: initial matrix needs exactly " + std::to_string(dim) +
                          " row<k> entries");
      Eigen::MatrixXcd rho(dim, dim);
      for (int r = 0; r < dim; ++r) {
        const auto& row = matrix_rows[static_cast<std::size_t>(r)];
        if (static_cast<int>(row.size()) != 2 * dim)
          throw ConfigError("config error: initial.row" + std::to_string(r) + " needs " +
                            std::to_string(2 * dim) + " numbers (re, im interleaved)");
        for (int c = 0; c < dim; ++c)
          rho(r, c) = std::complex<double>(row[static_cast<std::size_t>(2 * c)],
                                           row[static_cast<std::size_t>(2 * c + 1)]);
      }
      return DensityMatrix::from_matrix(rho);
    }
  }
  throw ConfigError("config error: unknown initial state kind");
}

IntegralParams RunConfig::integral_params() const {
  IntegralParams params;
  params.worldline.accel = accel;
  params.worldline.i_epsilon = i_epsilon;
  params.worldline.switching_width = switching;
  params.regulator = regulator;
  params.mode = KernelMode::DistributionalLimit;
  return params;
}

std::vector<double> sweep_values(const RunConfig& config) {
  if (!config.sweep) return {config.switching};
  const SweepSpec& s = *config.sweep;
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(s.points));
  if (s.points == 1) {
    values.push_back(s.from);
    return values;
  }
  const double step = (s.to - s.from) / (s.points - 1);
  for (int k = 0; k < s.points; ++k) values.push_back(s.from + step * k);
  return values;
}

RunConfig apply_sweep(const RunConfig& config, double value) {
  RunConfig point = config;
  const SweepAxis axis = config.sweep ? config.sweep->axis : SweepAxis::Switching;
  switch (axis) {
    case SweepAxis::Accel:
      point.accel = value;
      break;
    case SweepAxis::Switching:
      point.switching = value;
      break;
    case SweepAxis::Gap:
      point.gap = value;
      break;
    case SweepAxis::RegulatorScale:
      point.regulator.a0 = value;
      break;
  }
  return point;
}

std::string sweep_axis_name(const RunConfig& config) {
  const SweepAxis axis = config.sweep ? config.sweep->axis : SweepAxis::Switching;
  switch (axis) {
    case SweepAxis::Accel:
      return "accel";
    case SweepAxis::Switching:
      return "switching";
    case SweepAxis::Gap:
      return "gap";
    case SweepAxis::RegulatorScale:
      return "a0";
  }
  return "sweep";
}

}  // namespace qdet
