#include "qdet/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qdet {

namespace {

void check_pair(const DetectorModel& model, int from, int to) {
  if (from < 0 || from >= model.dim || to < 0 || to >= model.dim) {
    throw std::invalid_argument("level index out of range");
  }
  if (from == to) {
    throw std::invalid_argument("transition requires two distinct levels");
  }
}

double max_table_magnitude(const ResponseIntegralTable& table) {
  double m = 0.0;
  for (const auto& [key, entry] : table.entries) {
    m = std::max(m, std::abs(entry.value));
  }
  return m;
}

// Ground level plus the lowest-lying level it couples to: the excitation
// channel used by the secular-growth fit.
std::pair<int, int> excitation_channel(const DetectorModel& model) {
  int ground = 0;
  for (int i = 1; i < model.dim; ++i) {
    if (model.energies(i) < model.energies(ground)) {
      ground = i;
    }
  }
  int best = -1;
  for (int j = 0; j < model.dim; ++j) {
    if (j == ground || std::abs(model.monopole(ground, j)) == 0.0) {
      continue;
    }
    if (model.energies(j) <= model.energies(ground)) {
      continue;
    }
    if (best < 0 || model.energies(j) < model.energies(best)) {
      best = j;
    }
  }
  if (best < 0) {
    throw std::invalid_argument(
        "secular_fit: ground level couples to no higher level");
  }
  return {ground, best};
}

}  // namespace

double transition_probability(const DetectorModel& model, int from, int to,
                              const IntegralParams& p, double coupling) {
  return transition_probability(model, from, to, build_table(model, p), coupling);
}

double transition_probability(const DetectorModel& model, int from, int to,
                              const ResponseIntegralTable& table,
                              double coupling) {
  check_pair(model, from, to);
  const DensityMatrix initial = DensityMatrix::basis_state(model.dim, from);
  const CorrectionReport report =
      second_order_correction(model, initial, table, coupling);
  return report.correction(to, to).real();
}

EdrVerdict edr(const DetectorModel& model, int from, int to,
               const IntegralParams& p, double coupling) {
  return edr(model, from, to, build_table(model, p), coupling);
}

EdrVerdict edr(const DetectorModel& model, int from, int to,
               const ResponseIntegralTable& table, double coupling) {
  check_pair(model, from, to);
  EdrVerdict v;
  v.from_level = from;
  v.to_level = to;
  v.forward = transition_probability(model, from, to, table, coupling);
  v.backward = transition_probability(model, to, from, table, coupling);

  const double beta = 2.0 * std::numbers::pi / table.params.worldline.accel;
  v.target = std::exp(-beta * (model.energies(to) - model.energies(from)));

  const double floor =
      1e-3 * max_table_magnitude(table) * coupling * coupling;
  if (std::abs(v.forward) <= floor && std::abs(v.backward) <= floor) {
    v.indeterminate = true;
    v.ratio = std::numeric_limits<double>::quiet_NaN();
    v.residual = std::numeric_limits<double>::quiet_NaN();
    return v;
  }
  v.ratio = v.forward / v.backward;
  v.residual = std::abs(v.ratio - v.target) / v.target;
  return v;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("trace_distance: dimensions differ");
  }
  const Eigen::MatrixXcd diff = a.entries - b.entries;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(diff);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double gibbs_distance(const DensityMatrix& state, const DetectorModel& model,
                      double beta) {
  if (state.dim() != model.dim) {
    throw std::invalid_argument("gibbs_distance: dimensions differ");
  }
  return trace_distance(state, gibbs_state(model, beta));
}

double coherence_norm(const DensityMatrix& state) {
  double sum = 0.0;
  for (int i = 0; i < state.dim(); ++i) {
    for (int j = 0; j < state.dim(); ++j) {
      if (i != j) {
        sum += std::abs(state.entries(i, j));
      }
    }
  }
  return sum;
}

SecularFit secular_fit(const DetectorModel& model, const IntegralParams& p,
                       double coupling, const std::vector<double>& window_grid) {
  if (window_grid.size() < 2) {
    throw std::invalid_argument("secular_fit: need at least two window widths");
  }
  for (std::size_t k = 0; k + 1 < window_grid.size(); ++k) {
    if (!(window_grid[k] < window_grid[k + 1])) {
      throw std::invalid_argument("secular_fit: window grid must be increasing");
    }
  }

  const auto [ground, excited] = excitation_channel(model);
  const double gap = model.energies(excited) - model.energies(ground);
  const double accel = p.worldline.accel;

  SecularFit fit;
  if (accel * window_grid.front() < 50.0) {
    fit.warnings.push_back(
        "secular_fit: accel * T below 50 on the grid; linear growth not yet "
        "established");
  }
  if (gap * window_grid.front() < 10.0) {
    fit.warnings.push_back(
        "secular_fit: gap * T below 10 on the grid; linear growth not yet "
        "established");
  }

  std::vector<double> prob(window_grid.size());
  for (std::size_t k = 0; k < window_grid.size(); ++k) {
    IntegralParams pk = p;
    pk.worldline.switching_width = window_grid[k];
    prob[k] = transition_probability(model, ground, excited, pk, coupling);
  }

  const double n = static_cast<double>(window_grid.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < window_grid.size(); ++k) {
    mx += window_grid[k];
    my += prob[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < window_grid.size(); ++k) {
    const double dx = window_grid[k] - mx;
    const double dy = prob[k] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  fit.slope = sxy / sxx;
  double ss_res = 0.0;
  for (std::size_t k = 0; k < window_grid.size(); ++k) {
    const double fitted = my + fit.slope * (window_grid[k] - mx);
    const double r = prob[k] - fitted;
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

}  // namespace qdet
