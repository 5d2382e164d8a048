#include "qdet/qudit_algebra.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace qdet {

namespace {

constexpr double kTwoPi = 6.2831853071795864769;

bool is_half_integer(double j) {
  const double twoj = 2.0 * j;
  return std::abs(twoj - std::round(twoj)) < 1e-12;
}

}  // namespace

void DensityMatrix::validate() const {
  const auto& m = entries;
  if (m.rows() != m.cols() || m.rows() < 2) {
    throw std::invalid_argument("DensityMatrix: need a square matrix, dim >= 2");
  }
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("DensityMatrix: not Hermitian within 1e-12");
  }
  if (std::abs(m.trace() - std::complex<double>(1.0, 0.0)) > 1e-12) {
    throw std::invalid_argument("DensityMatrix: trace differs from 1 by more than 1e-12");
  }
  if (min_eigenvalue() < -1e-10) {
    throw std::invalid_argument("DensityMatrix: eigenvalue below -1e-10");
  }
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(entries, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

DensityMatrix DensityMatrix::basis_state(int dim, int index) {
  if (dim < 2 || index < 0 || index >= dim) {
    throw std::invalid_argument("basis_state: index out of range");
  }
  DensityMatrix rho;
  rho.entries = Eigen::MatrixXcd::Zero(dim, dim);
  rho.entries(index, index) = 1.0;
  return rho;
}

DensityMatrix DensityMatrix::diagonal(const std::vector<double>& populations) {
  const int d = static_cast<int>(populations.size());
  if (d < 2) {
    throw std::invalid_argument("diagonal: need >= 2 populations");
  }
  double sum = 0.0;
  for (double p : populations) {
    if (p < -1e-12) {
      throw std::invalid_argument("diagonal: negative population");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    throw std::invalid_argument("diagonal: populations must sum to 1");
  }
  DensityMatrix rho;
  rho.entries = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    rho.entries(i, i) = populations[i];
  }
  return rho;
}

DensityMatrix DensityMatrix::from_matrix(Eigen::MatrixXcd m) {
  DensityMatrix rho;
  rho.entries = std::move(m);
  rho.validate();
  return rho;
}

DetectorModel build_su2_model(double j, double gap) {
  if (!(j > 0.0) || !is_half_integer(j)) {
    throw std::invalid_argument("build_su2_model: j must be a positive half-integer");
  }
  if (!(gap > 0.0)) {
    throw std::invalid_argument("build_su2_model: gap must be positive");
  }
  const int dim = static_cast<int>(std::lround(2.0 * j)) + 1;

  DetectorModel model;
  model.dim = dim;
  char label[32];
  std::snprintf(label, sizeof(label), "su2(j=%g)", j);
  model.label = label;
  model.energies.resize(dim);
  model.monopole = Eigen::MatrixXcd::Zero(dim, dim);

  for (int i = 0; i < dim; ++i) {
    const double m = j - i;           // Dicke label, +j at index 0
    model.energies(i) = gap * (m + j);  // ladder with ground level at 0
  }
  for (int i = 0; i + 1 < dim; ++i) {
    const double m = j - i;  // upper level of the pair (m, m-1)
    const double elem = 0.5 * std::sqrt((j + m) * (j - m + 1.0));
    model.monopole(i, i + 1) = elem;
    model.monopole(i + 1, i) = elem;
  }
  return model;
}

DetectorModel build_hw_model(int dim, double gap) {
  if (dim < 2) {
    throw std::invalid_argument("build_hw_model: dim must be >= 2");
  }
  if (!(gap > 0.0)) {
    throw std::invalid_argument("build_hw_model: gap must be positive");
  }
  DetectorModel model;
  model.dim = dim;
  model.label = "hw(d=" + std::to_string(dim) + ")";
  model.energies.resize(dim);
  model.monopole = Eigen::MatrixXcd::Zero(dim, dim);

  for (int k = 0; k < dim; ++k) {
    // cos(2 pi k / d) = cos(2 pi (d-k) / d): evaluate at the smaller of the
    // two equivalent arguments so degenerate levels share identical bits and
    // their Bohr frequency is exactly zero.
    const int kk = std::min(k, dim - k);
    model.energies(k) = gap * std::cos(kTwoPi * kk / dim);
  }
  for (int m = 0; m < dim; ++m) {
    const int up = (m + 1) % dim;
    const int dn = (m + dim - 1) % dim;
    model.monopole(up, m) += 1.0;  // X
    model.monopole(dn, m) += 1.0;  // X^dag
  }
  return model;
}

TransitionTable transition_table(const DetectorModel& model) {
  TransitionTable table;
  for (int m = 0; m < model.dim; ++m) {
    for (int n = 0; n < model.dim; ++n) {
      const std::complex<double> elem = model.monopole(m, n);
      if (std::abs(elem) != 0.0) {
        table.records.push_back({m, n, elem, model.energies(m) - model.energies(n)});
      }
    }
  }
  return table;
}

std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> x_o_split(const Eigen::MatrixXcd& state) {
  if (state.rows() != 3 || state.cols() != 3) {
    throw std::invalid_argument("x_o_split: defined for 3x3 matrices only");
  }
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(3, 3);
  for (int i = 0; i < 3; ++i) {
    x(i, i) = state(i, i);
  }
  x(0, 2) = state(0, 2);
  x(2, 0) = state(2, 0);
  return {x, state - x};
}

DensityMatrix gibbs_state(const DetectorModel& model, double beta) {
  if (!(beta > 0.0)) {
    throw std::invalid_argument("gibbs_state: beta must be positive");
  }
  const double emin = model.energies.minCoeff();
  Eigen::VectorXd weights(model.dim);
  for (int i = 0; i < model.dim; ++i) {
    weights(i) = std::exp(-beta * (model.energies(i) - emin));
  }
  weights /= weights.sum();

  DensityMatrix rho;
  rho.entries = Eigen::MatrixXcd::Zero(model.dim, model.dim);
  for (int i = 0; i < model.dim; ++i) {
    rho.entries(i, i) = weights(i);
  }
  return rho;
}

}  // namespace qdet
