#pragma once

// Finite-dimensional detector models: level structure, monopole coupling
// operators, transition bookkeeping, and density-matrix utilities.
//
// Two families are provided:
//
//  * su2(j): a (2j+1)-level ladder.  Monopole operator J_x in the Dicke basis
//    ordered m = +j ... -j (index 0 is the top level), energies
//    E_i = gap * (m_i + j), i.e. an equally spaced ladder with the ground
//    state at zero.  Only adjacent levels couple, so every Bohr frequency is
//    +/- gap.
//
//  * hw(d): a d-level clock model.  Monopole operator X + X^dag with X the
//    cyclic shift, energies E_k = gap * cos(2 pi k / d).  For d >= 3 the
//    spectrum is degenerate (k and d-k share an energy); the degenerate pairs
//    are represented bit-identically so zero Bohr frequencies are exact.

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace qdet {

struct DetectorModel {
  int dim = 0;
  Eigen::VectorXd energies;       // E_0 ... E_{dim-1}
  Eigen::MatrixXcd monopole;      // Hermitian coupling operator O
  std::string label;
};

// Hermitian, unit-trace, positive-semidefinite matrix wrapper.  Validation is
// tolerance-based; see validate().
struct DensityMatrix {
  Eigen::MatrixXcd entries;

  int dim() const { return static_cast<int>(entries.rows()); }

  // Throws std::invalid_argument if not square Hermitian (1e-12), unit trace
  // (1e-12), or has an eigenvalue below -1e-10.
  void validate() const;

  double min_eigenvalue() const;

  static DensityMatrix basis_state(int dim, int index);
  static DensityMatrix diagonal(const std::vector<double>& populations);
  static DensityMatrix from_matrix(Eigen::MatrixXcd m);
};

struct TransitionRecord {
  int m = 0;                          // row level
  int n = 0;                          // column level
  std::complex<double> element{0.0};  // O_{mn}
  double bohr = 0.0;                  // E_m - E_n
};

struct TransitionTable {
  std::vector<TransitionRecord> records;  // row-major over nonzero O_{mn}
};

// j must be a positive half-integer (1/2, 1, 3/2, ...), gap > 0.
DetectorModel build_su2_model(double j, double gap);

// dim >= 2, gap > 0.
DetectorModel build_hw_model(int dim, double gap);

// Nonzero monopole elements with their Bohr frequencies, in row-major order.
TransitionTable transition_table(const DetectorModel& model);

// Split a 3x3 matrix into its X-pattern part (diagonal plus the two outer
// corners) and the complementary O-pattern part.  Only dim = 3 is defined;
// other dimensions throw std::invalid_argument.
std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> x_o_split(const Eigen::MatrixXcd& state);

// Thermal state exp(-beta H)/Z for the model Hamiltonian; beta > 0.
DensityMatrix gibbs_state(const DetectorModel& model, double beta);

}  // namespace qdet
