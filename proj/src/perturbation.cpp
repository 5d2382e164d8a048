#include "qdet/perturbation.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace qdet {

namespace {

// Largest positive key frequency: the ladder gap (or the clock splitting) as
// the table itself represents it.  Deriving it from the keys rather than from
// model parameters keeps oracle lookups bit-identical to engine lookups.
double table_gap(const ResponseIntegralTable& table) {
  double w = 0.0;
  for (const auto& [key, entry] : table.entries) {
    w = std::max(w, key.omega1);
  }
  return w;
}

// Accumulates slot += coeff * value(key) (optionally conjugated) with error
// and provenance bookkeeping shared by the generic engine and the oracles.
class ReportBuilder {
 public:
  ReportBuilder(int dim, const ResponseIntegralTable& table)
      : dim_(dim),
        table_(table),
        matrix_(Eigen::MatrixXcd::Zero(dim, dim)),
        errors_(static_cast<std::size_t>(dim) * dim, 0.0),
        provenance_(static_cast<std::size_t>(dim) * dim) {}

  void add(int row, int col, std::complex<double> coeff, TableKey key,
           bool conjugated = false) {
    if (coeff.real() == 0.0 && coeff.imag() == 0.0) {
      return;  // keep structural zeros exact; also skips unreachable keys
    }
    const TableEntry& entry = table_.at(key);
    const std::complex<double> v =
        conjugated ? std::conj(entry.value) : entry.value;
    matrix_(row, col) += coeff * v;
    const std::size_t slot = static_cast<std::size_t>(row) * dim_ + col;
    errors_[slot] += std::abs(coeff) * entry.error;
    provenance_[slot].push_back({key, coeff, conjugated});
  }

  CorrectionReport finish() {
    CorrectionReport report;
    report.correction = std::move(matrix_);
    double worst = 0.0;
    for (int r = 0; r < dim_; ++r) {
      for (int c = 0; c < dim_; ++c) {
        const std::size_t slot = static_cast<std::size_t>(r) * dim_ + c;
        worst = std::max(worst, errors_[slot]);
        if (!provenance_[slot].empty()) {
          report.provenance.push_back({r, c, std::move(provenance_[slot])});
        }
      }
    }
    report.worst_error = worst;
    return report;
  }

 private:
  int dim_;
  const ResponseIntegralTable& table_;
  Eigen::MatrixXcd matrix_;
  std::vector<double> errors_;
  std::vector<std::vector<ProvenanceTerm>> provenance_;
};

void check_populations(double a, double b, double c) {
  if (a < -1e-12 || b < -1e-12 || c < -1e-12 || std::abs(a + b + c - 1.0) > 1e-12) {
    throw std::invalid_argument(
        "oracle populations must be nonnegative and sum to 1");
  }
}

}  // namespace

CorrectionReport second_order_correction(const DetectorModel& model,
                                         const DensityMatrix& initial,
                                         const IntegralParams& p,
                                         double coupling) {
  const ResponseIntegralTable table = build_table(model, p);
  return second_order_correction(model, initial, table, coupling);
}

CorrectionReport second_order_correction(const DetectorModel& model,
                                         const DensityMatrix& initial,
                                         const ResponseIntegralTable& table,
                                         double coupling) {
  initial.validate();
  if (initial.dim() != model.dim) {
    throw std::invalid_argument(
        "second_order_correction: state and model dimensions differ");
  }

  const int d = model.dim;
  const Eigen::MatrixXcd& O = model.monopole;
  const Eigen::MatrixXcd& rho = initial.entries;
  const Eigen::VectorXd& E = model.energies;
  const double l2 = coupling * coupling;

  ReportBuilder builder(d, table);
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      for (int pp = 0; pp < d; ++pp) {
        for (int q = 0; q < d; ++q) {
          // rho^(1,1): O_mp rho_pq O_qn G(w_qn, w_mp)
          const std::complex<double> c11 = O(m, pp) * rho(pp, q) * O(q, n);
          builder.add(m, n, l2 * c11,
                      TableKey{E(q) - E(n), E(m) - E(pp), HalfLine::None});

          // rho^(2,0): -O_mp O_pq rho_qn G_half(w_mp, w_pq, +), plus its
          // adjoint into the mirrored slot (the rho^(0,2) part).
          const std::complex<double> c20 = O(m, pp) * O(pp, q) * rho(q, n);
          const TableKey half{E(m) - E(pp), E(pp) - E(q), HalfLine::Plus};
          builder.add(m, n, -l2 * c20, half);
          builder.add(n, m, -l2 * std::conj(c20), half, /*conjugated=*/true);
        }
      }
    }
  }
  return builder.finish();
}

CorrectionReport qutrit_oracle_diagonal(double a, double b, double c,
                                        const ResponseIntegralTable& integrals) {
  check_populations(a, b, c);
  const double W = table_gap(integrals);
  const TableKey Lp{W, -W, HalfLine::None};
  const TableKey Lm{-W, W, HalfLine::None};
  const TableKey I{W, W, HalfLine::None};
  const TableKey Q{W, W, HalfLine::Plus};

  ReportBuilder builder(3, integrals);
  builder.add(0, 0, 0.5 * b, Lm);
  builder.add(0, 0, -0.5 * a, Lp);
  builder.add(1, 1, 0.5 * a, Lp);
  builder.add(1, 1, 0.5 * c, Lm);
  builder.add(1, 1, -0.5 * b, Lm);
  builder.add(1, 1, -0.5 * b, Lp);
  builder.add(2, 2, 0.5 * b, Lp);
  builder.add(2, 2, -0.5 * c, Lm);
  builder.add(0, 2, 0.5 * b, I);
  builder.add(0, 2, -0.5 * a, Q, true);
  builder.add(0, 2, -0.5 * c, Q);
  builder.add(2, 0, 0.5 * b, I, true);
  builder.add(2, 0, -0.5 * a, Q);
  builder.add(2, 0, -0.5 * c, Q, true);
  return builder.finish();
}

CorrectionReport qutrit_oracle_general(std::complex<double> a,
                                       std::complex<double> b,
                                       std::complex<double> c,
                                       std::complex<double> d,
                                       std::complex<double> e,
                                       std::complex<double> f,
                                       const ResponseIntegralTable& integrals) {
  Eigen::MatrixXcd rho(3, 3);
  rho << a, d, e, std::conj(d), b, f, std::conj(e), std::conj(f), c;
  DensityMatrix::from_matrix(rho).validate();

  const double W = table_gap(integrals);
  const TableKey Lp{W, -W, HalfLine::None};
  const TableKey Lm{-W, W, HalfLine::None};
  const TableKey I{W, W, HalfLine::None};
  const TableKey Q{W, W, HalfLine::Plus};
  const TableKey Rp{W, -W, HalfLine::Plus};
  const TableKey Rm{-W, W, HalfLine::Plus};
  const std::complex<double> h{0.5, 0.0};

  ReportBuilder builder(3, integrals);
  // (0,0): (-a Lp + b Lm - e Q* - e* Q) / 2
  builder.add(0, 0, -h * a, Lp);
  builder.add(0, 0, h * b, Lm);
  builder.add(0, 0, -h * e, Q, true);
  builder.add(0, 0, -h * std::conj(e), Q);
  // (0,1): (d* I - d Lp - d Rm* + f Lm - f* Q) / 2
  builder.add(0, 1, h * std::conj(d), I);
  builder.add(0, 1, -h * d, Lp);
  builder.add(0, 1, -h * d, Rm, true);
  builder.add(0, 1, h * f, Lm);
  builder.add(0, 1, -h * std::conj(f), Q);
  // (0,2): (-a Q* + b I - c Q - e Rm* - e Rp) / 2
  builder.add(0, 2, -h * a, Q, true);
  builder.add(0, 2, h * b, I);
  builder.add(0, 2, -h * c, Q);
  builder.add(0, 2, -h * e, Rm, true);
  builder.add(0, 2, -h * e, Rp);
  // (1,0): (d I - d* Lp - d* Rm + f* Lm - f Q*) / 2
  builder.add(1, 0, h * d, I);
  builder.add(1, 0, -h * std::conj(d), Lp);
  builder.add(1, 0, -h * std::conj(d), Rm);
  builder.add(1, 0, h * std::conj(f), Lm);
  builder.add(1, 0, -h * f, Q, true);
  // (1,1): (a Lp - b Lm - b Lp + c Lm + (e + e*) I) / 2
  builder.add(1, 1, h * a, Lp);
  builder.add(1, 1, -h * b, Lm);
  builder.add(1, 1, -h * b, Lp);
  builder.add(1, 1, h * c, Lm);
  builder.add(1, 1, h * (e + std::conj(e)), I);
  // (1,2): (d Lp - d* Q* - f Lm - f Rp + f* I) / 2
  builder.add(1, 2, h * d, Lp);
  builder.add(1, 2, -h * std::conj(d), Q, true);
  builder.add(1, 2, -h * f, Lm);
  builder.add(1, 2, -h * f, Rp);
  builder.add(1, 2, h * std::conj(f), I);
  // (2,0): (-a Q + b I - c Q* - e* Rp* - e* Rm) / 2
  builder.add(2, 0, -h * a, Q);
  builder.add(2, 0, h * b, I);
  builder.add(2, 0, -h * c, Q, true);
  builder.add(2, 0, -h * std::conj(e), Rp, true);
  builder.add(2, 0, -h * std::conj(e), Rm);
  // (2,1): (d* Lp - d Q - f* Lm - f* Rp* + f I) / 2
  builder.add(2, 1, h * std::conj(d), Lp);
  builder.add(2, 1, -h * d, Q);
  builder.add(2, 1, -h * std::conj(f), Lm);
  builder.add(2, 1, -h * std::conj(f), Rp, true);
  builder.add(2, 1, h * f, I);
  // (2,2): (b Lp - c Lm - e Q - e* Q*) / 2
  builder.add(2, 2, h * b, Lp);
  builder.add(2, 2, -h * c, Lm);
  builder.add(2, 2, -h * e, Q);
  builder.add(2, 2, -h * std::conj(e), Q, true);
  return builder.finish();
}

CorrectionReport qutrit_oracle_coherent(const ResponseIntegralTable& integrals) {
  const double W = table_gap(integrals);
  const TableKey Lp{W, -W, HalfLine::None};
  const TableKey Lm{-W, W, HalfLine::None};
  const TableKey I{W, W, HalfLine::None};
  const TableKey Q{W, W, HalfLine::Plus};
  const TableKey Rm{-W, W, HalfLine::Plus};
  const double q = 0.25;

  ReportBuilder builder(3, integrals);
  builder.add(0, 0, q, Lm);
  builder.add(0, 0, -q, Lp);
  builder.add(0, 1, q, I);
  builder.add(0, 1, -q, Lp);
  builder.add(0, 1, -q, Rm, true);
  builder.add(0, 2, q, I);
  builder.add(0, 2, -q, Q, true);
  builder.add(1, 0, q, I);
  builder.add(1, 0, -q, Lp);
  builder.add(1, 0, -q, Rm);
  builder.add(1, 1, -q, Lm);
  builder.add(1, 2, q, Lp);
  builder.add(1, 2, -q, Q, true);
  builder.add(2, 0, q, I);
  builder.add(2, 0, -q, Q);
  builder.add(2, 1, q, Lp);
  builder.add(2, 1, -q, Q);
  builder.add(2, 2, q, Lp);
  return builder.finish();
}

CorrectionReport ququint_oracle_middle(const ResponseIntegralTable& integrals) {
  const double W = table_gap(integrals);
  const TableKey Lp{W, -W, HalfLine::None};
  const TableKey Lm{-W, W, HalfLine::None};
  const TableKey I{W, W, HalfLine::None};
  const TableKey Isym{-W, -W, HalfLine::None};  // equals I by sign symmetry
  const TableKey Q{W, W, HalfLine::Plus};
  const double g = 1.5;
  const double s = std::sqrt(1.5);

  ReportBuilder builder(5, integrals);
  builder.add(1, 1, g, Lm);
  builder.add(3, 3, g, Lp);
  builder.add(1, 3, g, I);
  builder.add(3, 1, g, Isym);
  builder.add(2, 2, -g, Lp);
  builder.add(2, 2, -g, Lm);
  builder.add(0, 2, -s, Q);
  builder.add(4, 2, -s, Q);
  builder.add(2, 0, -s, Q, true);
  builder.add(2, 4, -s, Q, true);
  return builder.finish();
}

CorrectionReport hw_qutrit_oracle_diagonal(double a, double b, double c,
                                           const ResponseIntegralTable& integrals) {
  check_populations(a, b, c);
  const double W = table_gap(integrals);  // splitting between top and pair
  const TableKey Lp{W, -W, HalfLine::None};
  const TableKey Lm{-W, W, HalfLine::None};
  const TableKey Um{-W, 0.0, HalfLine::None};  // U_{-}
  const TableKey U0{0.0, 0.0, HalfLine::None};
  const TableKey Vp{W, 0.0, HalfLine::Plus};   // V^+
  const TableKey Vm{W, 0.0, HalfLine::Minus};  // V^-
  const TableKey Rm{-W, W, HalfLine::Plus};    // R_{-}

  ReportBuilder builder(3, integrals);
  // First-order-squared part (rho^(1,1)).
  builder.add(1, 1, a, Lp);
  builder.add(1, 2, a, Lp);
  builder.add(2, 1, a, Lp);
  builder.add(2, 2, a, Lp);
  builder.add(0, 0, b, Lm);
  builder.add(0, 2, b, Um);
  builder.add(2, 0, b, Um);
  builder.add(2, 2, b, U0);
  builder.add(0, 0, c, Lm);
  builder.add(0, 1, c, Um);
  builder.add(1, 0, c, Um);
  builder.add(1, 1, c, U0);
  // Time-ordered part plus its adjoint (rho^(2,0) + rho^(0,2)).
  builder.add(0, 0, -2.0 * a, Lp);
  builder.add(0, 1, -a, Vm);
  builder.add(0, 2, -a, Vm);
  builder.add(1, 0, -a, Vm, true);
  builder.add(2, 0, -a, Vm, true);
  builder.add(0, 1, -b, Vp);
  builder.add(1, 0, -b, Vp, true);
  builder.add(1, 1, -b, U0);
  builder.add(1, 1, -b, Lm);
  builder.add(1, 2, -b, Rm, true);
  builder.add(2, 1, -b, Rm);
  builder.add(0, 2, -c, Vp);
  builder.add(2, 0, -c, Vp, true);
  builder.add(2, 2, -c, U0);
  builder.add(2, 2, -c, Lm);
  builder.add(1, 2, -c, Rm);
  builder.add(2, 1, -c, Rm, true);
  return builder.finish();
}

DensityMatrix assemble_final_state(const DensityMatrix& initial,
                                   const CorrectionReport& report) {
  if (report.correction.rows() != initial.dim() ||
      report.correction.cols() != initial.dim()) {
    throw std::invalid_argument(
        "assemble_final_state: correction and state dimensions differ");
  }
  Eigen::MatrixXcd final_m = initial.entries + report.correction;
  if ((final_m - final_m.adjoint().eval()).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("assemble_final_state: result not Hermitian");
  }
  if (std::abs(final_m.trace() - 1.0) > 1e-10) {
    throw std::invalid_argument("assemble_final_state: trace not preserved");
  }
  // Positivity is not enforced: the second-order truncation can push
  // eigenvalues slightly negative at fourth order in the coupling.
  DensityMatrix out;
  out.entries = std::move(final_m);
  return out;
}

}  // namespace qdet
