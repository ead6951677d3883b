#include "rotphc/pwe.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

namespace rotphc {

namespace {

void check_pitch(const PhasePattern& pat, const ReciprocalSet& basis) {
  if (std::abs(pat.pitch - basis.pitch()) > 1e-12 * pat.pitch)
    throw InvalidParameter("assemble_hamiltonian: basis pitch " + std::to_string(basis.pitch()) +
                           " does not match pattern pitch " + std::to_string(pat.pitch));
}

// phi_{(di, dj)} for |di| < nx, |dj| < ny, indexed by absolute difference so
// that the matrix is symmetric bit for bit.
Eigen::MatrixXd potential_table(const PhasePattern& pat, const ReciprocalSet& basis, double prefactor) {
  const int nx = basis.i_max() - basis.i_min() + 1;
  const int ny = basis.j_max() - basis.j_min() + 1;
  Eigen::MatrixXd t(nx, ny);
  for (int a = 0; a < nx; ++a)
    for (int b = 0; b < ny; ++b) t(a, b) = prefactor * fourier_coefficient(a, b, pat);
  return t;
}

double kinetic(const Vec2& k, const Vec2& G, const DerivedConstants& dc) {
  return 0.5 * dc.hbar_over_m0 * (k + G).squaredNorm();
}

void fill_column(Eigen::MatrixXd& m, Eigen::Index col, const Vec2& k, const ReciprocalSet& basis,
                 const Eigen::MatrixXd& table, const DerivedConstants& dc) {
  const auto [ic, jc] = basis.index(static_cast<std::size_t>(col));
  const Eigen::Index n = m.rows();
  for (Eigen::Index row = 0; row < n; ++row) {
    const auto [ir, jr] = basis.index(static_cast<std::size_t>(row));
    m(row, col) = -table(std::abs(ir - ic), std::abs(jr - jc));
  }
  m(col, col) += kinetic(k, basis.vector(static_cast<std::size_t>(col)), dc);
}

void normalise_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index best = 0;
  double amax = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a >= amax * (1.0 - 1e-9)) {
      best = i;
      amax = std::max(amax, a);
    }
  }
  if (v(best) < 0.0) v = -v;
}

}  // namespace

PweHamiltonian assemble_hamiltonian_serial(const Vec2& k, const PhasePattern& pat, const ReciprocalSet& basis,
                                           const DerivedConstants& dc) {
  check_pitch(pat, basis);
  const auto n = static_cast<Eigen::Index>(basis.size());
  const Eigen::MatrixXd table = potential_table(pat, basis, dc.potential_prefactor);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index col = 0; col < n; ++col) fill_column(m, col, k, basis, table, dc);
  return {k, basis, std::move(m)};
}

PweHamiltonian assemble_hamiltonian(const Vec2& k, const PhasePattern& pat, const ReciprocalSet& basis,
                                    const DerivedConstants& dc) {
  check_pitch(pat, basis);
  const auto n = static_cast<Eigen::Index>(basis.size());
  const Eigen::MatrixXd table = potential_table(pat, basis, dc.potential_prefactor);
  Eigen::MatrixXd m(n, n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index col = 0; col < n; ++col) fill_column(m, col, k, basis, table, dc);
  return {k, basis, std::move(m)};
}

double hermiticity_defect(const Eigen::MatrixXd& h) {
  const double scale = h.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (h - h.transpose()).cwiseAbs().maxCoeff() / scale;
}

BandSolution solve_at_k(const PweHamiltonian& h, int n_bands) {
  const auto n = h.matrix.rows();
  if (n_bands < 1 || n_bands > n)
    throw InvalidParameter("solve_at_k: n_bands=" + std::to_string(n_bands) + " outside [1, " +
                           std::to_string(n) + "]");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw NumericalError("solve_at_k: eigensolver did not converge");

  BandSolution s{h.k, h.basis, es.eigenvalues().head(n_bands), es.eigenvectors().leftCols(n_bands)};
  for (int q = 0; q < n_bands; ++q) normalise_sign(s.coefficients.col(q));
  return s;
}

Eigen::VectorXd eigenvalues_at_k(const PweHamiltonian& h, int n_bands) {
  const auto n = h.matrix.rows();
  if (n_bands < 1 || n_bands > n)
    throw InvalidParameter("eigenvalues_at_k: n_bands=" + std::to_string(n_bands) + " outside [1, " +
                           std::to_string(n) + "]");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigenvalues_at_k: eigensolver did not converge");
  return es.eigenvalues().head(n_bands);
}

SolutionQuality check_solution(const PweHamiltonian& h, const BandSolution& s) {
  const double hnorm = h.matrix.cwiseAbs().maxCoeff();
  const Eigen::MatrixXd r = h.matrix * s.coefficients - s.coefficients * s.frequencies.asDiagonal();
  const Eigen::MatrixXd g =
      s.coefficients.transpose() * s.coefficients - Eigen::MatrixXd::Identity(s.band_count(), s.band_count());
  double res = 0.0;
  for (int q = 0; q < s.band_count(); ++q) res = std::max(res, r.col(q).norm());
  return {hnorm > 0.0 ? res / hnorm : res, g.cwiseAbs().maxCoeff()};
}

Eigen::VectorXd empty_lattice_bands(const Vec2& k, const ReciprocalSet& basis, const DerivedConstants& dc,
                                    int count) {
  if (count < 1 || static_cast<std::size_t>(count) > basis.size())
    throw InvalidParameter("empty_lattice_bands: count outside basis size");
  std::vector<double> e(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) e[i] = kinetic(k, basis.vector(i), dc);
  std::partial_sort(e.begin(), e.begin() + count, e.end());
  return Eigen::Map<Eigen::VectorXd>(e.data(), count);
}

std::vector<Cluster> degenerate_clusters(const Eigen::VectorXd& w, double omega_scale, double rel_tol) {
  std::vector<Cluster> out;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (!out.empty()) {
      const double prev = w(i - 1);
      const double tol = rel_tol * std::max({std::abs(prev), std::abs(w(i)), omega_scale});
      if (std::abs(w(i) - prev) <= tol) {
        ++out.back().size;
        continue;
      }
    }
    out.push_back({static_cast<int>(i), 1});
  }
  return out;
}

Vec2 momentum_matrix_element(const Eigen::VectorXd& bra, const Eigen::VectorXd& ket, const ReciprocalSet& basis,
                             const Vec2& k) {
  if (bra.size() != ket.size() || static_cast<std::size_t>(bra.size()) != basis.size())
    throw InvalidParameter("momentum_matrix_element: coefficient length does not match basis");
  Vec2 p = Vec2::Zero();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    p += bra(idx) * ket(idx) * (k + basis.vector(i));
  }
  return constants::hbar * p;
}

Vec2 momentum_matrix_element(const BandSolution& s, int m, int n) {
  return momentum_matrix_element(s.coefficients.col(m), s.coefficients.col(n), s.basis, s.k);
}

Vec2 momentum_matrix_element(const BandSolution& bra, int m, const BandSolution& ket, int n) {
  if ((bra.k - ket.k).norm() != 0.0 || bra.basis.size() != ket.basis.size())
    throw InvalidParameter("momentum_matrix_element: bands belong to different k");
  return momentum_matrix_element(bra.coefficients.col(m), ket.coefficients.col(n), bra.basis, bra.k);
}

PweSolver::PweSolver(const PhysicalParameters& p, int cutoff)
    : pattern_(PhasePattern::from(p)), dc_(derive_constants(p)), cutoff_(cutoff) {
  if (cutoff < 1) throw InvalidParameter("pwe cutoff must be >= 1");
}

PweHamiltonian PweSolver::hamiltonian(const Vec2& k) const {
  return assemble_hamiltonian_serial(k, pattern_, reciprocal_window(k, pattern_.pitch, cutoff_), dc_);
}

BandSolution PweSolver::solve(const Vec2& k, int n_bands) const { return solve_at_k(hamiltonian(k), n_bands); }

Eigen::VectorXd PweSolver::frequencies(const Vec2& k, int n_bands) const {
  return eigenvalues_at_k(hamiltonian(k), n_bands);
}

namespace {

BandTable empty_table(const BzPath& path, int n_bands) {
  BandTable t;
  t.bands.resize(static_cast<Eigen::Index>(path.samples.size()), n_bands);
  for (const auto& smp : path.samples) {
    t.s.push_back(smp.s);
    t.k.push_back(smp.k);
  }
  return t;
}

}  // namespace

BandTable band_structure_serial(const BzPath& path, const PweSolver& solver, int n_bands) {
  BandTable t = empty_table(path, n_bands);
  for (std::size_t i = 0; i < path.samples.size(); ++i)
    t.bands.row(static_cast<Eigen::Index>(i)) = solver.frequencies(path.samples[i].k, n_bands).transpose();
  return t;
}

BandTable band_structure(const BzPath& path, const PweSolver& solver, int n_bands) {
  BandTable t = empty_table(path, n_bands);
  const auto count = static_cast<long>(path.samples.size());
  std::vector<std::exception_ptr> errors(path.samples.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      t.bands.row(i) = solver.frequencies(path.samples[static_cast<std::size_t>(i)].k, n_bands).transpose();
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return t;
}

}  // namespace rotphc
