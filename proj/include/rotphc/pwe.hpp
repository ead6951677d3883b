// Plane-wave expansion of the non-rotating envelope Hamiltonian
//
//   H/hbar = (hbar / 2 m0) |k + G|^2 delta_{G'G} - c/(2 n l_z) phi_{G'-G}
//
// with the constant paraxial offset removed. phi_G is real and even, so the
// matrix is real symmetric and eigenvectors are real. Matrices and
// eigenvalues are stored in frequency units (rad/s).
//
// Every data-parallel kernel here has a `_serial` twin that is kept as the
// reference implementation for tests and benchmarks.

#pragma once

#include <Eigen/Core>

#include <vector>

#include "rotphc/core.hpp"
#include "rotphc/pattern.hpp"

namespace rotphc {

struct PweHamiltonian {
  Vec2 k;
  ReciprocalSet basis;
  Eigen::MatrixXd matrix;  // rad/s
};

/// Throws InvalidParameter when the basis and pattern disagree on the pitch.
PweHamiltonian assemble_hamiltonian(const Vec2& k, const PhasePattern& pat, const ReciprocalSet& basis,
                                    const DerivedConstants& dc);
PweHamiltonian assemble_hamiltonian_serial(const Vec2& k, const PhasePattern& pat, const ReciprocalSet& basis,
                                           const DerivedConstants& dc);

/// max |H - H^T| / max |H|
double hermiticity_defect(const Eigen::MatrixXd& h);

struct BandSolution {
  Vec2 k;
  ReciprocalSet basis;
  Eigen::VectorXd frequencies;   // ascending reduced frequencies, rad/s
  Eigen::MatrixXd coefficients;  // column q = c_q(G), unit 2-norm

  int band_count() const { return static_cast<int>(frequencies.size()); }
};

/// Lowest n_bands eigenpairs in ascending order. Each eigenvector is signed so
/// that its largest-magnitude entry is positive. Throws NumericalError if the
/// eigensolver does not converge.
BandSolution solve_at_k(const PweHamiltonian& h, int n_bands);
/// Eigenvalues only.
Eigen::VectorXd eigenvalues_at_k(const PweHamiltonian& h, int n_bands);

/// Maximum relative eigen-residual |H c - w c| / |H| and orthonormality
/// defect of a solution against its Hamiltonian.
struct SolutionQuality {
  double residual;
  double orthogonality;
};
SolutionQuality check_solution(const PweHamiltonian& h, const BandSolution& s);

/// Sorted (hbar / 2 m0) |k + G|^2 over the basis, lowest `count` values.
Eigen::VectorXd empty_lattice_bands(const Vec2& k, const ReciprocalSet& basis, const DerivedConstants& dc,
                                    int count);

/// Groups ascending frequencies into clusters whose neighbours differ by at
/// most rel_tol * max(|w|, omega_scale).
struct Cluster {
  int first;
  int size;
};
std::vector<Cluster> degenerate_clusters(const Eigen::VectorXd& w, double omega_scale, double rel_tol = 1e-9);

/// <bra| p |ket> = sum_G bra(G) ket(G) hbar (k + G), kg m/s. Coefficients
/// are real, so the element is real and p_nm = p_mn.
Vec2 momentum_matrix_element(const Eigen::VectorXd& bra, const Eigen::VectorXd& ket, const ReciprocalSet& basis,
                             const Vec2& k);
Vec2 momentum_matrix_element(const BandSolution& s, int m, int n);
/// Bands taken from two solutions; throws InvalidParameter unless both were
/// computed at the same k.
Vec2 momentum_matrix_element(const BandSolution& bra, int m, const BandSolution& ket, int n);

/// Convenience wrapper bundling pattern, constants and cutoff. The basis at
/// each k is reciprocal_window(k, pitch, cutoff).
class PweSolver {
 public:
  PweSolver(const PhysicalParameters& p, int cutoff);

  const PhasePattern& pattern() const { return pattern_; }
  const DerivedConstants& constants() const { return dc_; }
  int cutoff() const { return cutoff_; }

  PweHamiltonian hamiltonian(const Vec2& k) const;
  BandSolution solve(const Vec2& k, int n_bands) const;
  Eigen::VectorXd frequencies(const Vec2& k, int n_bands) const;

 private:
  PhasePattern pattern_;
  DerivedConstants dc_;
  int cutoff_;
};

struct BandTable {
  std::vector<double> s;
  std::vector<Vec2> k;
  Eigen::MatrixXd bands;  // rows follow the path, columns are bands (rad/s)
};

/// Bands along a path; k-points are solved in parallel and stored by path
/// index, so the table is identical to band_structure_serial.
BandTable band_structure(const BzPath& path, const PweSolver& solver, int n_bands);
BandTable band_structure_serial(const BzPath& path, const PweSolver& solver, int n_bands);

}  // namespace rotphc
