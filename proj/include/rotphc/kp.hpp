// 8x8 k.p model around T in the basis of the photonic harmonics (upper block
// first):
//   1: T5'  2: T1..T4 (-+i)  3: T1..T4 (+-i)  4: T5
// Energies are reduced angular frequencies (rad/s); wave vectors are measured
// from T (1/m). Rotation enters to first order through H_Omega.

#pragma once

#include <Eigen/Core>

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "rotphc/core.hpp"
#include "rotphc/observables.hpp"
#include "rotphc/pwe.hpp"
#include "rotphc/symmetry.hpp"

namespace rotphc {

struct KpParameters {
  double w_t5p;   // scalar XY edge
  double w_t1;    // scalar {iX, iY} doublet edge
  double w_t5;    // scalar S edge
  double P;       // kg m/s
  double m_plus, m_minus;
  double m0;
  double n;
  double pitch;
  double omega_scale;

  double M() const { return m_plus + m_minus; }
  /// Edge of basis state b (0..7).
  double edge(int b) const;
};

/// Band edges and P from a T-point solution and its resolved quartet, M+-
/// from analytic_M. Throws NumericalError when two edges are closer than
/// 1e-6 omega_scale (outside the k.p validity, e.g. the empty lattice).
KpParameters extract_kp_parameters(const BandSolution& at_t, const TQuartet& q, const PhysicalParameters& p);
/// Solves at T with the given solver first.
KpParameters extract_kp_parameters(const PweSolver& solver, const PhysicalParameters& p);

/// Same parameters with the orbital pair replaced (e.g. by the mass route).
KpParameters with_orbital(KpParameters k, const OrbitalParameters& m);

using Matrix8cd = Eigen::Matrix<std::complex<double>, 8, 8>;

/// The matrix is kept in parts so that exact statements at dk = 0 survive
/// rounding: total = reference + h0 + kinetic + hkp + homega.
struct KpMatrix {
  Vec2 dk;
  double omega;
  double reference;     // w_T1
  Eigen::Matrix<double, 8, 1> h0;   // edges relative to reference
  double kinetic;       // (hbar/2m0) |dk|^2
  Matrix8cd hkp;
  Matrix8cd homega;
  std::vector<std::string> warnings;

  /// reference * I + h0 + kinetic + hkp + homega
  Matrix8cd total() const;
  /// total() minus reference * I
  Matrix8cd relative() const;
};

/// Matrix exactly as printed in the block form, conjugates in the lower
/// block. Warns (in KpMatrix::warnings) for |dk| > 0.5 pi/Lambda and when the
/// first-order coupling exceeds 25% of the smallest edge gap.
KpMatrix build_kp_matrix(const Vec2& dk, double omega, const KpParameters& k);

/// max |H - H^dagger| of the total matrix.
double hermiticity_defect(const KpMatrix& m);

/// Eight ascending eigenfrequencies (rad/s).
Eigen::Matrix<double, 8, 1> kp_bands(const Vec2& dk, double omega, const KpParameters& k);

struct KpLevel {
  double value;     // rad/s
  int basis_index;  // dominant basis state
  double shift;     // value - edge(basis_index)
};

/// Eigenstates with their dominant basis component, ascending in value.
/// At dk = 0 the matrix is diagonal and the shifts are taken from it
/// directly, so splittings are exact there.
std::array<KpLevel, 8> kp_levels(const Vec2& dk, double omega, const KpParameters& k);

/// Eigenvectors of kp_levels in the same order, columns in the 8-state basis.
Matrix8cd kp_states(const Vec2& dk, double omega, const KpParameters& k);

/// Splittings at dk = 0 from levels paired by basis index:
/// spin from the T5 pair (states 3, 7) and the T5' pair (0, 4), orbital
/// from the upper-block quadruplet states (1 minus 2).
struct KpSplitting {
  double omega;
  double dw_spin_t5;
  double dw_spin_t5p;
  double dw_orbital;
  std::array<double, 8> shifts;  // in basis order
};
KpSplitting kp_splitting(double omega, const KpParameters& k);

}  // namespace rotphc
