// C4v symmetry analysis at the zone corner T = (pi/L, pi/L).
//
// Irreps carry the T1..T5 labels of the scalar basis functions
//   T1: S (A1)   T2: XY(X^2-Y^2) (A2)   T3: X^2-Y^2 (B1)   T4: XY (B2)
//   T5: {iX, iY} (E)
// Mulliken names in parentheses. Group elements act on functions as
// (g f)(r) = f(R_g^-1 r); on plane-wave coefficients at T this is the
// permutation c'(R_g q) = c(q) of q = k + G.

#pragma once

#include <Eigen/Core>

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "rotphc/pattern.hpp"
#include "rotphc/pwe.hpp"

namespace rotphc {

enum class Irrep { T1 = 0, T2, T3, T4, T5 };
inline constexpr int kIrrepCount = 5;
inline constexpr int kGroupOrder = 8;

const char* label(Irrep r);
const char* basis_tag(Irrep r);
const char* mulliken(Irrep r);
int dimension(Irrep r);

struct GroupElement {
  const char* name;
  Eigen::Matrix2i rotation;
  int cls;  // conjugacy class 0..4: E, 2C4, C2, 2sigma_v, 2sigma_d
};

/// E, C4, C4^3, C2, sigma_x (x -> -x), sigma_y (y -> -y), sigma_d (x <-> y),
/// sigma_d' ((x, y) -> (-y, -x)).
const std::array<GroupElement, kGroupOrder>& c4v_elements();
/// Index of the product a*b (apply b first).
int multiply(int a, int b);
int inverse(int g);
double character(Irrep r, int g);
/// 2x2 matrices of the T5 irrep; (iX, iY) transform as the vector (x, y).
Eigen::Matrix2d t5_matrix(int g);

/// Permutation representation of C4v on a plane-wave window at T.
class GroupAction {
 public:
  /// Throws InvalidParameter unless k is the T point and {k + G} is closed
  /// under the group (use reciprocal_window(T, ...)).
  GroupAction(const ReciprocalSet& basis, const Vec2& k);

  std::size_t size() const { return perm_[0].size(); }
  /// destination index of each source index under element g
  const std::vector<std::size_t>& permutation(int g) const { return perm_[g]; }

  Eigen::VectorXd apply(int g, const Eigen::VectorXd& c) const;
  Eigen::VectorXcd apply(int g, const Eigen::VectorXcd& c) const;

 private:
  std::array<std::vector<std::size_t>, kGroupOrder> perm_;
};

inline Eigen::VectorXd apply_group_element(int g, const Eigen::VectorXd& c, const GroupAction& a) {
  return a.apply(g, c);
}

struct IrrepContent {
  std::array<int, kIrrepCount> multiplicity{};
  std::array<double, kGroupOrder> characters{};
  double invariance_defect = 0.0;  // max_g |U_g V - V V^T U_g V|

  int dimension() const;
  std::string describe() const;  // e.g. "T1+T4+T5"
};

/// Character projection of a subspace spanned by the orthonormal columns of
/// `subspace`. Throws NumericalError if the span is not invariant (defect above
/// 1e-8) or the multiplicities are not integers.
IrrepContent classify_irrep(const Eigen::MatrixXd& subspace, const GroupAction& action);

struct AdaptedState {
  Irrep irrep;
  int partner;  // 0 (or x-like for T5), 1 for the y-like T5 partner
  Eigen::VectorXd coefficients;
};

/// Fixed orthonormal basis of the subspace that transforms exactly by the
/// irrep matrices. Phase: largest-magnitude coefficient positive (ties go to
/// the highest index); the y-like T5 partner is generated from the x-like one
/// by the transfer operator. Throws NumericalError on rank deficiency.
std::vector<AdaptedState> symmetry_adapted_basis(const Eigen::MatrixXd& subspace, const IrrepContent& content,
                                                 const GroupAction& action);

struct ClusterReport {
  int first_band;
  int size;
  double frequency;  // mean reduced frequency, rad/s
  IrrepContent content;
};

/// Degenerate clusters of a T-point solution, each classified. Clusters that
/// touch the last computed band are skipped (they may be incomplete).
std::vector<ClusterReport> classify_bands(const BandSolution& at_t, double omega_scale, double rel_tol = 1e-9);

/// The four lowest scalar states at T resolved into S (T1), iX, iY (T5) and
/// XY (T4), each with its energy.
struct TQuartet {
  Eigen::VectorXd s, ix, iy, xy;
  double w_s, w_x, w_xy;  // rad/s
  std::vector<ClusterReport> clusters;
};
/// Throws NumericalError unless the lowest four bands contain exactly
/// T1 + T4 + T5 and the fifth band is separated from them.
TQuartet resolve_t_quartet(const BandSolution& at_t, double omega_scale);

/// Vector state: coefficients of psi_x and psi_y on the same plane waves.
struct VectorState {
  Eigen::VectorXcd x, y;
};

/// The eight photonic harmonics of the k.p basis, upper block first:
///   (1/sqrt2)(T5'x +- i T5'y), (-+i/sqrt2)(T1 -+ i T2),
///   (+-i/sqrt2)(T3 +- i T4),   (-+i/sqrt2)(T5x +- i T5y)
/// with T5 = S{x,y}, T5' = XY{x,y}, T1 = (iX x + iY y)/sqrt2,
/// T2 = (iY x - iX y)/sqrt2, T3 = (iX x - iY y)/sqrt2, T4 = (iY x + iX y)/sqrt2.
std::array<VectorState, 8> photonic_harmonics(const TQuartet& q);

std::complex<double> inner(const VectorState& a, const VectorState& b);
/// g acting on a vector field: polarisation rotated by R_g, argument by R_g^-1.
VectorState apply(int g, const VectorState& v, const GroupAction& action);
/// Complex conjugation of the field psi(r) -> psi(r)^*, i.e. c(q) -> c(-q)^*.
VectorState conjugate(const VectorState& v, const ReciprocalSet& basis, const Vec2& k);

}  // namespace rotphc
