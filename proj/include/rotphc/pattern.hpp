// Mirror phase pattern, reciprocal lattice and Brillouin-zone paths of the
// square lattice.
//
// The pixel is centred on the cell origin, so phi(x, y) is even in x and y and
// invariant under x <-> y; all Fourier coefficients are real.

#pragma once

#include <Eigen/Core>

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rotphc/core.hpp"

namespace rotphc {

using Vec2 = Eigen::Vector2d;

struct PhasePattern {
  double pitch;       // Lambda, m
  double pixel_side;  // a = sqrt(FF) Lambda, m
  double contrast;    // dphi, rad

  static PhasePattern from(const PhysicalParameters& p);
  double fill_factor() const { return (pixel_side / pitch) * (pixel_side / pitch); }
};

/// phi at an arbitrary in-plane point (wrapped into the unit cell).
double phase_at(const Vec2& r, const PhasePattern& pat);

/// sin(x)/x with the removable singularity filled in.
double sinc(double x);

/// Cell-averaged phi(r) exp(-i G.r) for any G (real because phi is even).
double fourier_coefficient(const Vec2& G, const PhasePattern& pat);
/// Same for G = (2 pi / Lambda)(i, j).
double fourier_coefficient(int i, int j, const PhasePattern& pat);

/// Rectangular block of reciprocal vectors G_ij = (2 pi / Lambda)(i, j),
/// i in [i_min, i_max], j in [j_min, j_max], flattened row-major in (i, j).
class ReciprocalSet {
 public:
  ReciprocalSet(double pitch, int i_min, int i_max, int j_min, int j_max);

  double pitch() const { return pitch_; }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_); }
  int i_min() const { return i_min_; }
  int i_max() const { return i_min_ + nx_ - 1; }
  int j_min() const { return j_min_; }
  int j_max() const { return j_min_ + ny_ - 1; }

  std::array<int, 2> index(std::size_t flat) const {
    return {i_min_ + static_cast<int>(flat) / ny_, j_min_ + static_cast<int>(flat) % ny_};
  }
  std::optional<std::size_t> flat(int i, int j) const;
  Vec2 vector(std::size_t flat) const;

 private:
  double pitch_;
  int i_min_, j_min_;
  int nx_, ny_;
};

/// The (2N+1)^2 vectors with |i|, |j| <= N. Throws for N < 1.
ReciprocalSet reciprocal_vectors(double pitch, int N);

/// Plane-wave window centred on the Bloch vector: all G with
/// |k + G|_inf <= (2N+1) pi / Lambda. Equals reciprocal_vectors(pitch, N)
/// for k strictly inside the zone; on the zone boundary it holds the extra
/// row/column that keeps {k + G} closed under the little group of k
/// (e.g. (2N+2)^2 waves at T).
ReciprocalSet reciprocal_window(const Vec2& k, double pitch, int N);

namespace bz {
Vec2 gamma();
Vec2 x_point(double pitch);
/// Zone corner (pi/Lambda, pi/Lambda); called M in most square-lattice texts.
Vec2 t_point(double pitch);
}  // namespace bz

struct BzSample {
  double s;      // cumulative arc length, 1/m
  Vec2 k;
  int segment;
};

struct BzPath {
  std::vector<std::string> labels;   // canonical labels: G, X, T
  std::vector<Vec2> vertices;
  std::vector<double> vertex_s;      // arc length at each vertex
  std::vector<BzSample> samples;
};

/// Piecewise-linear path through labelled vertices. Accepted labels:
/// "G", "Gamma", "Γ", "X", "T", "M" (synonym of T). Neighbouring segments
/// share their endpoint sample.
BzPath bz_path(const std::vector<std::string>& labels, int samples_per_segment, double pitch);

}  // namespace rotphc
