// Oracle for the empty lattice: free parabolas (hbar/2m0)|k+G|^2 folded
// into the zone by brute-force enumeration of G.

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

inline std::vector<double> folded_parabolas(double kx, double ky, double pitch, double hbar_over_m0, int count,
                                            int reach = 6) {
  const double g = 2.0 * 3.14159265358979323846 / pitch;
  std::vector<double> e;
  for (int i = -reach; i <= reach; ++i)
    for (int j = -reach; j <= reach; ++j) {
      const double qx = kx + g * i, qy = ky + g * j;
      e.push_back(0.5 * hbar_over_m0 * (qx * qx + qy * qy));
    }
  std::sort(e.begin(), e.end());
  e.resize(static_cast<std::size_t>(count));
  return e;
}

}  // namespace oracle
