#include "rotphc/pattern.hpp"

#include <cmath>

namespace rotphc {

using constants::pi;

PhasePattern PhasePattern::from(const PhysicalParameters& p) {
  validate(p);
  return PhasePattern{p.pitch, std::sqrt(p.fill_factor) * p.pitch, p.phase_contrast};
}

double phase_at(const Vec2& r, const PhasePattern& pat) {
  const double L = pat.pitch;
  const double x = r.x() - L * std::round(r.x() / L);
  const double y = r.y() - L * std::round(r.y() / L);
  const double h = 0.5 * pat.pixel_side;
  return (std::abs(x) < h && std::abs(y) < h) ? pat.contrast : 0.0;
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double fourier_coefficient(const Vec2& G, const PhasePattern& pat) {
  const double ff = pat.fill_factor();
  const double h = 0.5 * pat.pixel_side;
  return pat.contrast * ff * (sinc(G.x() * h) * sinc(G.y() * h));
}

double fourier_coefficient(int i, int j, const PhasePattern& pat) {
  // G a / 2 = pi i a / Lambda
  const double ratio = pat.pixel_side / pat.pitch;
  return pat.contrast * ratio * ratio * (sinc(pi * i * ratio) * sinc(pi * j * ratio));
}

ReciprocalSet::ReciprocalSet(double pitch, int i_min, int i_max, int j_min, int j_max)
    : pitch_(pitch), i_min_(i_min), j_min_(j_min), nx_(i_max - i_min + 1), ny_(j_max - j_min + 1) {
  if (!(pitch > 0.0)) throw InvalidParameter("reciprocal set: pitch must be > 0");
  if (nx_ < 1 || ny_ < 1) throw InvalidParameter("reciprocal set: empty index range");
}

std::optional<std::size_t> ReciprocalSet::flat(int i, int j) const {
  const int a = i - i_min_;
  const int b = j - j_min_;
  if (a < 0 || a >= nx_ || b < 0 || b >= ny_) return std::nullopt;
  return static_cast<std::size_t>(a) * static_cast<std::size_t>(ny_) + static_cast<std::size_t>(b);
}

Vec2 ReciprocalSet::vector(std::size_t flat) const {
  const auto [i, j] = index(flat);
  const double g = 2.0 * pi / pitch_;
  return {g * i, g * j};
}

ReciprocalSet reciprocal_vectors(double pitch, int N) {
  if (N < 1) throw InvalidParameter("reciprocal_vectors: cutoff N must be >= 1");
  return ReciprocalSet(pitch, -N, N, -N, N);
}

namespace {

// Integer range of i with |k + 2 pi i / L| <= (2N+1) pi / L, in units of pi/L.
std::array<int, 2> window_range(double k, double pitch, int N) {
  const double kr = k * pitch / pi;  // k in units of pi/Lambda
  const double bound = 2.0 * N + 1.0;
  constexpr double eps = 1e-9;
  const int lo = static_cast<int>(std::ceil((-bound - kr) / 2.0 - eps));
  const int hi = static_cast<int>(std::floor((bound - kr) / 2.0 + eps));
  return {lo, hi};
}

}  // namespace

ReciprocalSet reciprocal_window(const Vec2& k, double pitch, int N) {
  if (N < 1) throw InvalidParameter("reciprocal_window: cutoff N must be >= 1");
  const auto [ilo, ihi] = window_range(k.x(), pitch, N);
  const auto [jlo, jhi] = window_range(k.y(), pitch, N);
  return ReciprocalSet(pitch, ilo, ihi, jlo, jhi);
}

namespace bz {
Vec2 gamma() { return {0.0, 0.0}; }
Vec2 x_point(double pitch) { return {pi / pitch, 0.0}; }
Vec2 t_point(double pitch) { return {pi / pitch, pi / pitch}; }
}  // namespace bz

namespace {

std::pair<std::string, Vec2> resolve_label(const std::string& label, double pitch) {
  if (label == "G" || label == "Gamma" || label == "GAMMA" || label == "Γ") return {"G", bz::gamma()};
  if (label == "X") return {"X", bz::x_point(pitch)};
  if (label == "T" || label == "M") return {"T", bz::t_point(pitch)};
  throw InvalidParameter("bz_path: unknown label '" + label + "'");
}

}  // namespace

BzPath bz_path(const std::vector<std::string>& labels, int samples_per_segment, double pitch) {
  if (labels.size() < 2) throw InvalidParameter("bz_path: need at least two labels");
  if (samples_per_segment < 2) throw InvalidParameter("bz_path: samples_per_segment must be >= 2");
  if (!(pitch > 0.0)) throw InvalidParameter("bz_path: pitch must be > 0");

  BzPath path;
  for (const auto& l : labels) {
    auto [name, k] = resolve_label(l, pitch);
    if (!path.vertices.empty() && (path.vertices.back() - k).norm() == 0.0)
      throw InvalidParameter("bz_path: consecutive vertices coincide at '" + l + "'");
    path.labels.push_back(name);
    path.vertices.push_back(k);
  }

  double s0 = 0.0;
  path.vertex_s.push_back(0.0);
  const int nseg = static_cast<int>(path.vertices.size()) - 1;
  for (int seg = 0; seg < nseg; ++seg) {
    const Vec2 a = path.vertices[seg];
    const Vec2 b = path.vertices[seg + 1];
    const double len = (b - a).norm();
    const int first = seg == 0 ? 0 : 1;
    for (int m = first; m < samples_per_segment; ++m) {
      const double t = static_cast<double>(m) / (samples_per_segment - 1);
      const Vec2 k = m == samples_per_segment - 1 ? b : Vec2(a + t * (b - a));
      path.samples.push_back({s0 + t * len, k, seg});
    }
    s0 += len;
    path.vertex_s.push_back(s0);
  }
  return path;
}

}  // namespace rotphc
