#include "rotphc/kp.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rotphc {

using cd = std::complex<double>;

double KpParameters::edge(int b) const {
  switch (b % 4) {
    case 0: return w_t5p;
    case 3: return w_t5;
    default: return w_t1;
  }
}

namespace {

double min_edge_gap(double a, double b, double c) {
  return std::min({std::abs(a - b), std::abs(b - c), std::abs(a - c)});
}

}  // namespace

KpParameters extract_kp_parameters(const BandSolution& at_t, const TQuartet& q, const PhysicalParameters& p) {
  const DerivedConstants dc = derive_constants(p);
  KpParameters k{};
  k.w_t5 = q.w_s;
  k.w_t5p = q.w_xy;
  k.w_t1 = q.w_x;
  k.m0 = dc.photon_mass;
  k.n = p.refractive_index;
  k.pitch = p.pitch;
  k.omega_scale = dc.omega_scale;

  const double gap = min_edge_gap(k.w_t5, k.w_t1, k.w_t5p);
  if (gap < 1e-6 * dc.omega_scale) {
    std::ostringstream os;
    os << "extract_kp_parameters: band edges at T are not distinct (smallest gap " << gap / dc.omega_scale
       << " omega_scale); k.p model not applicable";
    throw NumericalError(os.str());
  }
  k.P = std::abs(momentum_matrix_element(q.s, q.ix, at_t.basis, at_t.k).x()) / std::sqrt(2.0);
  if (!(k.P > 0.0)) throw NumericalError("extract_kp_parameters: vanishing interband momentum element");

  const AnalyticM am = analytic_M(p);
  k.m_plus = am.m.m_plus;
  k.m_minus = am.m.m_minus;
  return k;
}

KpParameters extract_kp_parameters(const PweSolver& solver, const PhysicalParameters& p) {
  const BandSolution at_t = solver.solve(bz::t_point(p.pitch), 6);
  const TQuartet q = resolve_t_quartet(at_t, solver.constants().omega_scale);
  return extract_kp_parameters(at_t, q, p);
}

KpParameters with_orbital(KpParameters k, const OrbitalParameters& m) {
  k.m_plus = m.m_plus;
  k.m_minus = m.m_minus;
  return k;
}

Matrix8cd KpMatrix::relative() const {
  Matrix8cd h = hkp + homega;
  for (int i = 0; i < 8; ++i) h(i, i) += h0(i) + kinetic;
  return h;
}

Matrix8cd KpMatrix::total() const {
  Matrix8cd h = relative();
  for (int i = 0; i < 8; ++i) h(i, i) += reference;
  return h;
}

KpMatrix build_kp_matrix(const Vec2& dk, double omega, const KpParameters& k) {
  KpMatrix m;
  m.dk = dk;
  m.omega = omega;
  m.reference = k.w_t1;
  for (int b = 0; b < 8; ++b) m.h0(b) = k.edge(b) - k.w_t1;
  const double hbar_over_m0 = constants::hbar / k.m0;
  m.kinetic = 0.5 * hbar_over_m0 * dk.squaredNorm();

  const cd kp(dk.x(), dk.y());   // k+
  const cd km(dk.x(), -dk.y());  // k-

  Eigen::Matrix4cd kp4 = Eigen::Matrix4cd::Zero();
  kp4(0, 1) = km;  kp4(0, 2) = kp;
  kp4(1, 0) = kp;  kp4(1, 3) = km;
  kp4(2, 0) = km;  kp4(2, 3) = -kp;
  kp4(3, 1) = kp;  kp4(3, 2) = -km;
  kp4 *= k.P / k.m0;

  const double a = constants::hbar / (2.0 * k.P);
  const double M = k.M();
  Eigen::Matrix4cd om4 = Eigen::Matrix4cd::Zero();
  om4(0, 0) = 1.0;
  om4(0, 1) = -k.m_minus * a * km;  om4(0, 2) = k.m_minus * a * kp;
  om4(1, 0) = -k.m_minus * a * kp;  om4(1, 1) = 1.0 - M;  om4(1, 3) = -k.m_plus * a * km;
  om4(2, 0) = k.m_minus * a * km;   om4(2, 2) = M + 1.0;  om4(2, 3) = -k.m_plus * a * kp;
  om4(3, 1) = -k.m_plus * a * kp;   om4(3, 2) = -k.m_plus * a * km;  om4(3, 3) = 1.0;
  om4 *= -omega / (k.n * k.n);

  m.hkp.setZero();
  m.homega.setZero();
  m.hkp.topLeftCorner<4, 4>() = kp4;
  m.hkp.bottomRightCorner<4, 4>() = kp4.conjugate();
  m.homega.topLeftCorner<4, 4>() = om4;
  m.homega.bottomRightCorner<4, 4>() = -om4.conjugate();

  const double zone = constants::pi / k.pitch;
  if (dk.norm() > 0.5 * zone) {
    std::ostringstream os;
    os << "build_kp_matrix: |dk| = " << dk.norm() / zone << " pi/Lambda exceeds 0.5 pi/Lambda";
    m.warnings.push_back(os.str());
  }
  const double gap = min_edge_gap(k.w_t5, k.w_t1, k.w_t5p);
  const double coupling = (m.hkp + m.homega).cwiseAbs().maxCoeff();
  if (coupling > 0.25 * gap) {
    std::ostringstream os;
    os << "build_kp_matrix: first-order coupling " << coupling << " rad/s exceeds 25% of the smallest edge gap "
       << gap << " rad/s";
    m.warnings.push_back(os.str());
  }
  return m;
}

double hermiticity_defect(const KpMatrix& m) {
  const Matrix8cd h = m.total();
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

namespace {

bool is_diagonal(const Matrix8cd& h) {
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      if (i != j && h(i, j) != 0.0) return false;
  return true;
}

struct Spectrum {
  std::array<KpLevel, 8> levels;
  Matrix8cd vectors;
};

Spectrum solve(const Vec2& dk, double omega, const KpParameters& k) {
  const KpMatrix m = build_kp_matrix(dk, omega, k);
  Spectrum s;
  std::array<int, 8> order{};
  for (int i = 0; i < 8; ++i) order[i] = i;

  if (dk.squaredNorm() == 0.0 && is_diagonal(m.homega)) {
    // Exact: every basis state is an eigenstate with shift diag(homega).
    std::array<double, 8> rel{};
    for (int i = 0; i < 8; ++i) rel[i] = m.h0(i) + m.homega(i, i).real();
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return rel[a] < rel[b]; });
    s.vectors.setZero();
    for (int r = 0; r < 8; ++r) {
      const int b = order[r];
      s.levels[r] = {m.reference + rel[b], b, m.homega(b, b).real()};
      s.vectors(b, r) = 1.0;
    }
    return s;
  }

  Eigen::SelfAdjointEigenSolver<Matrix8cd> es(m.relative());
  if (es.info() != Eigen::Success) throw NumericalError("kp: eigensolver did not converge");
  s.vectors = es.eigenvectors();
  for (int r = 0; r < 8; ++r) {
    int dom = 0;
    s.vectors.col(r).cwiseAbs2().maxCoeff(&dom);
    s.levels[r] = {m.reference + es.eigenvalues()(r), dom, es.eigenvalues()(r) - m.h0(dom)};
  }
  return s;
}

}  // namespace

Eigen::Matrix<double, 8, 1> kp_bands(const Vec2& dk, double omega, const KpParameters& k) {
  const Spectrum s = solve(dk, omega, k);
  Eigen::Matrix<double, 8, 1> w;
  for (int i = 0; i < 8; ++i) w(i) = s.levels[i].value;
  return w;
}

std::array<KpLevel, 8> kp_levels(const Vec2& dk, double omega, const KpParameters& k) { return solve(dk, omega, k).levels; }

Matrix8cd kp_states(const Vec2& dk, double omega, const KpParameters& k) { return solve(dk, omega, k).vectors; }

KpSplitting kp_splitting(double omega, const KpParameters& k) {
  KpSplitting out{};
  out.omega = omega;
  for (const auto& l : kp_levels(Vec2::Zero(), omega, k)) out.shifts[l.basis_index] = l.shift;
  out.dw_spin_t5 = out.shifts[7] - out.shifts[3];
  out.dw_spin_t5p = out.shifts[4] - out.shifts[0];
  out.dw_orbital = out.shifts[1] - out.shifts[2];
  return out;
}

}  // namespace rotphc
