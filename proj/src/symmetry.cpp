#include "rotphc/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rotphc {

namespace {

constexpr std::array<std::array<int, 5>, kIrrepCount> kCharacterTable{{
    {1, 1, 1, 1, 1},     // T1  A1
    {1, 1, 1, -1, -1},   // T2  A2
    {1, -1, 1, 1, -1},   // T3  B1
    {1, -1, 1, -1, 1},   // T4  B2
    {2, 0, -2, 0, 0},    // T5  E
}};

Eigen::Matrix2i mat(int a, int b, int c, int d) {
  Eigen::Matrix2i m;
  m << a, b, c, d;
  return m;
}

bool near_t_point(const Vec2& k, double pitch) {
  const Vec2 t = bz::t_point(pitch);
  return (k - t).norm() <= 1e-12 * t.norm();
}

void fix_phase(Eigen::Ref<Eigen::VectorXd> v) {
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

Eigen::MatrixXd apply_to_columns(int g, const Eigen::MatrixXd& v, const GroupAction& a) {
  Eigen::MatrixXd out(v.rows(), v.cols());
  const auto& p = a.permutation(g);
  for (Eigen::Index r = 0; r < v.rows(); ++r) out.row(static_cast<Eigen::Index>(p[r])) = v.row(r);
  return out;
}

// Pick `count` orthonormal vectors from the columns of `images`, largest
// residual norm first.
std::vector<Eigen::VectorXd> pick_orthonormal(const Eigen::MatrixXd& images, int count, const char* what) {
  std::vector<Eigen::VectorXd> picked;
  Eigen::MatrixXd rest = images;
  for (int n = 0; n < count; ++n) {
    Eigen::Index best = 0;
    double bestnorm = -1.0;
    for (Eigen::Index c = 0; c < rest.cols(); ++c) {
      const double nr = rest.col(c).norm();
      if (nr > bestnorm * (1.0 + 1e-12)) {
        bestnorm = nr;
        best = c;
      }
    }
    if (bestnorm < 1e-6)
      throw NumericalError(std::string("symmetry_adapted_basis: projection rank deficient for ") + what +
                           " (degenerate cluster misgrouped?)");
    Eigen::VectorXd v = rest.col(best) / bestnorm;
    fix_phase(v);
    for (Eigen::Index c = 0; c < rest.cols(); ++c) rest.col(c) -= v * v.dot(rest.col(c));
    picked.push_back(std::move(v));
  }
  return picked;
}

}  // namespace

const char* label(Irrep r) {
  static constexpr const char* names[] = {"T1", "T2", "T3", "T4", "T5"};
  return names[static_cast<int>(r)];
}

const char* basis_tag(Irrep r) {
  static constexpr const char* tags[] = {"S", "XY(X^2-Y^2)", "X^2-Y^2", "XY", "iX,iY"};
  return tags[static_cast<int>(r)];
}

const char* mulliken(Irrep r) {
  static constexpr const char* names[] = {"A1", "A2", "B1", "B2", "E"};
  return names[static_cast<int>(r)];
}

int dimension(Irrep r) { return r == Irrep::T5 ? 2 : 1; }

const std::array<GroupElement, kGroupOrder>& c4v_elements() {
  static const std::array<GroupElement, kGroupOrder> elements{{
      {"E", mat(1, 0, 0, 1), 0},
      {"C4", mat(0, -1, 1, 0), 1},
      {"C4^3", mat(0, 1, -1, 0), 1},
      {"C2", mat(-1, 0, 0, -1), 2},
      {"sigma_x", mat(-1, 0, 0, 1), 3},
      {"sigma_y", mat(1, 0, 0, -1), 3},
      {"sigma_d", mat(0, 1, 1, 0), 4},
      {"sigma_d'", mat(0, -1, -1, 0), 4},
  }};
  return elements;
}

int multiply(int a, int b) {
  const auto& el = c4v_elements();
  const Eigen::Matrix2i prod = el[a].rotation * el[b].rotation;
  for (int g = 0; g < kGroupOrder; ++g)
    if (el[g].rotation == prod) return g;
  throw NumericalError("C4v multiplication left the group");
}

int inverse(int g) {
  for (int h = 0; h < kGroupOrder; ++h)
    if (multiply(g, h) == 0) return h;
  throw NumericalError("C4v element without inverse");
}

double character(Irrep r, int g) {
  return kCharacterTable[static_cast<int>(r)][c4v_elements()[g].cls];
}

Eigen::Matrix2d t5_matrix(int g) { return c4v_elements()[g].rotation.cast<double>(); }

GroupAction::GroupAction(const ReciprocalSet& basis, const Vec2& k) {
  if (!near_t_point(k, basis.pitch()))
    throw InvalidParameter("GroupAction: plane-wave permutation is only implemented at the T point");
  const auto& el = c4v_elements();
  for (int g = 0; g < kGroupOrder; ++g) {
    auto& p = perm_[g];
    p.resize(basis.size());
    for (std::size_t f = 0; f < basis.size(); ++f) {
      const auto [i, j] = basis.index(f);
      // q = k + G in units of pi/Lambda is (2i+1, 2j+1)
      const Eigen::Vector2i q(2 * i + 1, 2 * j + 1);
      const Eigen::Vector2i rq = el[g].rotation * q;
      const auto dest = basis.flat((rq.x() - 1) / 2, (rq.y() - 1) / 2);
      if (!dest) throw InvalidParameter("GroupAction: plane-wave window is not closed under C4v");
      p[f] = *dest;
    }
  }
}

Eigen::VectorXd GroupAction::apply(int g, const Eigen::VectorXd& c) const {
  const auto& p = perm_[g];
  Eigen::VectorXd out(c.size());
  for (std::size_t f = 0; f < p.size(); ++f) out(static_cast<Eigen::Index>(p[f])) = c(static_cast<Eigen::Index>(f));
  return out;
}

Eigen::VectorXcd GroupAction::apply(int g, const Eigen::VectorXcd& c) const {
  const auto& p = perm_[g];
  Eigen::VectorXcd out(c.size());
  for (std::size_t f = 0; f < p.size(); ++f) out(static_cast<Eigen::Index>(p[f])) = c(static_cast<Eigen::Index>(f));
  return out;
}

int IrrepContent::dimension() const {
  int d = 0;
  for (int r = 0; r < kIrrepCount; ++r) d += multiplicity[r] * rotphc::dimension(static_cast<Irrep>(r));
  return d;
}

std::string IrrepContent::describe() const {
  std::ostringstream os;
  bool first = true;
  for (int r = 0; r < kIrrepCount; ++r) {
    for (int m = 0; m < multiplicity[r]; ++m) {
      if (!first) os << '+';
      os << label(static_cast<Irrep>(r));
      first = false;
    }
  }
  return os.str();
}

IrrepContent classify_irrep(const Eigen::MatrixXd& subspace, const GroupAction& action) {
  if (static_cast<std::size_t>(subspace.rows()) != action.size())
    throw InvalidParameter("classify_irrep: subspace length does not match the group action");
  IrrepContent out;
  for (int g = 0; g < kGroupOrder; ++g) {
    const Eigen::MatrixXd gv = apply_to_columns(g, subspace, action);
    const Eigen::MatrixXd d = subspace.transpose() * gv;
    out.characters[g] = d.trace();
    out.invariance_defect = std::max(out.invariance_defect, (gv - subspace * d).cwiseAbs().maxCoeff());
  }
  if (out.invariance_defect > 1e-8) {
    std::ostringstream os;
    os << "classify_irrep: subspace not invariant under C4v (defect " << out.invariance_defect << ")";
    throw NumericalError(os.str());
  }
  for (int r = 0; r < kIrrepCount; ++r) {
    double m = 0.0;
    for (int g = 0; g < kGroupOrder; ++g) m += character(static_cast<Irrep>(r), g) * out.characters[g];
    m /= kGroupOrder;
    const double rounded = std::round(m);
    if (std::abs(m - rounded) > 1e-6) throw NumericalError("classify_irrep: non-integer irrep multiplicity");
    out.multiplicity[r] = static_cast<int>(rounded);
  }
  if (out.dimension() != subspace.cols()) throw NumericalError("classify_irrep: incomplete projection");
  return out;
}

std::vector<AdaptedState> symmetry_adapted_basis(const Eigen::MatrixXd& subspace, const IrrepContent& content,
                                                 const GroupAction& action) {
  std::vector<AdaptedState> out;
  for (int r = 0; r < kIrrepCount; ++r) {
    const int mult = content.multiplicity[r];
    if (mult == 0) continue;
    const auto irrep = static_cast<Irrep>(r);
    if (irrep != Irrep::T5) {
      Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(subspace.rows(), subspace.cols());
      for (int g = 0; g < kGroupOrder; ++g) proj += character(irrep, g) * apply_to_columns(g, subspace, action);
      proj /= kGroupOrder;
      for (auto& v : pick_orthonormal(proj, mult, label(irrep))) out.push_back({irrep, 0, std::move(v)});
      continue;
    }
    // Transfer operators P_ij = (2/8) sum_g D_ij(g) U_g for the T5 irrep.
    Eigen::MatrixXd p11 = Eigen::MatrixXd::Zero(subspace.rows(), subspace.cols());
    for (int g = 0; g < kGroupOrder; ++g) p11 += t5_matrix(g)(0, 0) * apply_to_columns(g, subspace, action);
    p11 *= 2.0 / kGroupOrder;
    for (auto& ex : pick_orthonormal(p11, mult, "T5")) {
      Eigen::VectorXd ey = Eigen::VectorXd::Zero(ex.size());
      for (int g = 0; g < kGroupOrder; ++g) ey += t5_matrix(g)(1, 0) * action.apply(g, ex);
      ey *= 2.0 / kGroupOrder;
      const double nrm = ey.norm();
      if (nrm < 1e-6) throw NumericalError("symmetry_adapted_basis: T5 partner vanished");
      ey /= nrm;
      out.push_back({Irrep::T5, 0, std::move(ex)});
      out.push_back({Irrep::T5, 1, std::move(ey)});
    }
  }
  return out;
}

std::vector<ClusterReport> classify_bands(const BandSolution& at_t, double omega_scale, double rel_tol) {
  const GroupAction action(at_t.basis, at_t.k);
  std::vector<ClusterReport> out;
  for (const auto& c : degenerate_clusters(at_t.frequencies, omega_scale, rel_tol)) {
    if (c.first + c.size >= at_t.band_count()) break;
    const Eigen::MatrixXd v = at_t.coefficients.middleCols(c.first, c.size);
    ClusterReport rep{c.first, c.size, at_t.frequencies.segment(c.first, c.size).mean(), classify_irrep(v, action)};
    out.push_back(rep);
  }
  return out;
}

TQuartet resolve_t_quartet(const BandSolution& at_t, double omega_scale) {
  if (at_t.band_count() < 5) throw InvalidParameter("resolve_t_quartet: need at least 5 bands at T");
  const GroupAction action(at_t.basis, at_t.k);
  TQuartet q;
  q.clusters = classify_bands(at_t, omega_scale);

  int covered = 0;
  std::array<int, kIrrepCount> total{};
  for (const auto& c : q.clusters) {
    if (covered >= 4) break;
    covered += c.size;
    for (int r = 0; r < kIrrepCount; ++r) total[r] += c.content.multiplicity[r];
  }
  if (covered != 4 || total[0] != 1 || total[3] != 1 || total[4] != 1)
    throw NumericalError("resolve_t_quartet: lowest four bands at T are not T1+T4+T5");

  const GroupAction& a = action;
  bool have_s = false, have_x = false, have_xy = false;
  for (const auto& c : q.clusters) {
    if (c.first_band >= 4) break;
    const Eigen::MatrixXd v = at_t.coefficients.middleCols(c.first_band, c.size);
    for (auto& st : symmetry_adapted_basis(v, c.content, a)) {
      const Eigen::VectorXd hv = st.coefficients;
      // Energy of an adapted state inside one cluster is the cluster mean.
      if (st.irrep == Irrep::T1) { q.s = hv; q.w_s = c.frequency; have_s = true; }
      if (st.irrep == Irrep::T4) { q.xy = hv; q.w_xy = c.frequency; have_xy = true; }
      if (st.irrep == Irrep::T5 && st.partner == 0) { q.ix = hv; q.w_x = c.frequency; have_x = true; }
      if (st.irrep == Irrep::T5 && st.partner == 1) q.iy = hv;
    }
  }
  if (!(have_s && have_x && have_xy)) throw NumericalError("resolve_t_quartet: missing adapted state");
  return q;
}

std::array<VectorState, 8> photonic_harmonics(const TQuartet& q) {
  using cd = std::complex<double>;
  const cd I(0.0, 1.0);
  const double r2 = 1.0 / std::sqrt(2.0);
  const Eigen::VectorXcd s = q.s.cast<cd>(), ix = q.ix.cast<cd>(), iy = q.iy.cast<cd>(), xy = q.xy.cast<cd>();
  const Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(s.size());

  auto lin = [](cd a, const VectorState& u, cd b, const VectorState& v) {
    return VectorState{a * u.x + b * v.x, a * u.y + b * v.y};
  };
  const VectorState t5x{s, zero}, t5y{zero, s};
  const VectorState t5px{xy, zero}, t5py{zero, xy};
  const VectorState t1{r2 * ix, r2 * iy}, t2{r2 * iy, -r2 * ix};
  const VectorState t3{r2 * ix, -r2 * iy}, t4{r2 * iy, r2 * ix};

  std::array<VectorState, 8> b;
  for (int blk = 0; blk < 2; ++blk) {
    const double sg = blk == 0 ? 1.0 : -1.0;  // upper / lower sign
    b[4 * blk + 0] = lin(r2, t5px, sg * I * r2, t5py);
    b[4 * blk + 1] = lin(-sg * I * r2, t1, (-sg * I * r2) * (-sg * I), t2);
    b[4 * blk + 2] = lin(sg * I * r2, t3, (sg * I * r2) * (sg * I), t4);
    b[4 * blk + 3] = lin(-sg * I * r2, t5x, (-sg * I * r2) * (sg * I), t5y);
  }
  return b;
}

std::complex<double> inner(const VectorState& a, const VectorState& b) {
  return a.x.dot(b.x) + a.y.dot(b.y);  // Eigen's dot conjugates the first argument
}

VectorState apply(int g, const VectorState& v, const GroupAction& action) {
  const Eigen::Matrix2d r = c4v_elements()[g].rotation.cast<double>();
  const Eigen::VectorXcd px = action.apply(g, v.x);
  const Eigen::VectorXcd py = action.apply(g, v.y);
  return {r(0, 0) * px + r(0, 1) * py, r(1, 0) * px + r(1, 1) * py};
}

VectorState conjugate(const VectorState& v, const ReciprocalSet& basis, const Vec2& k) {
  const double shift_x = k.x() * basis.pitch() / constants::pi;  // 2k in units of 2pi/Lambda
  const double shift_y = k.y() * basis.pitch() / constants::pi;
  const int sx = static_cast<int>(std::lround(shift_x));
  const int sy = static_cast<int>(std::lround(shift_y));
  if (std::abs(shift_x - sx) > 1e-9 || std::abs(shift_y - sy) > 1e-9)
    throw InvalidParameter("conjugate: -k is not equivalent to k");
  VectorState out{Eigen::VectorXcd(v.x.size()), Eigen::VectorXcd(v.y.size())};
  for (std::size_t f = 0; f < basis.size(); ++f) {
    const auto [i, j] = basis.index(f);
    const auto dest = basis.flat(-i - sx, -j - sy);
    if (!dest) throw InvalidParameter("conjugate: plane-wave window not inversion symmetric");
    const auto src = static_cast<Eigen::Index>(f);
    out.x(static_cast<Eigen::Index>(*dest)) = std::conj(v.x(src));
    out.y(static_cast<Eigen::Index>(*dest)) = std::conj(v.y(src));
  }
  return out;
}

}  // namespace rotphc
