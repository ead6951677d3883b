#include "rotphc/observables.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace rotphc {

using constants::c;
using constants::hbar;
using constants::pi;

double spin_splitting(double omega, double n) { return 2.0 * omega / (n * n); }

double orbital_splitting(double omega, double mass_t5prime, double mass_t5, double m0, double n) {
  if (mass_t5prime == 0.0 || mass_t5 == 0.0) throw InvalidParameter("orbital_splitting: zero effective mass");
  return omega / (n * n) * (m0 / mass_t5prime - m0 / mass_t5);
}

OrbitalParameters orbital_from_masses(double mass_t5, double mass_t5prime, double m0) {
  if (mass_t5prime == 0.0 || mass_t5 == 0.0) throw InvalidParameter("orbital_from_masses: zero effective mass");
  return {-0.5 * (m0 / mass_t5 - 1.0), 0.5 * (m0 / mass_t5prime - 1.0)};
}

std::array<double, 2> masses_from_orbital(const OrbitalParameters& m, double m0) {
  return {m0 / (1.0 - 2.0 * m.m_plus), m0 / (1.0 + 2.0 * m.m_minus)};
}

AnalyticM analytic_M(const PhysicalParameters& p) {
  validate(p);
  if (p.phase_contrast == 0.0)
    throw InvalidParameter("analytic_M: phase_contrast = 0 (orbital parameters diverge in the empty lattice)");
  const DerivedConstants dc = derive_constants(p);
  const double ff = p.fill_factor;
  const double dphi = p.phase_contrast;
  const double n = p.refractive_index;

  AnalyticM out{};
  out.s = sinc(pi * std::sqrt(ff));
  const double P = dc.momentum_element;
  out.prefactor_direct = 2.0 * n * dc.cavity_length * P * P / (hbar * dc.photon_mass * c * ff * dphi);
  out.prefactor_reduced =
      pi * p.wavelength * p.wavelength / (2.0 * n * n * p.pitch * p.pitch * ff * dphi);
  if (std::abs(out.prefactor_direct - out.prefactor_reduced) > 1e-12 * std::abs(out.prefactor_reduced)) {
    std::ostringstream os;
    os << std::setprecision(17) << "analytic_M: prefactor forms disagree (" << out.prefactor_direct << " vs "
       << out.prefactor_reduced << ")";
    throw NumericalError(os.str());
  }
  out.m.m_plus = out.prefactor_reduced / (out.s * (1.0 + out.s));
  out.m.m_minus = out.prefactor_reduced / (out.s * (1.0 - out.s));
  return out;
}

double mean_square_radius(double m_plus, double m_minus, double momentum_element) {
  const double l = hbar / momentum_element;  // length scale sqrt(2) Lambda / pi
  return 0.5 * l * l * (m_minus * m_minus + m_plus * m_plus);
}

double splitting_from_modal_size(double r2, double fill_factor, double pitch, double n) {
  const double s = sinc(pi * std::sqrt(fill_factor));
  return 2.0 * pi * std::sqrt(2.0 * r2) / (n * n * pitch) / (1.0 + s * s);
}

SplittingReport make_splitting_report(double omega, const OrbitalParameters& m, double momentum_element,
                                      const PhysicalParameters& p) {
  const double n = p.refractive_index;
  SplittingReport r{};
  r.omega = omega;
  r.m_plus = m.m_plus;
  r.m_minus = m.m_minus;
  r.m_total = m.sum();
  r.dw_spin = spin_splitting(omega, n);
  r.dw_orbital = 2.0 * r.m_total * omega / (n * n);
  r.r2 = mean_square_radius(m.m_plus, m.m_minus, momentum_element);
  r.modal_size_ratio = splitting_from_modal_size(r.r2, p.fill_factor, p.pitch, n);
  r.consistency_ratio = r.modal_size_ratio / (2.0 * r.m_total / (n * n));
  return r;
}

std::string to_text(const SplittingReport& r) {
  std::ostringstream os;
  os << std::setprecision(10);
  os << "Omega                 " << r.omega << " rad/s\n"
     << "spin splitting        " << r.dw_spin << " rad/s\n"
     << "orbital splitting     " << r.dw_orbital << " rad/s\n"
     << "M+ / M- / M           " << r.m_plus << " / " << r.m_minus << " / " << r.m_total << "\n"
     << "sqrt<r^2>             " << std::sqrt(r.r2) << " m\n"
     << "modal-size dw_L/Omega " << r.modal_size_ratio << "\n"
     << "ratio to 2M/n^2       " << r.consistency_ratio << "\n";
  return os.str();
}

double alpha_overlap(const Eigen::VectorXd& coefficients, const ReciprocalSet& basis, const PhasePattern& pat) {
  if (static_cast<std::size_t>(coefficients.size()) != basis.size())
    throw InvalidParameter("alpha_overlap: coefficient length does not match basis");
  const int nx = basis.i_max() - basis.i_min() + 1;
  const int ny = basis.j_max() - basis.j_min() + 1;
  Eigen::MatrixXd table(nx, ny);
  for (int a = 0; a < nx; ++a)
    for (int b = 0; b < ny; ++b) table(a, b) = fourier_coefficient(a, b, pat);

  double alpha = 0.0;
  const auto n = static_cast<Eigen::Index>(basis.size());
  for (Eigen::Index u = 0; u < n; ++u) {
    if (coefficients(u) == 0.0) continue;
    const auto [iu, ju] = basis.index(static_cast<std::size_t>(u));
    double row = 0.0;
    for (Eigen::Index v = 0; v < n; ++v) {
      const auto [iv, jv] = basis.index(static_cast<std::size_t>(v));
      row += table(std::abs(iu - iv), std::abs(ju - jv)) * coefficients(v);
    }
    alpha += coefficients(u) * row;
  }
  return alpha;
}

// ---------------------------------------------------------------------------

double eta_phase(double z, double alpha, double cavity_length) {
  const double period = 2.0 * cavity_length;
  const double zr = z - period * std::round(z / period);
  const double step = zr > 0.0 ? 0.5 : (zr < 0.0 ? -0.5 : 0.0);
  return alpha * step - zr * alpha / (2.0 * cavity_length);
}

EtaProfile eta_profile(double alpha, double cavity_length, int count, std::vector<std::string>* warnings) {
  if (count < 4 || count % 2 != 0) throw InvalidParameter("eta_profile: sample count must be even and >= 4");
  if (!(cavity_length > 0.0)) throw InvalidParameter("eta_profile: cavity length must be > 0");
  if (warnings && std::abs(alpha) > 0.1) warnings->push_back("eta_profile: |alpha| > 0.1, small-modulation form is questionable");

  EtaProfile prof{alpha, cavity_length, {}, {}};
  prof.z.reserve(static_cast<std::size_t>(count));
  prof.one_plus_eta.reserve(static_cast<std::size_t>(count));
  const double dz = 2.0 * cavity_length / count;
  for (int i = 0; i < count; ++i) {
    // symmetric midpoints; z_{count-1-i} = -z_i exactly
    const double z = i < count / 2 ? -cavity_length + (i + 0.5) * dz : cavity_length - (count - 1 - i + 0.5) * dz;
    prof.z.push_back(z);
    prof.one_plus_eta.push_back(std::polar(1.0, eta_phase(z, alpha, cavity_length)));
  }
  return prof;
}

EtaChecks check_eta(const EtaProfile& prof) {
  const std::size_t n = prof.z.size();
  const std::size_t half = n / 2;
  EtaChecks out{};
  double sum_abs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.max_modulus_defect = std::max(out.max_modulus_defect, std::abs(std::abs(prof.one_plus_eta[i]) - 1.0));
    out.phase_oddness =
        std::max(out.phase_oddness, std::abs(std::arg(prof.one_plus_eta[i]) + std::arg(prof.one_plus_eta[n - 1 - i])));
    sum_abs += std::abs(prof.one_plus_eta[i] - 1.0);
  }
  out.mean_modulus = sum_abs / static_cast<double>(n);

  auto phase = [&](std::size_t i) { return std::arg(prof.one_plus_eta[i]); };
  const std::size_t l0 = 0, l1 = half - 1, r0 = half, r1 = n - 1;
  out.slope_left = (phase(l1) - phase(l0)) / (prof.z[l1] - prof.z[l0]);
  out.slope_right = (phase(r1) - phase(r0)) / (prof.z[r1] - prof.z[r0]);
  const double left_at_0 = phase(l1) - out.slope_left * prof.z[l1];
  const double right_at_0 = phase(r0) - out.slope_right * prof.z[r0];
  out.jump = right_at_0 - left_at_0;

  // integral of d eta/dz over one period = eta(l_z) - eta(-l_z)
  const double l = prof.cavity_length;
  const auto eta_at = [&](double z) { return std::polar(1.0, eta_phase(z, prof.alpha, l)) - 1.0; };
  out.mean_derivative = std::abs(eta_at(l) - eta_at(-l)) / (2.0 * l);
  return out;
}

double eta_mean_modulus(double alpha) {
  const double a = std::abs(alpha);
  if (a == 0.0) return 0.0;
  if (a < 1e-3) {
    // series of (8/a)(1 - cos(a/4)) to avoid cancellation
    const double x = a / 4.0;
    return (8.0 / a) * (x * x / 2.0 - x * x * x * x / 24.0);
  }
  return (8.0 / a) * (1.0 - std::cos(a / 4.0));
}

// ---------------------------------------------------------------------------

double effective_refractive_index(const Eigen::Vector3d& tau, int handedness, const Eigen::Vector3d& omega,
                                  const Eigen::Vector3d& r, double w, double n) {
  if (std::abs(tau.norm() - 1.0) > 1e-12) throw InvalidParameter("effective_refractive_index: |tau| must be 1");
  if (handedness != 1 && handedness != -1)
    throw InvalidParameter("effective_refractive_index: handedness must be +1 or -1");
  if (!(w > 0.0)) throw InvalidParameter("effective_refractive_index: frequency must be > 0");
  const Eigen::Vector3d g = omega.cross(r) / c;
  return n + g.dot(tau) + handedness * omega.dot(tau) / (w * n);
}

namespace {

using cd = std::complex<double>;

struct LocalDerivs {
  cd f;
  std::array<cd, 2> d1;
  std::array<std::array<cd, 2>, 2> d2;
};

LocalDerivs evaluate(const Eigen::VectorXcd& coeff, const std::vector<Vec2>& q, const Vec2& r) {
  LocalDerivs out{};
  const cd I(0.0, 1.0);
  for (std::size_t m = 0; m < q.size(); ++m) {
    const cd cm = coeff(static_cast<Eigen::Index>(m));
    if (cm == 0.0) continue;
    const cd w = cm * std::polar(1.0, q[m].dot(r));
    out.f += w;
    for (int a = 0; a < 2; ++a) {
      out.d1[a] += I * q[m](a) * w;
      for (int b = 0; b < 2; ++b) out.d2[a][b] -= q[m](a) * q[m](b) * w;
    }
  }
  return out;
}

// Gauge operator applied to a two-component envelope (u_x, u_y).
std::array<cd, 3> gauge(const LocalDerivs& ux, const LocalDerivs& uy, const Vec2& r, double z, double kz,
                        double rot) {
  const cd I(0.0, 1.0);
  const std::array<const LocalDerivs*, 2> u{&ux, &uy};
  const cd div = ux.d1[0] + uy.d1[1];
  const cd curl = ux.d1[1] * -1.0 + uy.d1[0];  // d_x u_y - d_y u_x
  const double inv4 = 1.0 / (4.0 * kz * kz), inv2 = 1.0 / (2.0 * kz * kz);
  std::array<cd, 3> e{};
  const std::array<double, 3> pos{r.x(), r.y(), z};
  for (int a = 0; a < 2; ++a) {
    const cd lap = u[a]->d2[0][0] + u[a]->d2[1][1];
    const cd grad_div = ux.d2[a][0] + uy.d2[a][1];
    e[a] = u[a]->f - lap * inv4 + grad_div * inv2 - I * rot * (pos[a] / kz) * curl;
  }
  e[2] = I * div / kz + rot * ((r.x() * uy.f - r.y() * ux.f) - I * (z / kz) * curl);
  return e;
}

}  // namespace

FieldSet reconstruct_fields(const EnvelopeState& psi, double z, double omega_rot, const DerivedConstants& dc,
                            const std::vector<Vec2>& grid, double alpha) {
  const std::size_t nb = psi.basis.size();
  if (static_cast<std::size_t>(psi.psi_x.size()) != nb || static_cast<std::size_t>(psi.psi_y.size()) != nb)
    throw InvalidParameter("reconstruct_fields: coefficient length does not match basis");

  std::vector<Vec2> q(nb);
  const double cmax = std::max(psi.psi_x.cwiseAbs().maxCoeff(), psi.psi_y.cwiseAbs().maxCoeff());
  for (std::size_t m = 0; m < nb; ++m) {
    q[m] = psi.k + psi.basis.vector(m);
    const auto idx = static_cast<Eigen::Index>(m);
    const double w = std::max(std::abs(psi.psi_x(idx)), std::abs(psi.psi_y(idx)));
    if (w > 1e-12 * cmax && q[m].norm() > 0.3 * dc.kz)
      throw NumericalError("reconstruct_fields: state violates the paraxial condition |k+G| << kz");
  }

  const double rot = omega_rot / (dc.refractive_index * c);
  const cd carrier = std::polar(1.0, dc.kz * z) * std::polar(1.0, eta_phase(z, alpha, dc.cavity_length)) /
                     std::sqrt(2.0 * pi);
  const double ze = std::sqrt(dc.impedance);

  // H uses the gauge operator on z x psi = (-psi_y, psi_x).
  const Eigen::VectorXcd chi_x = -psi.psi_y;
  const Eigen::VectorXcd& chi_y = psi.psi_x;

  FieldSet out;
  for (auto& v : out.e) v.resize(static_cast<Eigen::Index>(grid.size()));
  for (auto& v : out.h) v.resize(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto ux = evaluate(psi.psi_x, q, grid[g]);
    const auto uy = evaluate(psi.psi_y, q, grid[g]);
    const auto vx = evaluate(chi_x, q, grid[g]);
    const auto vy = evaluate(chi_y, q, grid[g]);
    const auto e = gauge(ux, uy, grid[g], z, dc.kz, rot);
    const auto h = gauge(vx, vy, grid[g], z, dc.kz, rot);
    for (int a = 0; a < 3; ++a) {
      out.e[a](static_cast<Eigen::Index>(g)) = ze * carrier * e[a];
      out.h[a](static_cast<Eigen::Index>(g)) = carrier * h[a] / ze;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Stencil {
  double h;
  Eigen::MatrixXd f;  // rows: offsets -h, -h/2, 0, h/2, h ; cols: bands
};

Stencil sample_stencil(const PweSolver& solver, const Vec2& k0, const Vec2& dir, int n_bands, double h) {
  const ReciprocalSet basis = reciprocal_window(k0, solver.pattern().pitch, solver.cutoff());
  const std::array<double, 5> offs{-h, -0.5 * h, 0.0, 0.5 * h, h};
  Stencil s{h, Eigen::MatrixXd(5, n_bands)};
  for (int i = 0; i < 5; ++i) {
    const Vec2 k = k0 + offs[i] * dir;
    const auto ham = assemble_hamiltonian_serial(k, solver.pattern(), basis, solver.constants());
    s.f.row(i) = eigenvalues_at_k(ham, n_bands).transpose();
  }
  return s;
}

MassEstimate curvature_from(const Stencil& s, int band, double noise) {
  const auto f = s.f.col(band);
  const double h = s.h;
  const double d_h = (f(4) - 2.0 * f(2) + f(0)) / (h * h);
  const double d_h2 = (f(3) - 2.0 * f(2) + f(1)) / (0.25 * h * h);
  const double rich = (4.0 * d_h2 - d_h) / 3.0;
  const double floor = 16.0 * noise / (h * h);
  if (std::abs(rich) <= floor) throw NumericalError("effective_mass: curvature below numerical noise floor");
  return {hbar / rich, rich, std::abs(rich - d_h2), h};
}

double noise_level(const PweSolver& solver, const Vec2& k0) {
  const ReciprocalSet basis = reciprocal_window(k0, solver.pattern().pitch, solver.cutoff());
  double kmax = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) kmax = std::max(kmax, (k0 + basis.vector(i)).norm());
  const double hnorm = 0.5 * solver.constants().hbar_over_m0 * kmax * kmax +
                       solver.constants().potential_prefactor * std::abs(solver.pattern().contrast);
  return 64.0 * std::numeric_limits<double>::epsilon() * hnorm;
}

}  // namespace

MassEstimate effective_mass(const PweSolver& solver, const Vec2& k0, const Vec2& direction, int band, double step) {
  if (!(step > 0.0)) throw InvalidParameter("effective_mass: step must be > 0");
  if (band < 0) throw InvalidParameter("effective_mass: negative band index");
  const Vec2 dir = direction.normalized();
  const Stencil s = sample_stencil(solver, k0, dir, band + 1, step);
  return curvature_from(s, band, noise_level(solver, k0));
}

PweMassRoute pwe_mass_route(const PweSolver& solver, double step) {
  const DerivedConstants& dc = solver.constants();
  const Vec2 t = bz::t_point(dc.pitch);
  const BandSolution at_t = solver.solve(t, 6);

  PweMassRoute out{};
  out.quartet = resolve_t_quartet(at_t, dc.omega_scale);
  int band_s = -1, band_xy = -1;
  for (const auto& cl : out.quartet.clusters) {
    if (cl.first_band >= 4) break;
    if (cl.size == 1 && cl.content.multiplicity[0] == 1) band_s = cl.first_band;
    if (cl.size == 1 && cl.content.multiplicity[3] == 1) band_xy = cl.first_band;
  }
  if (band_s < 0 || band_xy < 0) throw NumericalError("pwe_mass_route: S or XY band not isolated at T");

  const double gap = std::min(std::abs(out.quartet.w_x - out.quartet.w_s), std::abs(out.quartet.w_xy - out.quartet.w_x));
  const double coupling = dc.hbar_over_m0 * pi / dc.pitch;  // rad/s per 1/m
  out.step = step > 0.0 ? step : std::min(1e-3 * pi / dc.pitch, 0.02 * gap / coupling);

  const Stencil s = sample_stencil(solver, t, Vec2(1.0, 0.0), 4, out.step);
  const double noise = noise_level(solver, t);
  out.t5 = curvature_from(s, band_s, noise);
  out.t5prime = curvature_from(s, band_xy, noise);
  out.m = orbital_from_masses(out.t5.mass, out.t5prime.mass, dc.photon_mass);
  return out;
}

double fsum_mass_ratio(const BandSolution& s, int band, const Vec2& direction, const DerivedConstants& dc) {
  if (band < 0 || band >= s.band_count()) throw InvalidParameter("fsum_mass_ratio: band out of range");
  const Vec2 d = direction.normalized();
  double sum = 0.0;
  for (int n = 0; n < s.band_count(); ++n) {
    if (n == band) continue;
    const double dw = s.frequencies(band) - s.frequencies(n);
    if (std::abs(dw) < 1e-9 * dc.omega_scale) continue;
    const double p = momentum_matrix_element(s, band, n).dot(d);
    sum += p * p / (hbar * dw);
  }
  return 1.0 + 2.0 * sum / dc.photon_mass;
}

}  // namespace rotphc
