// Coriolis-Zeeman splittings, orbital parameters, modal size, the
// longitudinal modulation eta(z) and field reconstruction. Rotation enters
// strictly to first order in Omega.

#pragma once

#include <Eigen/Core>

#include <complex>
#include <string>
#include <vector>

#include "rotphc/core.hpp"
#include "rotphc/pattern.hpp"
#include "rotphc/pwe.hpp"
#include "rotphc/symmetry.hpp"

namespace rotphc {

/// dw_S = 2 Omega / n^2
double spin_splitting(double omega, double n);

/// dw_L = (Omega / n^2) (m0/m_T5' - m0/m_T5). Throws InvalidParameter for a
/// zero mass.
double orbital_splitting(double omega, double mass_t5prime, double mass_t5, double m0, double n);

struct OrbitalParameters {
  double m_plus;
  double m_minus;
  double sum() const { return m_plus + m_minus; }
};

/// M+- = -+ (1/2)(m0/m - 1), with m_T5 for M+ and m_T5' for M-.
OrbitalParameters orbital_from_masses(double mass_t5, double mass_t5prime, double m0);
/// Inverse of orbital_from_masses; returns {m_T5, m_T5'}.
std::array<double, 2> masses_from_orbital(const OrbitalParameters& m, double m0);

struct AnalyticM {
  OrbitalParameters m;
  double s;                    // sin(pi sqrt FF) / (pi sqrt FF)
  double prefactor_direct;     // 2 n l_z P^2 / (hbar m0 c FF dphi)
  double prefactor_reduced;    // pi lambda^2 / (2 n^2 Lambda^2 FF dphi)
};

/// Square-pixel orbital parameters M+- = prefactor [s (1 +- s)]^-1. The
/// prefactor is evaluated from the physical constants and from its reduced
/// closed form; the two must agree to 1e-12 or NumericalError is thrown.
/// Throws InvalidParameter for dphi = 0 (weak-binding divergence).
AnalyticM analytic_M(const PhysicalParameters& p);

/// <r^2> = hbar^2 (M-^2 + M+^2) / (2 P^2), m^2.
double mean_square_radius(double m_plus, double m_minus, double momentum_element);

/// dw_L / Omega = 2 pi sqrt(2 <r^2>) / (n^2 Lambda) [1 + sinc^2(pi sqrt FF)]^-1
double splitting_from_modal_size(double r2, double fill_factor, double pitch, double n);

struct SplittingReport {
  double omega;
  double dw_spin;
  double dw_orbital;
  double m_plus, m_minus, m_total;
  double r2;
  double modal_size_ratio;   // dw_L/Omega estimated from <r^2>
  double consistency_ratio;  // modal_size_ratio / (2M/n^2)
};

SplittingReport make_splitting_report(double omega, const OrbitalParameters& m, double momentum_element,
                                      const PhysicalParameters& p);
std::string to_text(const SplittingReport& r);

/// alpha = <psi| phi |psi> for a normalised plane-wave state.
double alpha_overlap(const Eigen::VectorXd& coefficients, const ReciprocalSet& basis, const PhasePattern& pat);

// ---------------------------------------------------------------------------
// Longitudinal modulation 1 + eta(z) over one period [-l_z, l_z], mirror at 0.

struct EtaProfile {
  double alpha;
  double cavity_length;
  std::vector<double> z;
  std::vector<std::complex<double>> one_plus_eta;
};

/// Phase of 1 + eta: alpha (theta(z) - 1/2) - z alpha / (2 l_z), with the
/// mirror images at z = 2 j l_z summed pairwise. Returns 0 at the mirror
/// plane itself (midpoint of the jump).
double eta_phase(double z, double alpha, double cavity_length);

/// `count` (even, >= 4) cell-centred samples, so no sample sits on the mirror.
/// Adds a warning to `warnings` (if given) when |alpha| > 0.1.
EtaProfile eta_profile(double alpha, double cavity_length, int count, std::vector<std::string>* warnings = nullptr);

struct EtaChecks {
  double max_modulus_defect;   // max | |1+eta| - 1 |
  double phase_oddness;        // max |arg(1+eta(-z)) + arg(1+eta(z))|
  double slope_left;           // interior slope below the mirror
  double slope_right;          // interior slope above the mirror
  double jump;                 // extrapolated phase jump at z = 0
  double mean_derivative;      // period mean of d eta/dz including the jump
  double mean_modulus;         // <|eta|> over the period from the samples
};
EtaChecks check_eta(const EtaProfile& prof);

/// Exact period mean of |eta| for the sawtooth phase,
/// (8/|alpha|)(1 - cos(alpha/4)).
double eta_mean_modulus(double alpha);

// ---------------------------------------------------------------------------

/// n_eff = n + g.tau + handedness * Omega.tau / (w n), g = (Omega x r)/c.
/// handedness = +1 for left, -1 for right circular polarisation.
double effective_refractive_index(const Eigen::Vector3d& tau, int handedness, const Eigen::Vector3d& omega,
                                  const Eigen::Vector3d& r, double w, double n);

struct FieldSet {
  std::array<Eigen::VectorXcd, 3> e;
  std::array<Eigen::VectorXcd, 3> h;
};

struct EnvelopeState {
  Vec2 k;
  ReciprocalSet basis;
  Eigen::VectorXcd psi_x, psi_y;  // plane-wave coefficients on k + G
};

/// Six field components on `grid` at height z from the envelope state via the
/// gauge operator (derivatives spectral, rotation terms in real space).
/// `alpha` sets the longitudinal modulation 1 + eta(z). Throws
/// NumericalError if the state has weight on |k+G| > 0.3 kz.
FieldSet reconstruct_fields(const EnvelopeState& psi, double z, double omega_rot, const DerivedConstants& dc,
                            const std::vector<Vec2>& grid, double alpha = 0.0);

// ---------------------------------------------------------------------------
// Effective masses from the plane-wave bands.

struct MassEstimate {
  double mass;              // kg (negative for downward curvature)
  double curvature;         // d^2 w / dk^2, m^2/s
  double residual;          // |Richardson - finest difference| in curvature units
  double step;              // 1/m
};

/// Central second difference of band `band` (sorted index) around k0 along
/// `direction`, refined by one Richardson step. Uses the five samples
/// k0, k0 +- h/2, k0 +- h. Throws NumericalError when the curvature is below
/// the eigenvalue noise floor.
MassEstimate effective_mass(const PweSolver& solver, const Vec2& k0, const Vec2& direction, int band, double step);

struct PweMassRoute {
  MassEstimate t5;        // scalar S band (vector T5)
  MassEstimate t5prime;   // scalar XY band (vector T5')
  OrbitalParameters m;
  TQuartet quartet;
  double step;
};

/// Masses of the S and XY bands at T along x and the orbital parameters they
/// imply. The default step is min(1e-3 pi/Lambda, 0.02 * smallest edge gap /
/// ((hbar/m0) pi/Lambda)) so the stencil stays inside the parabolic region.
PweMassRoute pwe_mass_route(const PweSolver& solver, double step = 0.0);

/// f-sum rule 1/m = 1/m0 + (2/m0^2) sum_n |p_mn.d|^2 / (E_m - E_n) over the
/// bands of a solution, returned as m0/m. Terms with |w_m - w_n| below
/// 1e-9 omega_scale are skipped.
double fsum_mass_ratio(const BandSolution& s, int band, const Vec2& direction, const DerivedConstants& dc);

}  // namespace rotphc
