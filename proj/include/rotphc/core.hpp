// Physical parameters, unit conventions and derived constants.
//
// All quantities are SI in double precision. Band energies are carried as
// reduced angular frequencies dw = w - w_z (rad/s), i.e. the Hamiltonian
// divided by hbar with the constant paraxial offset m0 c^2 / (n^2 hbar)
// removed. The cavity medium is taken as mu = 1, eps = n^2.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rotphc {

namespace constants {
inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double c = 2.99792458e8;        // m/s
inline constexpr double hbar = 1.054571817e-34;  // J s
}  // namespace constants

/// Raised when an input violates a documented invariant.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure fails or leaves its validity domain.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PhysicalParameters {
  double wavelength = 960e-9;   // m
  double refractive_index = 3.53;
  double pitch = 4e-6;          // m
  double fill_factor = 0.65;    // pixel area / cell area
  double phase_contrast = 0.02; // rad
  double rotation_rate = 0.0;   // rad/s about z
};

/// Throws InvalidParameter naming the first violated hard invariant and
/// returns soft warnings (large contrast, pitch near the paraxial limit).
std::vector<std::string> validate(const PhysicalParameters& p);

struct DerivedConstants {
  double cavity_length;          // l_z = lambda / n
  double kz;                     // 2 pi n / lambda
  double photon_mass;            // m0 = n hbar kz / c
  double offset_frequency;       // w_z = c kz / n = 2 pi c / lambda
  double momentum_element;       // P = hbar pi / (sqrt(2) Lambda)
  double impedance;              // Z = 1 / n
  double refractive_index;
  double pitch;

  double hbar_over_m0;           // m^2/s; kinetic term is (hbar/2m0)|k|^2
  double potential_prefactor;    // c / (2 n l_z), rad/s per rad of phase
  double omega_scale;            // (hbar/m0)(pi/Lambda)^2
};

DerivedConstants derive_constants(const PhysicalParameters& p);

}  // namespace rotphc
