#include "rotphc/core.hpp"

#include <cmath>
#include <sstream>

namespace rotphc {

std::vector<std::string> validate(const PhysicalParameters& p) {
  auto fail = [](const std::string& what) { throw InvalidParameter("invalid parameter: " + what); };

  if (!(p.wavelength > 0.0) || !std::isfinite(p.wavelength)) fail("wavelength must be > 0");
  if (!(p.refractive_index >= 1.0) || !std::isfinite(p.refractive_index)) fail("refractive_index must be >= 1");
  if (!(p.pitch > 0.0) || !std::isfinite(p.pitch)) fail("pitch must be > 0");
  if (!(p.fill_factor > 0.0 && p.fill_factor < 1.0)) fail("fill_factor must lie in (0, 1)");
  if (!std::isfinite(p.phase_contrast)) fail("phase_contrast must be finite");
  if (!std::isfinite(p.rotation_rate)) fail("rotation_rate must be finite");

  std::vector<std::string> warnings;
  if (std::abs(p.phase_contrast) > 0.1) {
    std::ostringstream os;
    os << "phase_contrast " << p.phase_contrast << " exceeds 0.1; low-contrast model is questionable";
    warnings.push_back(os.str());
  }
  const double paraxial_limit = 5.0 * p.wavelength / p.refractive_index;
  if (p.pitch < paraxial_limit) {
    std::ostringstream os;
    os << "pitch " << p.pitch << " m is below 5 lambda/n = " << paraxial_limit << " m; paraxial approximation is weak";
    warnings.push_back(os.str());
  }
  return warnings;
}

DerivedConstants derive_constants(const PhysicalParameters& p) {
  validate(p);
  using namespace constants;

  DerivedConstants d{};
  const double n = p.refractive_index;
  d.refractive_index = n;
  d.pitch = p.pitch;
  d.cavity_length = p.wavelength / n;
  d.kz = 2.0 * pi * n / p.wavelength;
  d.photon_mass = n * hbar * d.kz / c;
  d.offset_frequency = c * d.kz / n;
  d.momentum_element = hbar * pi / (std::sqrt(2.0) * p.pitch);
  d.impedance = 1.0 / n;

  // hbar/m0 = c / (n kz), written without hbar to keep full precision.
  d.hbar_over_m0 = c / (n * d.kz);
  d.potential_prefactor = c / (2.0 * n * d.cavity_length);
  const double q = pi / p.pitch;
  d.omega_scale = d.hbar_over_m0 * q * q;
  return d;
}

}  // namespace rotphc
