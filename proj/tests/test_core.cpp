#include <doctest.h>

#include "rotphc/core.hpp"

using namespace rotphc;
using doctest::Approx;

TEST_CASE("derived constants at the default parameters") {
  const DerivedConstants d = derive_constants(PhysicalParameters{});
  // reference values evaluated independently in 30-digit arithmetic
  CHECK(d.cavity_length == Approx(2.71954674220963172e-7).epsilon(1e-14));
  CHECK(d.photon_mass == Approx(2.86888740576463855e-35).epsilon(1e-14));
  CHECK(d.hbar_over_m0 == Approx(3.67589127018711696).epsilon(1e-14));
  CHECK(d.omega_scale == Approx(2.26747454113529514e12).epsilon(1e-14));
  CHECK(d.potential_prefactor == Approx(1.56141905208333333e14).epsilon(1e-14));
  CHECK(d.momentum_element / constants::hbar == Approx(5.55360367269795781e5).epsilon(1e-14));
  CHECK(d.impedance == Approx(1.0 / 3.53));
  CHECK(d.offset_frequency == Approx(2.0 * constants::pi * constants::c / 960e-9).epsilon(1e-14));
}

TEST_CASE("photon mass relations") {
  const DerivedConstants d = derive_constants(PhysicalParameters{});
  CHECK(d.photon_mass == Approx(3.53 * constants::hbar * d.kz / constants::c).epsilon(1e-15));
  CHECK(d.hbar_over_m0 == Approx(constants::c / (3.53 * d.kz)).epsilon(1e-15));
}

TEST_CASE("hard invariants throw") {
  PhysicalParameters p;
  p.wavelength = 0.0;
  CHECK_THROWS_AS(validate(p), InvalidParameter);
  p = {};
  p.refractive_index = 0.5;
  CHECK_THROWS_AS(validate(p), InvalidParameter);
  p = {};
  p.pitch = -1.0;
  CHECK_THROWS_AS(derive_constants(p), InvalidParameter);
  p = {};
  p.fill_factor = 1.0;
  CHECK_THROWS_AS(validate(p), InvalidParameter);
  p = {};
  p.fill_factor = 0.0;
  CHECK_THROWS_AS(validate(p), InvalidParameter);
}

TEST_CASE("soft warnings") {
  PhysicalParameters p;
  CHECK(validate(p).empty());
  p.phase_contrast = 0.2;
  CHECK(validate(p).size() == 1);
  p = {};
  p.pitch = 1e-6;
  CHECK(validate(p).size() == 1);
  p.phase_contrast = 0.0;
  CHECK_NOTHROW(validate(p));
}
