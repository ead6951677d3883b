#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

#include "rotphc/kp.hpp"

using namespace rotphc;
using doctest::Approx;

namespace {

struct Fixture {
  PhysicalParameters p;
  PweSolver solver{p, 10};
  KpParameters k = extract_kp_parameters(solver, p);
  double zone = constants::pi / p.pitch;
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

// Spread-normalised deviation of the k.p upper-block bands from the four
// lowest plane-wave bands at T + dk.
double kp_vs_pwe(const Fixture& f, const Vec2& dk) {
  const auto w8 = kp_bands(dk, 0.0, f.k);
  const Eigen::VectorXd pw = f.solver.frequencies(bz::t_point(f.p.pitch) + dk, 4);
  double err = 0.0;
  for (int b = 0; b < 4; ++b) {
    err = std::max(err, std::abs(w8(2 * b) - pw(b)));
    err = std::max(err, std::abs(w8(2 * b + 1) - pw(b)));
  }
  return err / (f.k.w_t5p - f.k.w_t5);
}

}  // namespace

TEST_CASE("parameters at the default design") {
  const auto& f = fixture();
  const double s = f.solver.constants().omega_scale;
  CHECK(f.k.w_t5 < f.k.w_t1);
  CHECK(f.k.w_t1 < f.k.w_t5p);
  CHECK(f.k.w_t5 / s == Approx(-0.347255).epsilon(1e-5));
  CHECK(f.k.w_t1 / s == Approx(0.088592).epsilon(1e-5));
  CHECK(f.k.w_t5p / s == Approx(0.404271).epsilon(1e-5));
  // weak binding: P close to the free-photon value hbar pi / (sqrt2 Lambda)
  CHECK(f.k.P / f.solver.constants().momentum_element == Approx(1.0).epsilon(0.01));
  CHECK(f.k.M() == Approx(analytic_M(f.p).m.sum()).epsilon(1e-14));
  CHECK(f.k.edge(0) == f.k.w_t5p);
  CHECK(f.k.edge(5) == f.k.w_t1);
  CHECK(f.k.edge(7) == f.k.w_t5);
}

TEST_CASE("P at low contrast") {
  PhysicalParameters p;
  p.phase_contrast = 1e-4;
  const PweSolver solver(p, 8);
  const auto k = extract_kp_parameters(solver, p);
  CHECK(k.P / solver.constants().momentum_element == Approx(1.0).epsilon(0.01));
}

TEST_CASE("empty lattice is refused") {
  PhysicalParameters p;
  p.phase_contrast = 0.0;
  const PweSolver solver(p, 4);
  CHECK_THROWS_AS(extract_kp_parameters(solver, p), NumericalError);
}

TEST_CASE("matrix at dk = 0") {
  const auto& f = fixture();
  const double om = 1e4;
  const double u = om / (f.k.n * f.k.n);
  const double M = f.k.M();
  const KpMatrix m = build_kp_matrix(Vec2::Zero(), om, f.k);
  CHECK(m.hkp.cwiseAbs().maxCoeff() == 0.0);
  CHECK(m.kinetic == 0.0);
  const std::array<double, 8> expect{-u, (M - 1) * u, -(M + 1) * u, -u, u, -(M - 1) * u, (M + 1) * u, u};
  for (int i = 0; i < 8; ++i) {
    CHECK(m.homega(i, i).real() == Approx(expect[i]).epsilon(1e-15));
    CHECK(m.homega(i, i).imag() == 0.0);
    CHECK(m.h0(i) == f.k.edge(i) - f.k.w_t1);
  }
  const Matrix8cd off = m.homega - Matrix8cd(m.homega.diagonal().asDiagonal());
  CHECK(off.cwiseAbs().maxCoeff() == 0.0);

  const auto w8 = kp_bands(Vec2::Zero(), 0.0, f.k);
  const std::array<double, 8> edges{f.k.w_t5, f.k.w_t5, f.k.w_t1, f.k.w_t1, f.k.w_t1, f.k.w_t1, f.k.w_t5p, f.k.w_t5p};
  for (int i = 0; i < 8; ++i) CHECK(std::abs(w8(i) - edges[i]) <= 1e-15 * f.k.omega_scale);
}

TEST_CASE("first-order coupling pattern") {
  const auto& f = fixture();
  const double kx = 0.03 * f.zone;
  const KpMatrix m = build_kp_matrix(Vec2(kx, 0.0), 0.0, f.k);
  const double v = f.k.P / f.k.m0 * kx;
  // with k+ = k- = kx the upper block is real with this sign pattern
  const Eigen::Matrix4d pattern{{0, 1, 1, 0}, {1, 0, 0, 1}, {1, 0, 0, -1}, {0, 1, -1, 0}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      CHECK(m.hkp(i, j).real() == Approx(pattern(i, j) * v).epsilon(1e-15));
      CHECK(m.hkp(i, j).imag() == 0.0);
      CHECK(m.hkp(i + 4, j + 4) == std::conj(m.hkp(i, j)));
      CHECK(m.hkp(i, j + 4) == 0.0);
    }
  CHECK(m.kinetic == Approx(0.5 * constants::hbar / f.k.m0 * kx * kx).epsilon(1e-15));

  // k+ = i k_y along y
  const KpMatrix my = build_kp_matrix(Vec2(0.0, kx), 0.0, f.k);
  CHECK(my.hkp(0, 2) == std::complex<double>(0.0, v));
  CHECK(my.hkp(0, 1) == std::complex<double>(0.0, -v));
}

TEST_CASE("hermiticity and block structure") {
  const auto& f = fixture();
  for (const Vec2& dk : {Vec2(0.07, 0.03), Vec2(-0.02, 0.09), Vec2(0.1, 0.1)})
    for (double om : {0.0, 1.0, 1e2, 1e4}) {
      const KpMatrix m = build_kp_matrix(dk * f.zone, om, f.k);
      CHECK(hermiticity_defect(m) <= 1e-12 * f.k.omega_scale);
      CHECK((m.homega.bottomRightCorner<4, 4>() + m.homega.topLeftCorner<4, 4>().conjugate()).cwiseAbs().maxCoeff() ==
            0.0);
      CHECK(m.total().topRightCorner<4, 4>().cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("spectrum is even in the rotation rate") {
  const auto& f = fixture();
  const Vec2 dk = Vec2(0.04, -0.06) * f.zone;
  const auto a = kp_bands(dk, 3e3, f.k);
  const auto b = kp_bands(dk, -3e3, f.k);
  for (int i = 0; i < 8; ++i) CHECK(a(i) == Approx(b(i)).epsilon(1e-13));
}

TEST_CASE("matrix is linear in the rotation rate") {
  const auto& f = fixture();
  const Vec2 dk = Vec2(0.05, 0.02) * f.zone;
  const auto m1 = build_kp_matrix(dk, 1.0, f.k);
  const auto m7 = build_kp_matrix(dk, 7.0, f.k);
  CHECK((m7.homega - 7.0 * m1.homega).cwiseAbs().maxCoeff() <= 1e-15 * m7.homega.cwiseAbs().maxCoeff());
  CHECK(m7.hkp == m1.hkp);
}

TEST_CASE("splittings at T") {
  const auto& f = fixture();
  const double n2 = f.k.n * f.k.n;
  for (double om : {1.0, 1e2, 1e4}) {
    const KpSplitting s = kp_splitting(om, f.k);
    CHECK(s.dw_spin_t5 == Approx(2 * om / n2).epsilon(1e-12));
    CHECK(s.dw_spin_t5p == Approx(2 * om / n2).epsilon(1e-12));
    CHECK(s.dw_orbital == Approx(2 * f.k.M() * om / n2).epsilon(1e-12));
    // T5 / T5' doublets and the quadruplet order
    CHECK(s.shifts[3] < s.shifts[7]);
    CHECK(s.shifts[2] < s.shifts[0]);
    CHECK(s.shifts[0] == s.shifts[3]);
    CHECK(s.shifts[5] < s.shifts[4]);
    CHECK(s.shifts[4] < s.shifts[6]);
  }
  const KpSplitting zero = kp_splitting(0.0, f.k);
  for (double v : zero.shifts) CHECK(v == 0.0);

  const auto alt = with_orbital(f.k, {10.0, 20.0});
  CHECK(kp_splitting(1.0, alt).dw_orbital == Approx(60.0 / n2).epsilon(1e-14));
}

TEST_CASE("levels track the basis states at small dk") {
  const auto& f = fixture();
  const auto levels = kp_levels(Vec2(1e-4, 0.0) * f.zone, 0.0, f.k);
  CHECK((levels[0].basis_index % 4) == 3);
  CHECK((levels[7].basis_index % 4) == 0);
  const Matrix8cd v = kp_states(Vec2(0.05, 0.02) * f.zone, 1e3, f.k);
  CHECK((v.adjoint() * v - Matrix8cd::Identity()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("agreement with the plane-wave bands") {
  const auto& f = fixture();
  CHECK(kp_vs_pwe(f, Vec2::Zero()) < 1e-12);
  for (double t : {0.02, 0.05, 0.1}) {
    CAPTURE(t);
    CHECK(kp_vs_pwe(f, Vec2(t, 0.0) * f.zone) < 0.02);
    CHECK(kp_vs_pwe(f, Vec2(t, t) * (f.zone / std::sqrt(2.0))) < 0.02);
  }
}

TEST_CASE("validity warnings") {
  const auto& f = fixture();
  CHECK(build_kp_matrix(Vec2(1e-3, 0.0) * f.zone, 0.0, f.k).warnings.empty());
  const auto far = build_kp_matrix(Vec2(0.6, 0.0) * f.zone, 0.0, f.k);
  CHECK(far.warnings.size() == 2);
  CHECK(far.warnings[0].find("0.5 pi/Lambda") != std::string::npos);
  CHECK(build_kp_matrix(Vec2(0.2, 0.0) * f.zone, 0.0, f.k).warnings.size() == 1);
}
