#include <doctest.h>

#include <limits>

#include "rotphc/symmetry.hpp"

using namespace rotphc;
using doctest::Approx;

namespace {

struct Fixture {
  PhysicalParameters p;
  PweSolver solver{p, 8};
  BandSolution at_t = solver.solve(bz::t_point(p.pitch), 8);
  GroupAction action{at_t.basis, at_t.k};
};

}  // namespace

TEST_CASE("C4v group table") {
  for (int a = 0; a < kGroupOrder; ++a) {
    CHECK(multiply(a, inverse(a)) == 0);
    for (int b = 0; b < kGroupOrder; ++b) {
      const Eigen::Matrix2i ab = c4v_elements()[a].rotation * c4v_elements()[b].rotation;
      CHECK(c4v_elements()[multiply(a, b)].rotation == ab);
    }
  }
  std::array<int, 5> class_size{};
  for (const auto& g : c4v_elements()) ++class_size[g.cls];
  CHECK(class_size == std::array<int, 5>{1, 2, 1, 2, 2});
}

TEST_CASE("character table orthogonality and dimensions") {
  int dims = 0;
  for (int a = 0; a < kIrrepCount; ++a) {
    dims += dimension(Irrep(a)) * dimension(Irrep(a));
    CHECK(character(Irrep(a), 0) == dimension(Irrep(a)));
    for (int b = 0; b < kIrrepCount; ++b) {
      double s = 0.0;
      for (int g = 0; g < kGroupOrder; ++g) s += character(Irrep(a), g) * character(Irrep(b), g);
      CHECK(s == Approx(a == b ? 8.0 : 0.0));
    }
  }
  CHECK(dims == kGroupOrder);
  CHECK(std::string(label(Irrep::T5)) == "T5");
  CHECK(std::string(mulliken(Irrep::T4)) == "B2");
}

TEST_CASE("T5 matrices form a representation") {
  for (int a = 0; a < kGroupOrder; ++a) {
    CHECK(t5_matrix(a).trace() == Approx(character(Irrep::T5, a)));
    for (int b = 0; b < kGroupOrder; ++b)
      CHECK((t5_matrix(a) * t5_matrix(b) - t5_matrix(multiply(a, b))).norm() == Approx(0.0));
  }
}

TEST_CASE("group action needs a closed window at T") {
  const double L = 4e-6;
  CHECK_THROWS_AS(GroupAction(reciprocal_window(bz::gamma(), L, 3), bz::gamma()), InvalidParameter);
  CHECK_THROWS_AS(GroupAction(reciprocal_vectors(L, 3), bz::t_point(L)), InvalidParameter);
  CHECK_NOTHROW(GroupAction(reciprocal_window(bz::t_point(L), L, 3), bz::t_point(L)));
}

TEST_CASE("Hamiltonian commutes with the group action") {
  Fixture f;
  const auto h = f.solver.hamiltonian(f.at_t.k);
  const auto n = h.matrix.rows();
  const double eps = std::numeric_limits<double>::epsilon();
  for (int g = 0; g < kGroupOrder; ++g) {
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, n);
    const auto& perm = f.action.permutation(g);
    for (Eigen::Index i = 0; i < n; ++i) u(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)]), i) = 1.0;
    CHECK((u * h.matrix - h.matrix * u).cwiseAbs().maxCoeff() <= 4 * eps * h.matrix.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("degeneracy structure at T for the default lattice") {
  Fixture f;
  const auto clusters = classify_bands(f.at_t, f.solver.constants().omega_scale);
  REQUIRE(clusters.size() >= 3);
  CHECK(clusters[0].size == 1);
  CHECK(clusters[1].size == 2);
  CHECK(clusters[2].size == 1);
  CHECK(clusters[0].content.describe() == "T1");
  CHECK(clusters[1].content.describe() == "T5");
  CHECK(clusters[2].content.describe() == "T4");
  for (const auto& c : clusters) CHECK(c.content.invariance_defect < 1e-8);
  const double ws = f.solver.constants().omega_scale;
  CHECK(std::abs(f.at_t.frequencies(2) - f.at_t.frequencies(1)) < 1e-9 * ws);
}

TEST_CASE("classification of a mixed subspace") {
  Fixture f;
  const Eigen::MatrixXd v = f.at_t.coefficients.leftCols(4);
  const auto c = classify_irrep(v, f.action);
  CHECK(c.describe() == "T1+T4+T5");
  CHECK(c.dimension() == 4);
  // half a doublet is not an invariant subspace
  CHECK_THROWS_AS(classify_irrep(f.at_t.coefficients.middleCols(1, 1), f.action), NumericalError);
}

TEST_CASE("symmetry-adapted quartet") {
  Fixture f;
  const TQuartet q = resolve_t_quartet(f.at_t, f.solver.constants().omega_scale);
  CHECK(q.w_s < q.w_x);
  CHECK(q.w_x < q.w_xy);
  for (int g = 0; g < kGroupOrder; ++g) {
    CHECK((f.action.apply(g, q.s) - q.s).norm() < 1e-10);
    CHECK((f.action.apply(g, q.xy) - character(Irrep::T4, g) * q.xy).norm() < 1e-10);
    const Eigen::Matrix2d d = t5_matrix(g);
    CHECK((f.action.apply(g, q.ix) - (d(0, 0) * q.ix + d(1, 0) * q.iy)).norm() < 1e-10);
    CHECK((f.action.apply(g, q.iy) - (d(0, 1) * q.ix + d(1, 1) * q.iy)).norm() < 1e-10);
  }
  CHECK(q.s.norm() == Approx(1.0));
  CHECK(std::abs(q.ix.dot(q.iy)) < 1e-12);
  // phase convention: S has equal positive weight on the four innermost waves
  const auto& basis = f.at_t.basis;
  const double c0 = q.s(static_cast<Eigen::Index>(basis.flat(0, 0).value()));
  CHECK(c0 > 0.0);
  for (auto [i, j] : {std::pair{-1, 0}, std::pair{0, -1}, std::pair{-1, -1}})
    CHECK(q.s(static_cast<Eigen::Index>(basis.flat(i, j).value())) == Approx(c0).epsilon(1e-10));
}

TEST_CASE("empty lattice quartet is not resolvable") {
  PhysicalParameters p;
  p.phase_contrast = 0.0;
  const PweSolver s(p, 4);
  const auto sol = s.solve(bz::t_point(p.pitch), 6);
  // the fourfold cluster still decomposes into T1 + T4 + T5, all at one edge
  const TQuartet q = resolve_t_quartet(sol, s.constants().omega_scale);
  CHECK(q.w_s == Approx(q.w_x).epsilon(1e-12));
  CHECK(q.w_xy == Approx(q.w_x).epsilon(1e-12));
  CHECK_THROWS_AS(resolve_t_quartet(s.solve(bz::t_point(p.pitch), 4), s.constants().omega_scale), InvalidParameter);
}

TEST_CASE("photonic harmonics") {
  Fixture f;
  const TQuartet q = resolve_t_quartet(f.at_t, f.solver.constants().omega_scale);
  const auto b = photonic_harmonics(q);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) CHECK(std::abs(inner(b[i], b[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);

  // C4 maps each harmonic onto itself up to a phase (circular polarisation)
  for (int i = 0; i < 8; ++i) {
    const VectorState r = apply(1, b[i], f.action);
    CHECK(std::abs(std::abs(inner(b[i], r)) - 1.0) < 1e-10);
  }
  // complex conjugation swaps the blocks
  for (int i = 0; i < 4; ++i) {
    const VectorState c = conjugate(b[i], f.at_t.basis, f.at_t.k);
    CHECK(std::abs(std::abs(inner(b[i + 4], c)) - 1.0) < 1e-10);
  }
}
