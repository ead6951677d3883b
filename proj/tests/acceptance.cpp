// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Argument: scratch directory for the CLI reproducibility runs.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/empty_lattice.hpp"
#include "oracles/eta_quadrature.hpp"
#include "rotphc/app.hpp"
#include "rotphc/kp.hpp"
#include "rotphc/observables.hpp"

using namespace rotphc;
namespace fs = std::filesystem;
using constants::pi;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Empty lattice reproduces the folded free-photon parabolas.
Outcome empty_lattice() {
  const auto t0 = std::chrono::steady_clock::now();
  PhysicalParameters p;
  p.phase_contrast = 0.0;
  const PweSolver solver(p, 10);
  const double hm = solver.constants().hbar_over_m0;
  const double scale = solver.constants().omega_scale;
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(-pi / p.pitch, pi / p.pitch);
  double err = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Vec2 k(u(rng), u(rng));
    const auto w = solver.frequencies(k, 8);
    const auto ref = oracle::folded_parabolas(k.x(), k.y(), p.pitch, hm, 8);
    for (int b = 0; b < 8; ++b) err = std::max(err, std::abs(w(b) - ref[b]) / std::max(ref[b], scale));
  }
  const double t = seconds_since(t0);
  return {err <= 1e-10 && t < 30.0, "max rel error " + sci(err) + ", " + sci(t) + " s"};
}

// 2. Zone-corner quartet: {1,2,1} clusters labelled T1, T5, T4.
Outcome t_point_structure() {
  const PhysicalParameters p;
  const PweSolver solver(p, 10);
  const auto at_t = solver.solve(bz::t_point(p.pitch), 8);
  const auto q = resolve_t_quartet(at_t, solver.constants().omega_scale);
  std::vector<int> sizes;
  std::string labels;
  for (const auto& c : q.clusters)
    if (c.first_band < 4) {
      sizes.push_back(c.size);
      labels += (labels.empty() ? "" : ",") + c.content.describe();
    }
  const double split = std::abs(at_t.frequencies(2) - at_t.frequencies(1)) / solver.constants().omega_scale;
  const bool ok = sizes == std::vector<int>{1, 2, 1} && labels == "T1,T5,T4" && split < 1e-9;
  return {ok, "clusters " + labels + ", doublet splitting " + sci(split) + " omega_scale"};
}

// 3. k.p reproduces the edges at T and the plane-wave bands nearby.
Outcome kp_agreement() {
  const PhysicalParameters p;
  const PweSolver solver(p, 10);
  const KpParameters k = extract_kp_parameters(solver, p);
  const double spread = k.w_t5p - k.w_t5;
  const Vec2 t = bz::t_point(p.pitch);
  auto dev = [&](const Vec2& dk) {
    const auto w8 = kp_bands(dk, 0.0, k);
    const auto pw = solver.frequencies(t + dk, 4);
    double e = 0.0;
    for (int b = 0; b < 4; ++b) e = std::max({e, std::abs(w8(2 * b) - pw(b)), std::abs(w8(2 * b + 1) - pw(b))});
    return e / spread;
  };
  const double at_t = dev(Vec2::Zero());
  double worst = 0.0;
  for (int i = 1; i <= 10; ++i) {
    const double r = 0.01 * i * pi / p.pitch;
    worst = std::max({worst, dev(Vec2(r, 0.0)), dev(Vec2(r, r) / std::sqrt(2.0))});
  }
  return {at_t < 1e-10 && worst <= 0.02,
          "at T " + sci(at_t) + ", max over |dk| <= 0.1 pi/Lambda " + sci(worst) + " of the quartet spread"};
}

// 4. Spin splitting 2 Omega / n^2.
Outcome spin_splitting_check() {
  const PhysicalParameters p;
  const PweSolver solver(p, 10);
  const KpParameters k = extract_kp_parameters(solver, p);
  const double ref = 2.0 / (p.refractive_index * p.refractive_index);
  double err = 0.0;
  for (double om : {1.0, 1e2, 1e4}) {
    const KpSplitting s = kp_splitting(om, k);
    err = std::max({err, std::abs(s.dw_spin_t5 / om - ref) / ref, std::abs(s.dw_spin_t5p / om - ref) / ref,
                    std::abs(spin_splitting(om, p.refractive_index) / om - ref) / ref});
  }
  return {err <= 1e-12, "max rel deviation from 2/n^2 " + sci(err)};
}

// 5. Orbital parameters: closed form and plane-wave masses.
Outcome orbital_parameters() {
  const auto t0 = std::chrono::steady_clock::now();
  PhysicalParameters p;
  p.phase_contrast = 1e-4;
  const AnalyticM a = analytic_M(p);
  bool ok = std::abs(a.m.m_plus - 403.638844352032) < 1e-9 && std::abs(a.m.m_minus - 639.052494371364) < 1e-9 &&
            a.m.sum() > 1e3;
  const RunConfig defaults;
  double worst = 0.0;
  for (double d : defaults.contrast_sweep.values()) {
    PhysicalParameters q = p;
    q.phase_contrast = d;
    const double ma = analytic_M(q).m.sum();
    const double mp = pwe_mass_route(PweSolver(q, 10)).m.sum();
    worst = std::max(worst, std::abs(mp - ma) / ma);
  }
  const double t = seconds_since(t0);
  ok = ok && worst <= 0.10 && t < 120.0;
  return {ok, "M = " + sci(a.m.sum()) + " at dphi = 1e-4, max route difference " + sci(worst) + ", " + sci(t) + " s"};
}

// 6. Quadruplet slope pattern -1, M-1, -(M+1), -1 in units of Omega/n^2.
Outcome slope_pattern() {
  const PhysicalParameters p;
  const PweSolver solver(p, 10);
  const KpParameters k = extract_kp_parameters(solver, p);
  const double n2 = p.refractive_index * p.refractive_index;
  const double M = k.M();
  const std::array<double, 8> expect{-1.0, M - 1.0, -(M + 1.0), -1.0, 1.0, -(M - 1.0), M + 1.0, 1.0};
  double err = 0.0;
  for (double om : {1.0, 1e2, 1e4}) {
    const KpSplitting s = kp_splitting(om, k);
    for (int b = 0; b < 8; ++b) err = std::max(err, std::abs(s.shifts[b] * n2 / om - expect[b]) / std::abs(expect[b]));
    err = std::max(err, std::abs(s.dw_orbital * n2 / (2.0 * M * om) - 1.0));
  }
  return {err <= 1e-12, "max rel deviation " + sci(err)};
}

// 7. Modal-size relation equals the closed form up to 1/sqrt(1 + s^2).
Outcome modal_size_relation() {
  double err = 0.0;
  for (double d : {3e-5, 1e-4, 1e-3}) {
    PhysicalParameters p;
    p.phase_contrast = d;
    const AnalyticM a = analytic_M(p);
    const double r2 = mean_square_radius(a.m.m_plus, a.m.m_minus, derive_constants(p).momentum_element);
    const double n2 = p.refractive_index * p.refractive_index;
    const double ratio = splitting_from_modal_size(r2, p.fill_factor, p.pitch, p.refractive_index) / (2 * a.m.sum() / n2);
    err = std::max(err, std::abs(ratio - 1.0 / std::sqrt(1.0 + a.s * a.s)));
  }
  return {err <= 1e-9, "max |ratio - 1/sqrt(1+s^2)| " + sci(err)};
}

// 8. Modal size far exceeds the pitch at low contrast.
Outcome modal_size() {
  PhysicalParameters p;
  p.phase_contrast = 1e-4;
  const DerivedConstants dc = derive_constants(p);
  const AnalyticM a = analytic_M(p);
  const double r_an = std::sqrt(mean_square_radius(a.m.m_plus, a.m.m_minus, dc.momentum_element)) / p.pitch;
  const auto route = pwe_mass_route(PweSolver(p, 10));
  const double r_pw = std::sqrt(mean_square_radius(route.m.m_plus, route.m.m_minus, dc.momentum_element)) / p.pitch;
  return {r_an > 100.0 && r_pw > 100.0, "rms radius " + sci(r_an) + " (closed form), " + sci(r_pw) + " (plane waves) pitches"};
}

// 9. Longitudinal modulation against the quadrature oracle.
Outcome eta_suite() {
  const PhysicalParameters p;
  const PweSolver solver(p, 10);
  const auto at_t = solver.solve(bz::t_point(p.pitch), 8);
  const auto q = resolve_t_quartet(at_t, solver.constants().omega_scale);
  const double l = solver.constants().cavity_length;
  double worst = 0.0;
  for (double alpha : {alpha_overlap(q.s, at_t.basis, solver.pattern()), 0.013}) {
    const EtaChecks c = check_eta(eta_profile(alpha, l, 512));
    const double slope = -alpha / (2 * l);
    const double oracle = oracle::eta_mean_modulus_quadrature(alpha, l);
    worst = std::max({worst, c.max_modulus_defect / 1e-14, c.phase_oddness / 1e-12,
                      std::abs(c.slope_left - slope) / std::abs(slope) / 1e-10,
                      std::abs(c.slope_right - slope) / std::abs(slope) / 1e-10, std::abs(c.jump - alpha) / alpha / 1e-10,
                      std::abs(c.mean_derivative) * l / alpha / 1e-10,
                      std::abs(eta_mean_modulus(alpha) - oracle) / oracle / 1e-10,
                      std::abs(c.mean_modulus - oracle) / oracle / 1e-6});
  }
  return {worst <= 1.0, "worst check at " + sci(worst) + " of its tolerance"};
}

// 10. Orbital splitting falls with the contrast and with the pitch.
Outcome sweep_trends() {
  const RunConfig defaults;
  const auto dphis = defaults.contrast_sweep.values();
  bool monotone = true, ordered = true;
  double worst_ratio = 0.0;
  std::vector<std::vector<double>> curves;
  for (double pitch : {4e-6, 6e-6}) {
    std::vector<double> curve;
    for (double d : dphis) {
      PhysicalParameters p;
      p.pitch = pitch;
      p.phase_contrast = d;
      const double n2 = p.refractive_index * p.refractive_index;
      const double an = 2.0 * analytic_M(p).m.sum() / n2;
      const double pw = 2.0 * pwe_mass_route(PweSolver(p, 10)).m.sum() / n2;
      curve.push_back(pw);
      if (curve.size() > 1 && !(curve[curve.size() - 2] > pw)) monotone = false;
      worst_ratio = std::max(worst_ratio, std::abs(pw / an - 1.0));
    }
    curves.push_back(curve);
  }
  for (std::size_t i = 0; i < dphis.size(); ++i) ordered = ordered && curves[0][i] > curves[1][i];
  return {monotone && ordered,
          std::string("monotone ") + (monotone ? "yes" : "no") + ", 4 um above 6 um " + (ordered ? "yes" : "no") +
              ", max route deviation " + sci(worst_ratio)};
}

// 11. Byte-identical CLI output across two runs.
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome reproducibility(const fs::path& root) {
  std::vector<fs::path> dirs{root / "run_a", root / "run_b"};
  for (const auto& d : dirs) {
    fs::remove_all(d);
    for (const char* cmd : {"validate", "sweep"}) {
      const std::string out = d.string();
      const char* argv[] = {"rotphc", cmd, "--out", out.c_str(), "--format", "csv+svg"};
      std::ostringstream o, e;
      const int code = run_cli(6, argv, o, e);
      if (code != kExitOk) return {false, std::string(cmd) + " exited with " + std::to_string(code) + ": " + e.str()};
    }
  }
  int files = 0;
  for (const auto& entry : fs::directory_iterator(dirs[0])) {
    const auto name = entry.path().filename();
    const fs::path other = dirs[1] / name;
    if (!fs::exists(other)) return {false, "missing " + name.string() + " in second run"};
    if (name == "config.json") {
      auto a = nlohmann::json::parse(slurp(entry.path()));
      auto b = nlohmann::json::parse(slurp(other));
      a["output"].erase("directory");
      b["output"].erase("directory");
      if (a != b) return {false, "config.json differs beyond output.directory"};
    } else if (slurp(entry.path()) != slurp(other)) {
      return {false, name.string() + " differs"};
    }
    ++files;
  }
  return {files >= 4, std::to_string(files) + " files identical"};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path scratch = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "rotphc_acceptance";
  fs::create_directories(scratch);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1  empty-lattice limit", empty_lattice},
      {"AC2  zone-corner symmetry", t_point_structure},
      {"AC3  k.p against plane waves", kp_agreement},
      {"AC4  spin splitting", spin_splitting_check},
      {"AC5  orbital parameter M", orbital_parameters},
      {"AC6  quadruplet slopes", slope_pattern},
      {"AC7  modal-size relation", modal_size_relation},
      {"AC8  modal size", modal_size},
      {"AC9  longitudinal modulation", eta_suite},
      {"AC10 sweep trends", sweep_trends},
      {"AC11 reproducible output", [&] { return reproducibility(scratch); }},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(32) << name << o.detail << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << std::endl;
  return failed ? 1 : 0;
}
