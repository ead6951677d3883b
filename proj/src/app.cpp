#include "rotphc/app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>

#include "rotphc/io.hpp"
#include "rotphc/kp.hpp"
#include "rotphc/observables.hpp"
#include "rotphc/pattern.hpp"
#include "rotphc/pwe.hpp"
#include "rotphc/symmetry.hpp"
#include "rotphc/version.hpp"

namespace fs = std::filesystem;

namespace rotphc {

using constants::pi;

namespace {

fs::path out_file(const RunConfig& c, const std::string& name) { return fs::path(c.output_directory) / name; }

void common_meta(CsvWriter& w, const std::string& command, const RunConfig& c) {
  w.meta("tool", std::string("rotphc ") + kVersion);
  w.meta("command", command);
  w.meta("wavelength_m", c.physical.wavelength);
  w.meta("refractive_index", c.physical.refractive_index);
  w.meta("pitch_m", c.physical.pitch);
  w.meta("fill_factor", c.physical.fill_factor);
  w.meta("phase_contrast_rad", c.physical.phase_contrast);
  w.meta("rotation_rate_rad_per_s", c.physical.rotation_rate);
  w.meta("pwe_cutoff", std::to_string(c.pwe_cutoff));
}

std::string band_name(const std::string& stem, int i) { return stem + "_" + std::to_string(i); }

void print_warnings(const std::vector<std::string>& w, std::ostream& log) {
  for (const auto& s : w) log << "warning: " << s << "\n";
}

}  // namespace

void prepare_output(const RunConfig& c) {
  std::error_code ec;
  fs::create_directories(c.output_directory, ec);
  if (ec || !fs::is_directory(c.output_directory))
    throw ConfigError("output directory '" + c.output_directory + "' cannot be created");
  std::ofstream cfg(out_file(c, "config.json"), std::ios::binary);
  std::ofstream ver(out_file(c, "VERSION"), std::ios::binary);
  if (!cfg || !ver) throw ConfigError("output directory '" + c.output_directory + "' is not writable");
  cfg << to_json(c).dump(2) << "\n";
  ver << "rotphc " << kVersion << "\n";
}

// ---------------------------------------------------------------------------

int cmd_bands(const RunConfig& c, std::ostream& log) {
  print_warnings(validate(c.physical), log);
  const PweSolver solver(c.physical, c.pwe_cutoff);
  const DerivedConstants& dc = solver.constants();
  const BzPath path = bz_path(c.path_labels, c.samples_per_segment, c.physical.pitch);
  const BandTable table = band_structure(path, solver, c.bands);

  CsvWriter w(out_file(c, "bands.csv"));
  common_meta(w, "bands", c);
  std::string labels;
  for (std::size_t i = 0; i < path.labels.size(); ++i)
    labels += (i ? "-" : "") + path.labels[i] + "@" + format_double(path.vertex_s[i]);
  w.meta("path", labels);
  w.meta("omega_scale_rad_per_s", dc.omega_scale);
  w.meta("units", "s and k in 1/m, bands in rad/s relative to the paraxial offset");
  std::vector<std::string> cols{"s", "kx", "ky"};
  for (int b = 0; b < c.bands; ++b) cols.push_back(band_name("band", b));
  w.header(cols);
  for (std::size_t i = 0; i < table.s.size(); ++i) {
    std::vector<double> row{table.s[i], table.k[i].x(), table.k[i].y()};
    for (int b = 0; b < c.bands; ++b) row.push_back(table.bands(static_cast<Eigen::Index>(i), b));
    w.row(row);
  }
  log << "bands: " << table.s.size() << " k-points x " << c.bands << " bands -> " << out_file(c, "bands.csv").string()
      << "\n";

  std::vector<PlotSeries> series;
  for (int b = 0; b < c.bands; ++b) {
    PlotSeries ps;
    ps.x = table.s;
    for (std::size_t i = 0; i < table.s.size(); ++i)
      ps.y.push_back(table.bands(static_cast<Eigen::Index>(i), b) / dc.omega_scale);
    series.push_back(std::move(ps));
  }

  if (c.kp) {
    const Vec2 t = bz::t_point(c.physical.pitch);
    const BandSolution at_t = solver.solve(t, std::max(6, std::min(c.bands, 8)));
    const TQuartet q = resolve_t_quartet(at_t, dc.omega_scale);
    const KpParameters kp = extract_kp_parameters(at_t, q, c.physical);
    const double omega = c.physical.rotation_rate;
    const Eigen::Matrix<double, 8, 1> at_zero = kp_bands(Vec2::Zero(), omega, kp);
    double err_t = 0.0;
    if (omega == 0.0)
      for (int i = 0; i < 4; ++i)
        err_t = std::max({err_t, std::abs(at_zero(2 * i) - at_t.frequencies(i)),
                          std::abs(at_zero(2 * i + 1) - at_t.frequencies(i))});

    CsvWriter kw(out_file(c, "kp_bands.csv"));
    common_meta(kw, "bands --kp", c);
    kw.meta("kp_window_pi_over_pitch", c.kp_window);
    kw.meta("P_kg_m_per_s", kp.P);
    kw.meta("M_plus", kp.m_plus);
    kw.meta("M_minus", kp.m_minus);
    if (omega == 0.0) kw.meta("max_abs_kp_minus_pwe_at_T_over_omega_scale", err_t / dc.omega_scale);
    std::vector<std::string> kc{"s", "kx", "ky", "omega_rot"};
    for (int b = 0; b < 8; ++b) kc.push_back(band_name("kp", b));
    kw.header(kc);
    std::vector<PlotSeries> kps(8);
    for (auto& ps : kps) {
      ps.colour = "gray";
      ps.dashed = true;
    }
    bool warned = false;
    for (std::size_t i = 0; i < table.s.size(); ++i) {
      const Vec2 dk = table.k[i] - t;
      const bool inside = dk.norm() <= c.kp_window * pi / c.physical.pitch * (1.0 + 1e-12);
      for (auto& ps : kps) ps.x.push_back(table.s[i]);
      if (!inside) {
        for (auto& ps : kps) ps.y.push_back(std::nan(""));
        continue;
      }
      const KpMatrix m = build_kp_matrix(dk, omega, kp);
      if (!warned && !m.warnings.empty()) {
        print_warnings(m.warnings, log);
        warned = true;
      }
      const auto w8 = kp_bands(dk, omega, kp);
      std::vector<double> row{table.s[i], table.k[i].x(), table.k[i].y(), omega};
      for (int b = 0; b < 8; ++b) {
        row.push_back(w8(b));
        kps[static_cast<std::size_t>(b)].y.push_back(w8(b) / dc.omega_scale);
      }
      kw.row(row);
    }
    for (auto& ps : kps) series.push_back(std::move(ps));
    if (omega == 0.0) log << "kp: max |kp - pwe| at T = " << err_t / dc.omega_scale << " omega_scale\n";
  }
  if (c.svg())
    write_svg_plot(out_file(c, "bands.svg"), "Band structure", "s (1/m)", "dw / omega_scale", series);
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_splitting(const RunConfig& c, std::ostream& log) {
  print_warnings(validate(c.physical), log);
  const PweSolver solver(c.physical, c.pwe_cutoff);
  const KpParameters kp = extract_kp_parameters(solver, c.physical);
  const double n = c.physical.refractive_index;

  CsvWriter w(out_file(c, "splitting.csv"));
  common_meta(w, "splitting", c);
  w.meta("M_plus", kp.m_plus);
  w.meta("M_minus", kp.m_minus);
  w.meta("M", kp.M());
  w.meta("two_over_n_squared", 2.0 / (n * n));
  w.meta("edge_T5_rad_per_s", kp.w_t5);
  w.meta("edge_T1_rad_per_s", kp.w_t1);
  w.meta("edge_T5prime_rad_per_s", kp.w_t5p);
  w.meta("shift_order", "T5'(+),T1-4(+)a,T1-4(+)b,T5(+),T5'(-),T1-4(-)a,T1-4(-)b,T5(-)");
  std::vector<std::string> cols{"omega", "dw_spin", "dw_spin_t5prime", "dw_orbital"};
  for (int b = 0; b < 8; ++b) cols.push_back(band_name("shift", b));
  w.header(cols);

  PlotSeries spin, orb;
  spin.colour = "gray";
  const auto omegas = c.rotation_sweep.values();
  for (double om : omegas) {
    const KpSplitting s = kp_splitting(om, kp);
    std::vector<double> row{om, s.dw_spin_t5, s.dw_spin_t5p, s.dw_orbital};
    row.insert(row.end(), s.shifts.begin(), s.shifts.end());
    w.row(row);
    spin.x.push_back(om);
    spin.y.push_back(s.dw_spin_t5);
    orb.x.push_back(om);
    orb.y.push_back(s.dw_orbital);
  }

  const SplittingReport rep =
      make_splitting_report(omegas.back(), {kp.m_plus, kp.m_minus}, derive_constants(c.physical).momentum_element, c.physical);
  std::ofstream txt(out_file(c, "splitting_report.txt"), std::ios::binary);
  txt << to_text(rep);
  log << to_text(rep);
  if (c.svg())
    write_svg_plot(out_file(c, "splitting.svg"), "Coriolis-Zeeman splitting", "Omega (rad/s)", "dw (rad/s)",
                   {orb, spin});
  return kExitOk;
}

// ---------------------------------------------------------------------------

namespace {

struct SweepRow {
  double pitch, dphi;
  AnalyticM an;
  double r2, eq12, ratio;
  PweMassRoute pwe;
  double r2_pwe, eq12_pwe;
};

SweepRow sweep_point(const RunConfig& c, double pitch, double dphi) {
  PhysicalParameters p = c.physical;
  p.pitch = pitch;
  p.phase_contrast = dphi;
  const DerivedConstants dc = derive_constants(p);
  const double n = p.refractive_index;
  SweepRow r{};
  r.pitch = pitch;
  r.dphi = dphi;
  r.an = analytic_M(p);
  r.r2 = mean_square_radius(r.an.m.m_plus, r.an.m.m_minus, dc.momentum_element);
  r.eq12 = splitting_from_modal_size(r.r2, p.fill_factor, pitch, n);
  r.ratio = r.eq12 / (2.0 * r.an.m.sum() / (n * n));
  const PweSolver solver(p, c.pwe_cutoff);
  r.pwe = pwe_mass_route(solver);
  r.r2_pwe = mean_square_radius(r.pwe.m.m_plus, r.pwe.m.m_minus, dc.momentum_element);
  r.eq12_pwe = splitting_from_modal_size(r.r2_pwe, p.fill_factor, pitch, n);
  return r;
}

}  // namespace

int cmd_sweep(const RunConfig& c, std::ostream& log) {
  print_warnings(validate(c.physical), log);
  const auto dphis = c.contrast_sweep.values();
  const long total = static_cast<long>(c.pitches.size() * dphis.size());
  std::vector<SweepRow> rows(static_cast<std::size_t>(total));
  std::vector<std::exception_ptr> errors(rows.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < total; ++i) {
    const auto u = static_cast<std::size_t>(i);
    try {
      rows[u] = sweep_point(c, c.pitches[u / dphis.size()], dphis[u % dphis.size()]);
    } catch (...) {
      errors[u] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  const double n = c.physical.refractive_index;
  CsvWriter w(out_file(c, "sweep.csv"));
  common_meta(w, "sweep", c);
  w.meta("dw_spin_over_omega", 2.0 / (n * n));
  w.meta("columns", "analytic route, then the plane-wave effective-mass route (suffix _pwe)");
  w.header({"pitch", "phase_contrast", "m_plus", "m_minus", "m", "dw_orbital_over_omega", "rms_radius",
            "modal_size_estimate", "modal_size_ratio", "m_plus_pwe", "m_minus_pwe", "m_pwe",
            "dw_orbital_over_omega_pwe", "rms_radius_pwe", "modal_size_estimate_pwe", "route_rel_diff"});
  std::vector<PlotSeries> series;
  const char* colours[] = {"black", "gray", "blue", "red"};
  for (std::size_t pi_ = 0; pi_ < c.pitches.size(); ++pi_) {
    PlotSeries an, pw;
    an.colour = pw.colour = colours[pi_ % 4];
    pw.dashed = true;
    for (std::size_t d = 0; d < dphis.size(); ++d) {
      const SweepRow& r = rows[pi_ * dphis.size() + d];
      const double m = r.an.m.sum(), mp = r.pwe.m.sum();
      w.row(std::vector<double>{r.pitch, r.dphi, r.an.m.m_plus, r.an.m.m_minus, m, 2.0 * m / (n * n), std::sqrt(r.r2),
                                r.eq12, r.ratio, r.pwe.m.m_plus, r.pwe.m.m_minus, mp, 2.0 * mp / (n * n),
                                std::sqrt(r.r2_pwe), r.eq12_pwe, std::abs(mp - m) / m});
      an.x.push_back(r.dphi);
      an.y.push_back(2.0 * m / (n * n));
      pw.x.push_back(r.dphi);
      pw.y.push_back(2.0 * mp / (n * n));
    }
    series.push_back(std::move(an));
    series.push_back(std::move(pw));
  }
  log << "sweep: " << total << " points -> " << out_file(c, "sweep.csv").string() << "\n";
  if (c.svg())
    write_svg_plot(out_file(c, "sweep.svg"), "Relative orbital splitting", "phase contrast (rad)", "dw_L / Omega",
                   series, true);
  return kExitOk;
}

// ---------------------------------------------------------------------------

namespace {

double s_state_alpha(const RunConfig& c) {
  const PweSolver solver(c.physical, c.pwe_cutoff);
  const BandSolution at_t = solver.solve(bz::t_point(c.physical.pitch), 6);
  const TQuartet q = resolve_t_quartet(at_t, solver.constants().omega_scale);
  return alpha_overlap(q.s, at_t.basis, solver.pattern());
}

}  // namespace

int cmd_eta(const RunConfig& c, std::ostream& log) {
  print_warnings(validate(c.physical), log);
  const double alpha = c.eta_alpha ? *c.eta_alpha : s_state_alpha(c);
  const DerivedConstants dc = derive_constants(c.physical);
  std::vector<std::string> warnings;
  const EtaProfile prof = eta_profile(alpha, dc.cavity_length, c.eta_samples, &warnings);
  print_warnings(warnings, log);
  const EtaChecks ch = check_eta(prof);

  CsvWriter w(out_file(c, "eta.csv"));
  common_meta(w, "eta", c);
  w.meta("alpha_rad", alpha);
  w.meta("alpha_source", c.eta_alpha ? "config" : "S-like state at T");
  w.meta("cavity_length_m", dc.cavity_length);
  w.meta("mean_abs_eta_samples", ch.mean_modulus);
  w.meta("mean_abs_eta_exact", eta_mean_modulus(alpha));
  w.meta("mean_abs_eta_over_abs_alpha", alpha == 0.0 ? 0.0 : eta_mean_modulus(alpha) / std::abs(alpha));
  w.meta("phase_slope_left", ch.slope_left);
  w.meta("phase_slope_right", ch.slope_right);
  w.meta("phase_jump", ch.jump);
  w.header({"z", "re", "im", "abs", "arg"});
  PlotSeries re, im;
  im.colour = "gray";
  for (std::size_t i = 0; i < prof.z.size(); ++i) {
    const auto v = prof.one_plus_eta[i];
    w.row(std::vector<double>{prof.z[i], v.real(), v.imag(), std::abs(v), std::arg(v)});
    re.x.push_back(prof.z[i]);
    re.y.push_back(v.real() - 1.0);
    im.x.push_back(prof.z[i]);
    im.y.push_back(v.imag());
  }
  log << "eta: alpha = " << alpha << ", <|eta|> = " << eta_mean_modulus(alpha) << "\n";
  if (c.svg()) write_svg_plot(out_file(c, "eta.svg"), "Longitudinal modulation", "z (m)", "eta", {re, im});
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_classify(const RunConfig& c, std::ostream& log) {
  print_warnings(validate(c.physical), log);
  const PweSolver solver(c.physical, c.pwe_cutoff);
  const double ws = solver.constants().omega_scale;
  const BandSolution at_t = solver.solve(bz::t_point(c.physical.pitch), std::max(c.bands, 6));
  const auto clusters = classify_bands(at_t, ws);

  CsvWriter w(out_file(c, "classify.csv"));
  common_meta(w, "classify", c);
  w.meta("omega_scale_rad_per_s", ws);
  w.meta("labels", "T1=S(A1) T2=XY(X2-Y2)(A2) T3=X2-Y2(B1) T4=XY(B2) T5={iX,iY}(E)");
  try {
    const TQuartet q = resolve_t_quartet(at_t, ws);
    w.meta("vector_T5_edge_from_S", q.w_s);
    w.meta("vector_T1_T4_edge_from_iX_iY", q.w_x);
    w.meta("vector_T5prime_edge_from_XY", q.w_xy);
  } catch (const NumericalError& e) {
    w.meta("quartet", e.what());
  }
  w.header({"first_band", "size", "frequency", "frequency_over_omega_scale", "irreps"});
  for (const auto& cl : clusters) {
    w.row(std::vector<std::string>{std::to_string(cl.first_band), std::to_string(cl.size), format_double(cl.frequency),
                                   format_double(cl.frequency / ws), cl.content.describe()});
    log << "bands " << cl.first_band << ".." << cl.first_band + cl.size - 1 << "  " << std::setprecision(10)
        << cl.frequency / ws << " omega_scale  " << cl.content.describe() << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

std::vector<CheckResult> run_validation(const RunConfig& c, const ValidationOptions& opt, std::ostream& log) {
  std::vector<CheckResult> out;
  auto add = [&](const std::string& name, double measured, double tol) {
    const bool ok = measured <= tol;  // NaN fails
    out.push_back({name, measured, tol, ok});
    log << (ok ? "PASS  " : "FAIL  ") << std::left << std::setw(34) << name << std::scientific << std::setprecision(3)
        << measured << "  (tol " << tol << ")" << std::defaultfloat << "\n";
  };
  const PhysicalParameters& p = c.physical;
  const int nb = std::max(c.bands, 6);
  const Vec2 t = bz::t_point(p.pitch);

  // Empty lattice against the folded parabolas.
  {
    PhysicalParameters e = p;
    e.phase_contrast = 0.0;
    const PweSolver empty(e, c.pwe_cutoff);
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> u(-pi / p.pitch, pi / p.pitch);
    double err = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Vec2 k(u(rng), u(rng));
      const auto h = empty.hamiltonian(k);
      const auto w = eigenvalues_at_k(h, c.bands);
      const auto w0 = empty_lattice_bands(k, h.basis, empty.constants(), c.bands);
      for (int b = 0; b < c.bands; ++b)
        err = std::max(err, std::abs(w(b) - w0(b)) / std::max(std::abs(w0(b)), empty.constants().omega_scale));
    }
    add("empty_lattice_rel_error", err, 1e-10);
  }

  const PweSolver solver(p, c.pwe_cutoff);
  const DerivedConstants& dc = solver.constants();
  PweHamiltonian ht = solver.hamiltonian(t);
  if (opt.inject_nonhermitian) ht.matrix(0, 1) += 1e-6 * ht.matrix.cwiseAbs().maxCoeff();
  add("pwe_hermiticity", std::max(hermiticity_defect(ht.matrix), hermiticity_defect(solver.hamiltonian(Vec2(0.3 * pi / p.pitch, 0.1 * pi / p.pitch)).matrix)), 1e-14);

  const BandSolution at_t = solve_at_k(solver.hamiltonian(t), nb);
  const SolutionQuality qual = check_solution(solver.hamiltonian(t), at_t);
  add("eigen_residual", qual.residual, 1e-10);
  add("eigen_orthogonality", qual.orthogonality, 1e-10);

  // Character orthogonality of the C4v table.
  {
    double d = 0.0;
    for (int a = 0; a < kIrrepCount; ++a)
      for (int b = 0; b < kIrrepCount; ++b) {
        double s = 0.0;
        for (int g = 0; g < kGroupOrder; ++g) s += character(Irrep(a), g) * character(Irrep(b), g);
        d = std::max(d, std::abs(s / kGroupOrder - (a == b ? 1.0 : 0.0)));
      }
    add("character_orthogonality", d, 1e-14);
  }

  // Degeneracy structure and irreps of the lowest quartet.
  double structure = 1.0, invariance = 1.0, doublet = 1.0;
  TQuartet quartet;
  bool have_quartet = false;
  try {
    quartet = resolve_t_quartet(at_t, dc.omega_scale);
    have_quartet = true;
    std::vector<int> sizes;
    invariance = 0.0;
    for (const auto& cl : quartet.clusters) {
      if (cl.first_band >= 4) break;
      sizes.push_back(cl.size);
      invariance = std::max(invariance, cl.content.invariance_defect);
    }
    structure = sizes == std::vector<int>{1, 2, 1} ? 0.0 : 1.0;
    for (const auto& cl : quartet.clusters)
      if (cl.size == 2 && cl.first_band < 4)
        doublet = std::abs(at_t.frequencies(cl.first_band + 1) - at_t.frequencies(cl.first_band)) / dc.omega_scale;
  } catch (const NumericalError& e) {
    log << "quartet: " << e.what() << "\n";
  }
  add("t_point_cluster_structure_121", structure, 0.0);
  add("t_point_doublet_splitting", doublet, 1e-9);
  add("irrep_invariance_defect", invariance, 1e-8);

  // Truncation drift between N and 2N.
  {
    const PweSolver fine(p, 2 * c.pwe_cutoff);
    const int m = std::min(nb, 8);
    const auto w1 = solver.frequencies(t, m);
    const auto w2 = fine.frequencies(t, m);
    add("convergence_N_vs_2N", (w1 - w2).cwiseAbs().maxCoeff() / dc.omega_scale, 1e-4);
  }

  // k.p exactness at T and the rotation splittings.
  if (have_quartet) {
    const KpParameters kp = extract_kp_parameters(at_t, quartet, p);
    const auto w8 = kp_bands(Vec2::Zero(), 0.0, kp);
    double err = 0.0;
    for (int i = 0; i < 4; ++i)
      err = std::max({err, std::abs(w8(2 * i) - at_t.frequencies(i)), std::abs(w8(2 * i + 1) - at_t.frequencies(i))});
    add("kp_exact_at_T", err / dc.omega_scale, 1e-10);
    add("kp_hermiticity", hermiticity_defect(build_kp_matrix(Vec2(0.07, 0.03) * pi / p.pitch, 1e3, kp)) / dc.omega_scale,
        1e-15);
    const double n2 = p.refractive_index * p.refractive_index;
    double spin = 0.0, pattern = 0.0;
    for (double om : {1.0, 1e2, 1e4}) {
      const KpSplitting s = kp_splitting(om, kp);
      spin = std::max(spin, std::abs(s.dw_spin_t5 / om - 2.0 / n2) / (2.0 / n2));
      spin = std::max(spin, std::abs(s.dw_spin_t5p / om - 2.0 / n2) / (2.0 / n2));
      const double M = kp.M();
      const std::array<double, 8> expect{-1.0, M - 1.0, -(M + 1.0), -1.0, 1.0, -(M - 1.0), M + 1.0, 1.0};
      for (int b = 0; b < 8; ++b)
        pattern = std::max(pattern, std::abs(s.shifts[b] / om * n2 - expect[b]) / std::abs(expect[b]));
    }
    add("spin_splitting_2_over_n2", spin, 1e-12);
    add("quadruplet_slope_pattern", pattern, 1e-12);
  } else {
    add("kp_exact_at_T", std::nan(""), 1e-10);
  }

  // Two routes to M (plane-wave masses vs square-pixel formula).
  for (double dphi : {1e-4, 1e-3}) {
    PhysicalParameters q = p;
    q.phase_contrast = dphi;
    const PweSolver s(q, c.pwe_cutoff);
    const double ma = analytic_M(q).m.sum();
    const double mp = pwe_mass_route(s).m.sum();
    std::ostringstream name;
    name << "two_route_M_dphi_" << dphi;
    add(name.str(), std::abs(mp - ma) / ma, 0.10);
  }

  // f-sum rule against the finite-difference mass of the S-like band.
  if (have_quartet) {
    const auto h = solver.hamiltonian(t);
    const BandSolution full = solve_at_k(h, static_cast<int>(h.matrix.rows()));
    int band_s = 0;
    for (const auto& cl : quartet.clusters)
      if (cl.first_band < 4 && cl.size == 1 && cl.content.multiplicity[0] == 1) band_s = cl.first_band;
    const double fsum = fsum_mass_ratio(full, band_s, Vec2(1.0, 0.0), dc);
    const MassEstimate fd = effective_mass(solver, t, Vec2(1.0, 0.0), band_s, 1e-3 * pi / p.pitch);
    const double fdr = dc.photon_mass / fd.mass;
    add("fsum_vs_finite_difference", std::abs(fsum - fdr) / std::abs(fdr), 1e-4);
  }

  // Modal-size relation with the analytic parameters.
  {
    PhysicalParameters q = p;
    if (q.phase_contrast == 0.0) q.phase_contrast = 1e-4;
    const AnalyticM am = analytic_M(q);
    const double r2 = mean_square_radius(am.m.m_plus, am.m.m_minus, dc.momentum_element);
    const double ratio =
        splitting_from_modal_size(r2, q.fill_factor, q.pitch, q.refractive_index) /
        (2.0 * am.m.sum() / (q.refractive_index * q.refractive_index));
    add("modal_size_ratio", std::abs(ratio - 1.0 / std::sqrt(1.0 + am.s * am.s)), 1e-9);
  }

  // Longitudinal modulation.
  {
    const double alpha = c.eta_alpha ? *c.eta_alpha : (have_quartet ? alpha_overlap(quartet.s, at_t.basis, solver.pattern()) : 0.0);
    const EtaProfile prof = eta_profile(alpha, dc.cavity_length, c.eta_samples);
    const EtaChecks ch = check_eta(prof);
    const double slope = -alpha / (2.0 * dc.cavity_length);
    const double rel = alpha == 0.0 ? 1.0 : std::abs(alpha);
    add("eta_unit_modulus", ch.max_modulus_defect, 1e-14);
    add("eta_phase_oddness", ch.phase_oddness, 1e-12);
    add("eta_slope", std::max(std::abs(ch.slope_left - slope), std::abs(ch.slope_right - slope)) /
                         (alpha == 0.0 ? 1.0 : std::abs(slope)), 1e-10);
    add("eta_jump", std::abs(ch.jump - alpha) / rel, 1e-10);
    add("eta_mean_derivative", ch.mean_derivative * dc.cavity_length / rel, 1e-10);
    const double exact = eta_mean_modulus(alpha);
    add("eta_mean_modulus", alpha == 0.0 ? ch.mean_modulus : std::abs(ch.mean_modulus - exact) / exact, 1e-6);
  }
  return out;
}

int cmd_validate(const RunConfig& c, const ValidationOptions& opt, std::ostream& log) {
  print_warnings(validate(c.physical), log);
  const auto checks = run_validation(c, opt, log);
  CsvWriter w(out_file(c, "validate.csv"));
  common_meta(w, "validate", c);
  w.header({"check", "measured", "tolerance", "pass"});
  bool all = true;
  for (const auto& ch : checks) {
    w.row(std::vector<std::string>{ch.name, format_double(ch.measured), format_double(ch.tolerance), ch.pass ? "1" : "0"});
    all = all && ch.pass;
  }
  log << (all ? "validate: all checks passed\n" : "validate: FAILED\n");
  return all ? kExitOk : kExitValidation;
}

// ---------------------------------------------------------------------------

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Band structure and Coriolis-Zeeman splittings of rotating photonic-crystal cavity arrays", "rotphc"};
  app.set_version_flag("--version", std::string("rotphc ") + kVersion);
  app.require_subcommand(1);

  struct Flags {
    std::string config, out, format;
    int cutoff = 0, bands = 0;
    bool kp = false, inject = false;
    std::vector<std::string> sets;
    std::optional<double> wavelength, index, pitch, fill, contrast, omega;
  } f;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", f.config, "JSON configuration file");
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--pwe-cutoff", f.cutoff, "plane-wave cutoff N")->check(CLI::PositiveNumber);
    sub->add_option("--bands", f.bands, "number of bands")->check(CLI::PositiveNumber);
    sub->add_flag("--kp", f.kp, "also emit k.p bands near T");
    sub->add_option("--format", f.format, "csv or csv+svg")->check(CLI::IsMember({"csv", "csv+svg"}));
    sub->add_option("--wavelength", f.wavelength, "vacuum wavelength (m)");
    sub->add_option("--index", f.index, "refractive index");
    sub->add_option("--pitch", f.pitch, "lattice pitch (m)");
    sub->add_option("--fill-factor", f.fill, "pixel fill factor");
    sub->add_option("--contrast", f.contrast, "mirror phase contrast (rad)");
    sub->add_option("--omega", f.omega, "rotation rate (rad/s)");
    sub->add_option("--set", f.sets, "override a config key, e.g. physical.phase_contrast=1e-4");
    sub->add_flag("--inject-nonhermitian", f.inject)->group("");
  };
  std::vector<std::pair<std::string, CLI::App*>> subs;
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"bands", "band structure along a Brillouin-zone path"},
           {"splitting", "spin and orbital splittings versus rotation rate"},
           {"sweep", "orbital splitting and modal size versus phase contrast"},
           {"eta", "longitudinal modulation profile"},
           {"classify", "symmetry classification of the bands at T"},
           {"validate", "invariant suite"}}) {
    CLI::App* s = app.add_subcommand(name, help);
    add_common(s);
    subs.emplace_back(name, s);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::string command;
  for (const auto& [name, s] : subs)
    if (s->parsed()) command = name;

  try {
    nlohmann::json j = f.config.empty() ? nlohmann::json::object() : read_config_file(f.config);
    for (const auto& kv : f.sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      apply_override(j, kv.substr(0, eq), kv.substr(eq + 1));
    }
    auto num = [&](const char* key, const std::optional<double>& v) {
      if (v) apply_override(j, key, format_double(*v));
    };
    num("physical.wavelength", f.wavelength);
    num("physical.refractive_index", f.index);
    num("physical.pitch", f.pitch);
    num("physical.fill_factor", f.fill);
    num("physical.phase_contrast", f.contrast);
    num("physical.rotation_rate", f.omega);
    if (f.cutoff) apply_override(j, "solver.pwe_cutoff", std::to_string(f.cutoff));
    if (f.bands) apply_override(j, "solver.bands", std::to_string(f.bands));
    if (f.kp) apply_override(j, "kp.enabled", "true");
    if (!f.format.empty()) j["output"]["format"] = f.format;
    if (!f.out.empty()) j["output"]["directory"] = f.out;

    const RunConfig c = from_json(j);
    prepare_output(c);
    if (command == "bands") return cmd_bands(c, out);
    if (command == "splitting") return cmd_splitting(c, out);
    if (command == "sweep") return cmd_sweep(c, out);
    if (command == "eta") return cmd_eta(c, out);
    if (command == "classify") return cmd_classify(c, out);
    return cmd_validate(c, ValidationOptions{f.inject}, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace rotphc
