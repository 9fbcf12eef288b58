#include "wavepml/runner.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "wavepml/csv.hpp"
#include "wavepml/spectrum.hpp"

namespace fs = std::filesystem;

namespace wavepml {

namespace {

std::string join(const std::string& dir, const std::string& file) {
  return (fs::path(dir) / file).string();
}

void write_report_csv(const std::string& path, const StudyReport& rep) {
  CsvWriter csv(path);
  csv.header(rep.columns);
  for (const auto& row : rep.rows) csv.row(row);
  if (rep.fit) {
    csv.mixed_row({"fit"}, {rep.fit->rate, rep.fit->residual,
                            static_cast<double>(rep.fit->rows_used),
                            rep.fit->conclusive ? 1.0 : 0.0});
  }
}

void print_report(const StudyReport& rep) {
  std::cout << "[" << (rep.passed ? "PASS" : "FAIL") << "] study "
            << rep.study << "\n";
  for (const std::string& n : rep.notes) std::cout << "       " << n << "\n";
}

void emit_field(const std::string& path, const Mesh& mesh,
                const std::vector<cplx>& field) {
  CsvWriter csv(path);
  csv.header({"x", "y", "re", "im"});
  for (int i = 0; i <= mesh.nx; ++i)
    for (int j = 0; j <= mesh.ny; ++j) {
      cplx v = field[mesh.node(i, j)];
      csv.row({mesh.x(i), mesh.y(j), v.real(), v.imag()});
    }
}

int run_impl(const RunConfig& config, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const StudyConfig& sc = config.study;
  bool all_pass = true;

  switch (config.kind) {
    case StudyKind::modes: {
      ModalBasis basis = sc.basis();
      CsvWriter csv(join(out_dir, "modes.csv"));
      csv.header({"j", "nu", "k_re", "k_im"});
      for (int j = 0; j < basis.n_modes(); ++j) {
        cplx k = axial_wavenumber(sc.mu0, basis.eigenvalues()[j]);
        csv.row({static_cast<double>(j), basis.eigenvalues()[j], k.real(),
                 k.imag()});
      }
      std::cout << "[PASS] study modes (" << basis.n_modes() << " modes)\n";
      break;
    }

    case StudyKind::spectrum: {
      ModalBasis basis = sc.basis();
      double xi_max = config.xi_max > 0.0
                          ? config.xi_max
                          : 3.0 * std::sqrt(std::abs(sc.mu0) +
                                            basis.eigenvalues().back());
      SpectrumCurves curves = essential_curves(
          sc.pml.lambda, config.beta, basis, xi_max, config.samples);
      CsvWriter csv(join(out_dir, "spectrum.csv"));
      csv.header({"nu", "xi", "mu_re", "mu_im"});
      for (std::size_t j = 0; j < curves.thresholds.size(); ++j)
        for (int i = 0; i < curves.samples; ++i)
          csv.row({curves.thresholds[j], curves.xi[i],
                   curves.mu[j][i].real(), curves.mu[j][i].imag()});
      double dist = spectral_distance(sc.mu0, curves);
      CsvWriter dcsv(join(out_dir, "distance.csv"));
      dcsv.header({"mu0", "beta", "distance"});
      dcsv.row({sc.mu0, config.beta, dist});
      std::cout << "[PASS] study spectrum (distance " << dist << ")\n";
      break;
    }

    case StudyKind::solve: {
      PmlSolution s = solve_finite_pml(sc, config.R);
      CsvWriter csv(join(out_dir, "solve.csv"));
      csv.header({"R", "l2_window", "h1_window", "l2_full", "h1_full",
                  "residual"});
      csv.row({config.R, s.window.l2, s.window.h1_semi, s.full.l2,
               s.full.h1_semi, s.residual});
      if (s.rhs_warning)
        std::cout << "       warning: source leaks into the absorbing layer\n";

      // per-propagating-mode amplitude split in the physical region
      ModalBasis basis = sc.basis();
      CsvWriter acsv(join(out_dir, "amplitudes.csv"));
      acsv.header({"mode", "c_out_re", "c_out_im", "c_in_re", "c_in_im",
                   "reflection"});
      double x1 = sc.x_phys, x2 = sc.x_phys + 0.25;
      for (int j = 0; j < basis.n_modes(); ++j) {
        if (basis.eigenvalues()[j] >= sc.mu0) break;
        cplx k;
        if (sc.field.cross_section.flat) {
          double nu_h = discrete_transverse_eigenvalue(j, s.mesh.ny, s.mesh.Ly);
          k = discrete_axial_wavenumber(sc.mu0 - nu_h, s.mesh.hx());
        } else {
          k = axial_wavenumber(sc.mu0, basis.eigenvalues()[j]);
        }
        cplx u1 = project_onto_mode(s.mesh, s.field, basis, j, x1);
        cplx u2 = project_onto_mode(s.mesh, s.field, basis, j, x2);
        ModeAmplitudes amp = mode_amplitudes(u1, u2, x1, x2, k);
        double refl = std::abs(amp.outgoing) > 0.0
                          ? std::abs(amp.incoming) / std::abs(amp.outgoing)
                          : 0.0;
        acsv.row({static_cast<double>(j), amp.outgoing.real(),
                  amp.outgoing.imag(), amp.incoming.real(),
                  amp.incoming.imag(), refl});
      }
      if (config.emit_fields)
        emit_field(join(out_dir, "field.csv"), s.mesh, s.field);
      std::cout << "[PASS] study solve (residual " << s.residual << ")\n";
      break;
    }

    case StudyKind::converge: {
      std::vector<double> Rs = config.R_list;
      if (Rs.empty()) Rs = {10, 11, 12, 13, 14, 15, 16};
      StudyReport rep = convergence_study(sc, Rs, config.R_reference);
      write_report_csv(join(out_dir, "converge.csv"), rep);
      print_report(rep);
      all_pass = all_pass && rep.passed;
      break;
    }

    case StudyKind::stability: {
      std::vector<double> Rs = config.R_list;
      if (Rs.empty()) Rs = {10, 12, 14, 16, 18, 20, 22, 24};
      StudyReport rep = stability_study(sc, Rs);
      write_report_csv(join(out_dir, "stability.csv"), rep);
      print_report(rep);
      all_pass = all_pass && rep.passed;
      if (!config.control_mu0_list.empty()) {
        StudyReport ctrl = resonance_control_study(
            sc, config.control_mu0_list, config.control_R,
            config.control_nx_per_unit, config.control_ny);
        write_report_csv(join(out_dir, "stability_control.csv"), ctrl);
        print_report(ctrl);
        all_pass = all_pass && ctrl.passed;
      }
      break;
    }

    case StudyKind::pullback: {
      std::vector<int> levels = config.nx_levels;
      if (levels.empty()) levels = {16, 32, 64};
      StudyReport rep =
          pullback_study(sc, config.lambda_real, config.R, levels);
      write_report_csv(join(out_dir, "pullback.csv"), rep);
      print_report(rep);
      all_pass = all_pass && rep.passed;
      break;
    }

    case StudyKind::decay: {
      StudyReport rep = decay_study(sc, config.R);
      write_report_csv(join(out_dir, "decay.csv"), rep);
      print_report(rep);
      all_pass = all_pass && rep.passed;
      break;
    }

    case StudyKind::lap: {
      std::vector<double> rs = config.r_list;
      if (rs.empty()) rs = {6, 9};
      std::vector<cplx> lambdas;
      if (config.lambda_im_list.empty())
        lambdas = {cplx(0, 0.3), cplx(0, 0.4), cplx(0, 0.5)};
      else
        for (double im : config.lambda_im_list) lambdas.emplace_back(0.0, im);
      StudyReport rep =
          independence_study(sc, rs, lambdas, config.R, config.refine);
      write_report_csv(join(out_dir, "lap.csv"), rep);
      print_report(rep);
      all_pass = all_pass && rep.passed;
      break;
    }
  }
  return all_pass ? 0 : 2;
}

std::uint64_t fnv1a_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::uint64_t h = 1469598103934665603ull;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

int run(const RunConfig& config) {
  try {
    return run_impl(config, config.out_dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_with_seed_check(const RunConfig& config) {
  int rc = run(config);
  if (rc == 1) return rc;
  std::string scratch = join(config.out_dir, "seed_check");
  int rc2;
  try {
    rc2 = run_impl(config, scratch);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  if (rc2 != rc) {
    std::cerr << "seed check: exit codes differ between runs\n";
    return 1;
  }
  bool ok = true;
  for (const auto& entry : fs::directory_iterator(scratch)) {
    if (!entry.is_regular_file()) continue;
    std::string name = entry.path().filename().string();
    std::uint64_t a = fnv1a_digest(join(config.out_dir, name));
    std::uint64_t b = fnv1a_digest(entry.path().string());
    if (a != b) {
      std::cerr << "seed check: digest mismatch for " << name << "\n";
      ok = false;
    }
  }
  std::cout << (ok ? "[PASS] seed check: outputs reproduce bit-identically\n"
                   : "[FAIL] seed check\n");
  if (!ok) return 2;
  return rc;
}

}  // namespace wavepml
