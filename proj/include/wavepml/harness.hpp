#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wavepml/assembly.hpp"
#include "wavepml/reference.hpp"

namespace wavepml {

/// Everything one finite-layer solve needs. Study-specific parameter
/// ranges are passed to the individual studies.
struct StudyConfig {
  MetricField field;
  PmlSpec pml;
  SourceSpec source;
  double mu0 = 20.0;
  int nx_per_unit = 40;
  int ny = 40;
  double x_phys = 5.0;  // comparison window [0, x_phys]
  double solve_tol = 1e-10;
  int n_modes = 12;
  long node_budget = 2'000'000;

  void validate() const;  // cross-module invariants
  ModalBasis basis() const;
};

struct FitResult {
  double rate = 0.0;       // decay rate: error ~ exp(-rate * parameter)
  double residual = 0.0;   // rms residual of the log-space fit
  int rows_used = 0;
  bool conclusive = false; // residual <= 0.1 and enough pre-floor rows
};

struct StudyReport {
  std::string study;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::optional<FitResult> fit;
  bool passed = false;
  std::vector<std::string> notes;
};

struct PmlSolution {
  Mesh mesh;
  std::vector<cplx> field;  // full nodal vector, Dirichlet zeros included
  DiscreteNorms window;
  DiscreteNorms full;
  double residual = 0.0;
  bool rhs_warning = false;
};

/// Mesh, assemble, solve at truncation radius R; norms over the window
/// and the full domain. Requires R >= r + 1 + w/2.
PmlSolution solve_finite_pml(const StudyConfig& config, double R);

/// Truncation-convergence sweep against the largest-R solve on the same
/// mesh density. Reports window errors per R, the fitted window rate, and
/// a supplementary full-overlap rate. Pre-floor rows are those above three
/// times the smallest error.
StudyReport convergence_study(const StudyConfig& config,
                              const std::vector<double>& R_list,
                              double R_reference);

/// Solution-norm stability ||v_R|| / ||F|| across R; pass when the ratio
/// varies by at most a factor two beyond the smallest R.
StudyReport stability_study(const StudyConfig& config,
                            const std::vector<double>& R_list);

/// Control experiment with real lambda = 0 on a coarse mesh: sweeping mu0
/// across a resonance of the truncated cavity makes the norm ratio spike.
/// Pass when the peak exceeds five times the median.
StudyReport resonance_control_study(const StudyConfig& config,
                                    const std::vector<double>& mu0_list,
                                    double R, int nx_per_unit, int ny);

/// Real-lambda deformation equals an axial change of variables: solve the
/// deformed problem on [0, R] and the undeformed one on [0, R + lambda s(R)],
/// pull the latter back through x + lambda s(x), and compare. The
/// discrepancy must shrink at second order across the mesh levels.
StudyReport pullback_study(const StudyConfig& config, double lambda_real,
                           double R, const std::vector<int>& nx_levels,
                           double min_order = 1.7);

/// Per-propagating-mode decay slopes inside the layer, each mode driven by
/// its own source. Pass when every fitted slope is within 25% of the
/// predicted |Im{(1 + lambda) k_j}|.
StudyReport decay_study(const StudyConfig& config, double R);

/// Window-field agreement across layer starts r and same-sign scaling
/// parameters: all pairwise relative differences must stay below bound.
/// The optional refinement pass re-runs at 1.5x density and checks the
/// worst difference did not grow.
StudyReport independence_study(const StudyConfig& config,
                               const std::vector<double>& r_list,
                               const std::vector<cplx>& lambda_list, double R,
                               bool refine = false, double bound = 1e-2);

/// Relative L2 difference of two nodal fields over [0, x_hi] x [0, Ly];
/// the meshes must share spacing on the overlap.
double window_rel_diff(const Mesh& mesh_a, const std::vector<cplx>& a,
                       const Mesh& mesh_b, const std::vector<cplx>& b,
                       double x_hi);

/// Least-squares slope fit of log(y) against x. Returns {rate, residual}
/// with rate = -slope.
FitResult fit_log_slope(const std::vector<double>& x,
                        const std::vector<double>& y);

/// Diagnostic: strong-form residual of the deformed natural condition on
/// the lateral wall y = 0. The weak form imposes it automatically; this
/// samples the co-normal flux sqrt|g| (g^{10} du/dx + g^{11} du/dy) of the
/// Q1 interpolant just inside the wall, normalized by the same flux
/// magnitude mid-channel. Expected to shrink under mesh refinement.
double lateral_conormal_residual(const Mesh& mesh,
                                 const std::vector<cplx>& nodal,
                                 const MetricField& field, const PmlSpec& spec,
                                 std::pair<double, double> x_range);

}  // namespace wavepml
