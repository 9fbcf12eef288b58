#pragma once

#include <string>
#include <vector>

#include "wavepml/harness.hpp"

namespace wavepml {

enum class StudyKind {
  modes,
  spectrum,
  solve,
  converge,
  stability,
  pullback,
  decay,
  lap,
};

StudyKind study_kind_from_string(const std::string& s);
std::string to_string(StudyKind k);

/// Parsed and validated run description. Defaults are chosen so a minimal
/// straight-preset file runs out of the box; see the README for the table.
struct RunConfig {
  StudyConfig study;
  StudyKind kind = StudyKind::solve;

  // study-specific ranges
  double R = 14.0;
  std::vector<double> R_list;
  double R_reference = 24.0;
  std::vector<double> r_list;
  std::vector<double> lambda_im_list;
  double lambda_real = 0.35;
  std::vector<int> nx_levels;
  bool refine = false;
  double beta = 0.0;
  double xi_max = 0.0;  // 0 = choose 3 sqrt(|mu0| + nu_max)
  int samples = 4001;
  std::vector<double> control_mu0_list;
  double control_R = 6.0;
  int control_nx_per_unit = 8;
  int control_ny = 8;

  std::string out_dir = "out";
  bool emit_fields = false;
};

/// Parse the sectioned key = value file at `path`. Unknown sections or
/// keys are rejected; every violation is collected before throwing
/// ConfigError, so one pass reports them all.
RunConfig parse_config(const std::string& path);

/// Same, from an already-loaded text buffer (used by tests).
RunConfig parse_config_text(const std::string& text);

}  // namespace wavepml
