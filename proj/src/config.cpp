#include "wavepml/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace wavepml {

StudyKind study_kind_from_string(const std::string& s) {
  static const std::map<std::string, StudyKind> kinds = {
      {"modes", StudyKind::modes},         {"spectrum", StudyKind::spectrum},
      {"solve", StudyKind::solve},         {"converge", StudyKind::converge},
      {"stability", StudyKind::stability}, {"pullback", StudyKind::pullback},
      {"decay", StudyKind::decay},         {"lap", StudyKind::lap}};
  auto it = kinds.find(s);
  if (it == kinds.end()) throw InvalidArgument("unknown study kind '" + s + "'");
  return it->second;
}

std::string to_string(StudyKind k) {
  switch (k) {
    case StudyKind::modes: return "modes";
    case StudyKind::spectrum: return "spectrum";
    case StudyKind::solve: return "solve";
    case StudyKind::converge: return "converge";
    case StudyKind::stability: return "stability";
    case StudyKind::pullback: return "pullback";
    case StudyKind::decay: return "decay";
    case StudyKind::lap: return "lap";
  }
  return "?";
}

namespace {

struct RawConfig {
  // section -> key -> value, insertion order preserved for diagnostics
  std::map<std::string, std::map<std::string, std::string>> data;
};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

RawConfig parse_raw(const std::string& text, std::vector<std::string>& errs) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        errs.push_back("line " + std::to_string(lineno) + ": malformed section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      raw.data[section];
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      errs.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (section.empty()) {
      errs.push_back("line " + std::to_string(lineno) + ": key '" + key +
                     "' outside any section");
      continue;
    }
    if (raw.data[section].count(key))
      errs.push_back("duplicate key " + section + "." + key);
    raw.data[section][key] = val;
  }
  return raw;
}

class Reader {
 public:
  Reader(RawConfig raw, std::vector<std::string>& errs)
      : raw_(std::move(raw)), errs_(errs) {}

  bool has(const std::string& sec, const std::string& key) {
    seen_[sec].insert(key);
    auto s = raw_.data.find(sec);
    return s != raw_.data.end() && s->second.count(key);
  }

  std::string get_string(const std::string& sec, const std::string& key,
                         const std::string& def) {
    if (!has(sec, key)) return def;
    return raw_.data[sec][key];
  }

  double get_double(const std::string& sec, const std::string& key, double def) {
    if (!has(sec, key)) return def;
    return parse_double(sec, key, raw_.data[sec][key]);
  }

  int get_int(const std::string& sec, const std::string& key, int def) {
    if (!has(sec, key)) return def;
    try {
      std::size_t pos;
      int v = std::stoi(raw_.data[sec][key], &pos);
      if (pos != raw_.data[sec][key].size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      errs_.push_back(sec + "." + key + ": not an integer");
      return def;
    }
  }

  bool get_bool(const std::string& sec, const std::string& key, bool def) {
    if (!has(sec, key)) return def;
    std::string v = raw_.data[sec][key];
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    errs_.push_back(sec + "." + key + ": expected a boolean");
    return def;
  }

  std::vector<double> get_double_list(const std::string& sec,
                                      const std::string& key) {
    std::vector<double> out;
    if (!has(sec, key)) return out;
    std::istringstream ss(raw_.data[sec][key]);
    std::string tok;
    while (std::getline(ss, tok, ','))
      out.push_back(parse_double(sec, key, trim(tok)));
    return out;
  }

  std::vector<int> get_int_list(const std::string& sec, const std::string& key) {
    std::vector<int> out;
    for (double v : get_double_list(sec, key)) {
      if (v != std::floor(v)) errs_.push_back(sec + "." + key + ": expected integers");
      out.push_back(static_cast<int>(v));
    }
    return out;
  }

  /// every present key must have been consumed
  void reject_unknown() {
    for (const auto& [sec, kv] : raw_.data) {
      auto it = seen_.find(sec);
      if (it == seen_.end()) {
        errs_.push_back("unknown section [" + sec + "]");
        continue;
      }
      for (const auto& [key, val] : kv)
        if (!it->second.count(key))
          errs_.push_back("unknown key " + sec + "." + key);
    }
  }

 private:
  double parse_double(const std::string& sec, const std::string& key,
                      const std::string& v) {
    try {
      std::size_t pos;
      double d = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("");
      return d;
    } catch (...) {
      errs_.push_back(sec + "." + key + ": not a number");
      return 0.0;
    }
  }

  RawConfig raw_;
  std::vector<std::string>& errs_;
  std::map<std::string, std::set<std::string>> seen_;
};

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  std::vector<std::string> errs;
  RawConfig raw = parse_raw(text, errs);
  Reader rd(std::move(raw), errs);
  RunConfig cfg;

  // [geometry]
  std::string preset = rd.get_string("geometry", "preset", "straight");
  double Ly = rd.get_double("geometry", "L_y", 1.0);
  double a = rd.get_double("geometry", "a", 1.0);
  double b_exp = rd.get_double("geometry", "b_exp", 0.5);
  double g_exp = rd.get_double("geometry", "g_exp", -1.0);
  std::string weight = rd.get_string("geometry", "weight", "flat");

  // [pml]
  double r = rd.get_double("pml", "r", 6.0);
  double w = rd.get_double("pml", "w", 2.0);
  double lre = rd.get_double("pml", "lambda_re", 0.0);
  double lim = rd.get_double("pml", "lambda_im", 0.4);
  double alpha = rd.get_double("pml", "alpha", 0.45);
  std::string profile = rd.get_string("pml", "profile", "cubic");

  // [problem]
  cfg.study.mu0 = rd.get_double("problem", "mu0", 20.0);
  SourceSpec src;
  src.mode_index = rd.get_int("problem", "source_mode", 1);
  src.x0 = rd.get_double("problem", "source_x0", 3.0);
  src.gamma = rd.get_double("problem", "source_gamma", 4.0);
  src.amplitude = cplx(rd.get_double("problem", "source_amplitude_re", 1.0),
                       rd.get_double("problem", "source_amplitude_im", 0.0));
  cfg.study.source = src;
  cfg.study.x_phys = rd.get_double("problem", "x_phys", 5.0);
  cfg.study.n_modes = rd.get_int("problem", "n_modes", 12);
  cfg.study.solve_tol = rd.get_double("problem", "solve_tol", 1e-10);

  // [mesh]
  cfg.study.nx_per_unit = rd.get_int("mesh", "nx_per_unit", 40);
  cfg.study.ny = rd.get_int("mesh", "ny", 40);
  cfg.study.node_budget =
      static_cast<long>(rd.get_double("mesh", "node_budget", 2'000'000));

  // [study]
  std::string kind = rd.get_string("study", "kind", "solve");
  cfg.R = rd.get_double("study", "R", 14.0);
  cfg.R_list = rd.get_double_list("study", "R_list");
  cfg.R_reference = rd.get_double("study", "R_reference", 24.0);
  cfg.r_list = rd.get_double_list("study", "r_list");
  cfg.lambda_im_list = rd.get_double_list("study", "lambda_im_list");
  cfg.lambda_real = rd.get_double("study", "lambda_real", 0.35);
  cfg.nx_levels = rd.get_int_list("study", "nx_levels");
  cfg.refine = rd.get_bool("study", "refine", false);
  cfg.beta = rd.get_double("study", "beta", 0.0);
  cfg.xi_max = rd.get_double("study", "xi_max", 0.0);
  cfg.samples = rd.get_int("study", "samples", 4001);
  cfg.control_mu0_list = rd.get_double_list("study", "control_mu0_list");
  cfg.control_R = rd.get_double("study", "control_R", 6.0);
  cfg.control_nx_per_unit = rd.get_int("study", "control_nx_per_unit", 8);
  cfg.control_ny = rd.get_int("study", "control_ny", 8);

  // [output]
  cfg.out_dir = rd.get_string("output", "directory", "out");
  cfg.emit_fields = rd.get_bool("output", "emit_fields", false);

  rd.reject_unknown();

  // assemble the typed objects, collecting violations instead of stopping
  CrossSection cs;
  try {
    if (weight == "flat") {
      cs = CrossSection::make_flat(Ly);
    } else if (weight.rfind("affine:", 0) == 0) {
      std::istringstream ss(weight.substr(7));
      double c0, c1;
      char comma;
      if (!(ss >> c0 >> comma >> c1) || comma != ',')
        throw InvalidArgument("geometry.weight: expected affine:c0,c1");
      cs = CrossSection::make_weighted(
          Ly, [c0, c1](double y) { return c0 + c1 * y; });
    } else {
      throw InvalidArgument("geometry.weight: expected 'flat' or 'affine:c0,c1'");
    }
  } catch (const Error& e) {
    errs.push_back(std::string("geometry: ") + e.what());
    cs = CrossSection::make_flat(1.0);
  }

  try {
    Preset p = preset_from_string(preset);
    switch (p) {
      case Preset::straight:
        cfg.study.field = MetricField::straight(cs, alpha);
        break;
      case Preset::bent:
        cfg.study.field = MetricField::bent(cs, a, b_exp, g_exp, alpha);
        break;
      case Preset::stretched:
        cfg.study.field = MetricField::stretched(cs, alpha);
        break;
    }
  } catch (const Error& e) {
    errs.push_back(std::string("geometry.preset: ") + e.what());
  }

  try {
    ProfileShape shape = ProfileShape::cubic;
    if (profile == "quintic")
      shape = ProfileShape::quintic;
    else if (profile != "cubic")
      throw InvalidArgument("expected 'cubic' or 'quintic'");
    cfg.study.pml = PmlSpec(r, w, cplx(lre, lim), alpha, shape);
  } catch (const Error& e) {
    errs.push_back(std::string("pml.lambda: ") + e.what());
  }

  try {
    cfg.kind = study_kind_from_string(kind);
  } catch (const Error& e) {
    errs.push_back(std::string("study.kind: ") + e.what());
  }

  if (errs.empty()) {
    try {
      cfg.study.validate();
    } catch (const Error& e) {
      errs.push_back(std::string("config: ") + e.what());
    }
  }

  if (!errs.empty()) {
    std::string summary = "config rejected with " +
                          std::to_string(errs.size()) + " violation(s)";
    for (const std::string& e : errs) summary += "\n  - " + e;
    throw ConfigError(summary, errs);
  }
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'", {});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace wavepml
