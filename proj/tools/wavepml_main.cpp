#include <CLI11.hpp>
#include <iostream>

#include "wavepml/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"waveguide scattering solver with complex-scaled absorbing layers"};
  std::string config_path;
  std::string out_dir;
  bool emit_fields = false;
  bool seed_check = false;
  app.add_option("config", config_path, "run configuration file")->required();
  app.add_option("--out-dir", out_dir, "override the output directory");
  app.add_flag("--emit-fields", emit_fields, "dump nodal fields (x, y, re, im)");
  app.add_flag("--seed-check", seed_check,
               "run twice and compare output digests");
  CLI11_PARSE(app, argc, argv);

  wavepml::RunConfig cfg;
  try {
    cfg = wavepml::parse_config(config_path);
  } catch (const wavepml::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const wavepml::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (emit_fields) cfg.emit_fields = true;

  return seed_check ? wavepml::run_with_seed_check(cfg) : wavepml::run(cfg);
}
