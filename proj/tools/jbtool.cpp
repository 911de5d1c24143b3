#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "jb/error.hpp"
#include "jb/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Cantor-type sets for Bloch harmonic functions: construction and verification"};
  app.require_subcommand(1, 1);
  std::string config_path, out_dir = "out";
  bool test_mode = false;
  for (const char* name : {"construct", "measure", "transfer", "hardy", "full", "sweep"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_flag("--test-mode", test_mode, "allow M below M_min");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string sub = app.get_subcommands().front()->get_name();

  jb::RunConfig cfg;
  try {
    std::ifstream in(config_path);
    if (!in) throw jb::Error(jb::ErrorCode::InvalidConfig, "cannot open " + config_path);
    std::ostringstream text;
    text << in.rdbuf();
    cfg = jb::parse_config(text.str());
    if (test_mode) cfg.test_mode = true;
  } catch (const jb::Error& e) {
    std::cerr << config_path << ": " << e.what() << '\n';
    return 3;
  }

  try {
    if (sub == "sweep") {
      jb::write_files({{"sweep.csv", jb::run_sweep(cfg)}}, out_dir);
      std::cerr << "sweep: " << cfg.sweep.values.size() << " rows -> " << out_dir << "/sweep.csv\n";
      return 0;
    }
    const jb::RunResult r = jb::run(sub, cfg);
    jb::write_files(r.files, out_dir);
    for (const auto& c : r.checks)
      std::cerr << (c.pass ? "pass " : "FAIL ") << c.name << ": " << c.measured << " vs " << c.bound
                << (c.asserted ? "" : " (reported)") << '\n';
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
    if (r.report.contains("error")) std::cerr << "error: " << r.report["error"].get<std::string>() << '\n';
    return r.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
