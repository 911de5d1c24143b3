#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jb/report.hpp"

namespace jb {

struct SamplingConfig {
  int growth_samples = 10000;
  int content_samples = 4096;
  int john_samples = 1024;
  int image_samples = 4096;
  int x_cells = 1024;
  int max_rel_depth = 16;
  double pitch = 0x1p-11;
  double ratio_floor = 0.01;
};

struct HardyRunConfig {
  std::string domain = "disk";  // "disk" or "image" (image of S(E_n))
  double radius = 1.0;
  HardyConfig cfg;
  int samples_per_side = 16;
  int integral_cells = 512;
  std::vector<double> collar_eps = {0.25, 0.125};  // relative to the domain size
};

struct SweepConfig {
  std::string param;  // alpha, M, beta, p, depth
  std::vector<double> values;
};

struct RunConfig {
  Json source = {{"kind", "zero"}};
  double base_left = -0.5;
  double base_length = 1.0;
  double alpha = 0.5;
  std::string M = "auto";  // "auto", "cascade" or a number
  int n_max = 3;
  bool test_mode = false;
  std::uint64_t seed = 1;
  SamplingConfig sampling;
  std::optional<Complex> z;  // end-to-end point, conformal sources
  HardyRunConfig hardy;
  SweepConfig sweep;
};

/// Parses and validates a JSON config. Throws InvalidConfig naming the
/// offending field (or the line and column of a syntax error).
RunConfig parse_config(const std::string& text);
Json config_to_json(const RunConfig& cfg);

HarmonicSource make_source(const RunConfig& cfg);
/// Resolves "auto" and "cascade"; throws InvalidConfig below M_min without
/// test mode.
double resolve_M(const RunConfig& cfg, const HarmonicSource& src);

struct Check {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
  bool asserted = true;  // false: reported only
};

void to_json(Json& j, const Check& c);

struct RunResult {
  Json report;
  std::vector<Check> checks;
  std::vector<std::string> warnings;
  std::map<std::string, std::string> files;  // name -> contents, report.json included
  int exit_code = 0;  // 0 pass, 1 asserted failure or error, 2 warnings only
};

/// subcommand: construct, measure, transfer, hardy, full. Library errors are
/// caught and reported with exit code 1.
RunResult run(const std::string& subcommand, const RunConfig& cfg);

/// One row per sweep value; failures are recorded in the row.
std::string run_sweep(const RunConfig& cfg);

void write_files(const std::map<std::string, std::string>& files, const std::filesystem::path& dir);

}  // namespace jb
