#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "leaderlab/core.hpp"
#include "leaderlab/wavelet.hpp"

namespace leaderlab::cli {

inline constexpr const char* kToolVersion = "0.1.0";

struct InputRecord {
  std::string path;    // absolute
  std::string fnv1a64;  // hex digest of the file bytes
};

struct RunManifest {
  std::string command;
  std::vector<std::string> argv;  // arguments after the program name, without -o/--output
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  std::optional<RngSpec> seed;
  std::string tool_version = kToolVersion;
  std::string start_time;
  std::string end_time;
  std::vector<InputRecord> inputs;
  std::vector<std::string> outputs;  // relative to the run directory

  nlohmann::ordered_json to_json() const;
  static RunManifest from_json(const nlohmann::ordered_json& j);
  static RunManifest load(const std::filesystem::path& path);
};

std::string fnv1a64_file(const std::filesystem::path& path);
std::string utc_timestamp();

// Outputs are written to a private staging directory and only moved into the run
// directory by commit(), so a failing command leaves no partial outputs behind.
class StagingDir {
 public:
  StagingDir();
  ~StagingDir();
  StagingDir(const StagingDir&) = delete;
  StagingDir& operator=(const StagingDir&) = delete;

  // Path for output `name` inside staging; records it in the output list.
  std::filesystem::path file(const std::string& name);
  const std::vector<std::string>& outputs() const { return outputs_; }
  // Moves every staged file into `dir` (created if needed) and writes manifest.json.
  void commit(const std::filesystem::path& dir, RunManifest manifest);

 private:
  std::filesystem::path root_;
  std::vector<std::string> outputs_;
};

struct AnalysisConfig {
  std::string wavelet = "db3";
  int levels = 0;  // 0: default_levels
  LeaderVariant variant = LeaderVariant::three_leader;
  BoundaryPolicy boundary = BoundaryPolicy::interior;
};

struct EnsembleAnalysis {
  std::vector<CoefficientPyramid> pyramids;
  std::vector<LeaderPyramid> leaders;
};

// DWT and leaders of every signal in parallel. Throws DataError when the scale grids differ.
EnsembleAnalysis analyze_ensemble(std::span<const Signal> signals, const AnalysisConfig& config);

// Octaves o_fine < o_coarse (1 = finest) to the internal range j1 = J - o_coarse, j2 = J - o_fine.
ScaleRange octave_range_to_scales(int J, int o_fine, int o_coarse);

// Entry point shared by the executable and the tests; returns the process exit code.
int run(int argc, const char* const* argv);

}  // namespace leaderlab::cli
