#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spge/experiments.hpp"
#include "spge/problems.hpp"
#include "spge/solver.hpp"

namespace spge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // I/O and other runtime failures
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// Environment variable that overrides the configured output directory.
inline constexpr const char* kOutputDirEnv = "SPGE_OUTPUT_DIR";

enum class AlgorithmChoice { Spge, Spg, Both };
enum class ReportFormat { Csv, Json };

/// Everything a `solve` run needs. Solver knobs start from the preset of the
/// problem kind and are then overridden key by key.
struct RunConfig {
  LossKind kind = LossKind::ToyAbs;
  std::optional<std::filesystem::path> instance_path;  // set when problem = file
  Index m = 60;
  Index n = 120;
  Index s = 12;
  std::vector<std::uint64_t> seeds{1};
  double lambda = 1.0;
  double v = 0.5;
  L1RegressionOptions l1;
  CensoredOptions censored;
  SolverConfig solver = toy_config();
  AlgorithmChoice algorithm = AlgorithmChoice::Spge;
  std::filesystem::path output_dir = "spge-out";
  ReportFormat format = ReportFormat::Csv;
  std::string name = "run";
};

/// Parses the flat `key = value` format. Blank lines and lines starting
/// with '#' are skipped. Unknown, duplicate or inapplicable keys and bad
/// values raise ConfigError naming the key.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);

/// The documented key names, in documentation order.
const std::vector<std::string>& run_config_keys();

/// explicit flag, then $SPGE_OUTPUT_DIR, then the configured value.
std::filesystem::path resolve_output_dir(const std::optional<std::filesystem::path>& flag,
                                         const std::filesystem::path& configured);

/// Column order of trace CSV files.
const std::vector<std::string>& trace_columns();
std::string trace_csv(const std::vector<IterationRecord>& trace);
std::string trace_json(const std::vector<IterationRecord>& trace);

int cmd_solve(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err,
              const std::optional<std::filesystem::path>& out_dir = std::nullopt);

struct ReproduceOptions {
  int seeds = 20;
  std::optional<std::filesystem::path> out_dir;
  bool timing = false;
  bool full_grid = false;
  int repeats = 20;  // toy timing repetitions
};

int cmd_reproduce(int example, const ReproduceOptions& options, std::ostream& out,
                  std::ostream& err);

int cmd_check(std::string_view suite, std::ostream& out, std::ostream& err);

struct GenOptions {
  Index m = 60;
  Index n = 120;
  Index s = 12;
  std::uint64_t seed = 1;
  bool size_given = false;  // any of m, n, s, seed set explicitly
  std::optional<double> lambda;
  std::optional<double> v;
  std::optional<double> lambda0;
  std::optional<double> noise_std;
  std::optional<double> censor_level;
};

int cmd_gen(std::string_view kind, const GenOptions& options, const std::filesystem::path& out_file,
            std::ostream& out, std::ostream& err);

}  // namespace spge::cli
