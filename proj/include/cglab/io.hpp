#pragma once

// Run configuration, CSV/JSON emission and command dispatch for the cglab tool.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cglab/avg_state.hpp"
#include "cglab/mc.hpp"

namespace cglab {

inline constexpr const char* kVersion = "0.1.0";

/// Ordered key/value pairs written ahead of the data.
using Metadata = std::vector<std::pair<std::string, std::string>>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// "%.17g", which round-trips every double.
std::string format_double(double v);

/// Metadata as "# key=value" lines, then the header, then one line per row.
void emit_csv(std::ostream& os, const Metadata& meta, const Table& table);
std::string emit_csv(const Metadata& meta, const Table& table);
std::pair<Metadata, Table> parse_csv(const std::string& text);

/// {"metadata": {...}, "result": ...}; object keys are sorted.
std::string emit_json(const Metadata& meta, const nlohmann::json& result);

nlohmann::json to_json(const FitResult& r);
nlohmann::json to_json(const Table& t);

/// Flat "key = value" file; '#' starts a comment line.
std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text);
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

enum class Command { sample, pdf, volume, avg_state, fit, sweep_eps, covariance_check };
Command parse_command(const std::string& s);
std::string to_string(Command c);

struct RunConfig {
  Command command = Command::pdf;
  int n_qubits = 2;
  std::vector<double> prob_vector;  // resolved weights, empty when not needed
  std::optional<double> h;
  double eps = 0.04;
  std::vector<double> eps_grid{0.001, 0.04, 0.3};
  std::uint64_t n_samples = 10000;
  RngSeed seed;
  Ensemble ensemble = Ensemble::full;
  std::string output_path;  // empty: standard output
  std::string format;       // "csv" or "json"
  int grid = 200;
  double p_test = 0.26;
  std::optional<double> r_ts;
  double v_eps = 1e-6;
  FitModel model = FitModel::p2;
  BinPlacement placement = BinPlacement::fixed_grid;
  /// Normalized echo of every setting, used for metadata and the summary line.
  std::map<std::string, std::string> echo;
};

/// Keys accepted in config files and as --key flags.
const std::vector<std::string>& config_keys();

/// Builds and validates a config. Later pairs override earlier ones, so
/// pass file pairs first and flag pairs after. `env_seed` is used when no
/// seed key is present. Throws ValidationError naming the violated range.
RunConfig config_from_pairs(Command command, const std::vector<std::pair<std::string, std::string>>& pairs,
                            const std::optional<std::string>& env_seed = std::nullopt);

/// Executes the command, writing to output_path or `out`. Returns the
/// one-line summary (command line that regenerates the output).
std::string run(const RunConfig& config, std::ostream& out);

}  // namespace cglab
