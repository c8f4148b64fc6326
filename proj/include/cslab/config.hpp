#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cslab/adversaries.hpp"
#include "cslab/game.hpp"
#include "cslab/policies.hpp"

namespace cslab {

enum class LogLevel { Summary, Rounds, RoundsDiagnostics };
enum class OutputFormat { Csv, Jsonl };

// Ordered key = value pairs as written in a config file.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

struct ExperimentConfig {
  std::string name;
  std::string policy;
  InstanceSpec instance;
  LossSpec loss;
  PolicyOptions options;
  LogLevel log_level = LogLevel::Summary;
  bool audit = false;  // implied by rounds+diagnostics
  std::string output_path;
  OutputFormat format = OutputFormat::Jsonl;
  double time_limit_s = 600.0;
  bool allow_violations = false;
  std::uint64_t audit_seed = 0;
  KeyValues source;  // the pairs this config was built from
};

// Grammar, one entry per line:
//   line    := blank | comment | entry
//   comment := '#' anything
//   entry   := key ws* '=' ws* value
// Keys are [A-Za-z0-9_.]+; values run to the end of the line with surrounding blanks
// trimmed. A key may appear once.
KeyValues parse_key_values(std::string_view text, const std::string& origin = "<config>");

// Builds and validates a config (unknown keys, ranges, policy/loss compatibility).
ExperimentConfig config_from(const KeyValues& kv);
ExperimentConfig load_config(const std::string& path);
void validate(const ExperimentConfig& cfg);

// Expands every value of the form {a,b,...} into the Cartesian product (first key varies
// slowest), then substitutes ${key} references inside values.
std::vector<KeyValues> expand(const KeyValues& kv);

// A directory of *.cfg files (sorted by name) or one file with blocks separated by lines
// consisting of "---". Each block is expanded.
std::vector<ExperimentConfig> load_sweep(const std::string& path);

const char* to_string(LogLevel l);
const char* to_string(OutputFormat f);

}  // namespace cslab
