#pragma once

#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "cslab/audit.hpp"
#include "cslab/config.hpp"

namespace cslab {

struct CheckStats {
  long count = 0;
  long violations = 0;
  double worst_excess = -std::numeric_limits<double>::infinity();  // max of lhs - rhs - slack
  long worst_round = -1;
};

struct Violation {
  long t = 0;
  AuditCheck check;
};

struct RegretSummary {
  std::string name;
  std::string policy;
  std::string loss;
  int d = 0;
  long T = 0;
  std::uint64_t seed = 0;
  long rounds = 0;  // rounds actually played
  double total_regret = 0.0;
  double max_round_loss = 0.0;
  std::map<std::string, double> breakdown;  // loss by policy branch (j, bucket, ...)
  std::map<std::string, CheckStats> checks;
  long violations = 0;
  double worst_margin = -std::numeric_limits<double>::infinity();
  std::vector<Violation> first_violations;  // up to 20
  std::string status = "ok";                // ok | time-limit | error: ...
  double wall_time_s = 0.0;
};

struct RunOptions {
  bool keep_rounds = false;  // return every RoundRecord
  bool keep_states = false;  // return the knowledge set after every round
};

struct RunResult {
  RegretSummary summary;
  std::vector<RoundRecord> rounds;
  std::vector<Polytope> states;  // S_1..S_{T+1} when requested
  Vec v;

  bool ok() const { return summary.status == "ok"; }
};

// Plays one configured game. Errors inside the game (estimator failure, geometry) end the
// run with a partial, flushed log and an "error: ..." status instead of throwing.
RunResult run(const ExperimentConfig& cfg, const RunOptions& ro = {});

// Exit status for a finished run: 0 when ok and (no violations or allowed).
int exit_code(const RegretSummary& s, bool allow_violations);

// Runs configs on up to CSLAB_THREADS threads and writes one CSV row per config (config
// keys first, in first-seen order), in input order.
std::vector<RegretSummary> sweep(const std::vector<ExperimentConfig>& configs, std::ostream& table);

std::string summary_json(const RegretSummary& s, bool with_wall_time);

// Worker count: CSLAB_THREADS if set and positive, else hardware concurrency (at least 1).
int thread_budget();

}  // namespace cslab
