#include "cslab/harness.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <memory>
#include <thread>

#include "cslab/errors.hpp"

namespace cslab {

namespace {

using json = nlohmann::json;

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

json opt_int(const std::optional<int>& x) { return x ? json(*x) : json(nullptr); }

json diag_json(const PolicyDiagnostics& d) {
  json j;
  j["chosen_j"] = opt_int(d.chosen_j);
  j["chosen_J"] = opt_int(d.chosen_J);
  j["w"] = d.w;
  j["L"] = d.L;
  j["phi"] = d.phi;
  j["k"] = d.k;
  j["V"] = d.V;
  j["V_hw"] = d.V_hw;
  j["p_i"] = d.p_i;
  j["potential"] = d.potential;
  j["imbalance"] = d.imbalance;
  j["branch"] = d.branch;
  j["estimator_seed"] = d.estimator_seed;
  j["estimator_budget"] = d.estimator_budget;
  return j;
}

json check_json(const AuditCheck& c) {
  return {{"check", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"slack", c.slack}};
}

class RoundWriter {
 public:
  virtual ~RoundWriter() = default;
  virtual void header(const ExperimentConfig& cfg, const Instance& inst) = 0;
  virtual void round(const RoundRecord& r, double cum, const std::vector<AuditCheck>& failed) = 0;
  virtual void footer(const RegretSummary& s) = 0;
};

class JsonlWriter final : public RoundWriter {
 public:
  JsonlWriter(std::ostream& os, bool rounds, bool diag) : os_(os), rounds_(rounds), diag_(diag) {}
  void header(const ExperimentConfig& cfg, const Instance& inst) override {
    json h;
    h["type"] = "header";
    h["schema_version"] = 1;
    json c = json::object();
    for (const auto& [k, v] : cfg.source) c[k] = v;
    h["config"] = c;
    h["v"] = std::vector<double>(inst.v.data(), inst.v.data() + inst.v.size());
    os_ << h.dump() << '\n';
  }
  void round(const RoundRecord& r, double cum, const std::vector<AuditCheck>& failed) override {
    if (!rounds_) return;
    json j;
    j["type"] = "round";
    j["t"] = r.t;
    j["context"] = std::vector<double>(r.context.data(), r.context.data() + r.context.size());
    j["guess"] = r.guess;
    j["truth_dot"] = r.truth_dot;
    j["sale"] = r.sale;
    j["loss"] = r.loss;
    j["width"] = r.width;
    j["cum_loss"] = cum;
    if (diag_) {
      j["policy_diagnostics"] = diag_json(r.diagnostics);
      json v = json::array();
      for (const auto& c : failed) v.push_back(check_json(c));
      j["violations"] = v;
    }
    os_ << j.dump() << '\n';
  }
  void footer(const RegretSummary& s) override {
    os_ << summary_json(s, false) << '\n';
    os_.flush();
  }

 private:
  std::ostream& os_;
  bool rounds_, diag_;
};

class CsvWriter final : public RoundWriter {
 public:
  CsvWriter(std::ostream& os, int d, bool rounds, bool diag) : os_(os), d_(d), rounds_(rounds), diag_(diag) {}
  void header(const ExperimentConfig&, const Instance&) override {
    if (!rounds_) return;
    os_ << "t,sale,guess,truth_dot,loss,width,cum_loss";
    if (diag_) {
      os_ << ",chosen_j,chosen_J,w";
      for (int i = 0; i <= d_; ++i) os_ << ",L_" << i;
      for (const char* p : {"phi", "k", "V", "V_hw", "p"})
        for (int i = 1; i <= d_; ++i) os_ << ',' << p << '_' << i;
      os_ << ",potential,imbalance,branch,estimator_seed,estimator_budget,violations";
    }
    os_ << "\r\n";
  }
  void round(const RoundRecord& r, double cum, const std::vector<AuditCheck>& failed) override {
    if (!rounds_) return;
    os_ << r.t << ',' << (r.sale ? 1 : 0) << ',' << num(r.guess) << ',' << num(r.truth_dot) << ','
        << num(r.loss) << ',' << num(r.width) << ',' << num(cum);
    if (diag_) {
      const auto& d = r.diagnostics;
      os_ << ',' << (d.chosen_j ? std::to_string(*d.chosen_j) : "") << ','
          << (d.chosen_J ? std::to_string(*d.chosen_J) : "") << ',' << num(d.w);
      auto cols = [&](auto const& vec, int n) {
        for (int i = 0; i < n; ++i) {
          os_ << ',';
          if (static_cast<std::size_t>(i) < vec.size()) {
            if constexpr (std::is_same_v<std::decay_t<decltype(vec[0])>, long>) os_ << vec[i];
            else os_ << num(vec[i]);
          }
        }
      };
      cols(d.L, d_ + 1);
      cols(d.phi, d_);
      cols(d.k, d_);
      cols(d.V, d_);
      cols(d.V_hw, d_);
      cols(d.p_i, d_);
      std::string names;
      for (const auto& c : failed) names += (names.empty() ? "" : ";") + c.name;
      os_ << ',' << num(d.potential) << ',' << num(d.imbalance) << ',' << csv_field(d.branch) << ','
          << d.estimator_seed << ',' << d.estimator_budget << ',' << csv_field(names);
    }
    os_ << "\r\n";
  }
  void footer(const RegretSummary&) override { os_.flush(); }

 private:
  std::ostream& os_;
  int d_;
  bool rounds_, diag_;
};

void note(RegretSummary& s, long t, const AuditCheck& c) {
  CheckStats& st = s.checks[c.name];
  ++st.count;
  const double ex = c.excess();
  if (ex > st.worst_excess) {
    st.worst_excess = ex;
    st.worst_round = t;
  }
  s.worst_margin = std::max(s.worst_margin, ex);
  if (!c.pass()) {
    ++st.violations;
    ++s.violations;
    if (s.first_violations.size() < 20) s.first_violations.push_back({t, c});
  }
}

}  // namespace

std::string summary_json(const RegretSummary& s, bool with_wall_time) {
  json j;
  j["type"] = "summary";
  j["schema_version"] = 1;
  j["name"] = s.name;
  j["policy"] = s.policy;
  j["loss"] = s.loss;
  j["d"] = s.d;
  j["T"] = s.T;
  j["seed"] = s.seed;
  j["rounds"] = s.rounds;
  j["total_regret"] = s.total_regret;
  j["max_round_loss"] = s.max_round_loss;
  j["breakdown"] = s.breakdown;
  json checks = json::object();
  for (const auto& [name, st] : s.checks)
    checks[name] = {{"count", st.count},
                    {"violations", st.violations},
                    {"worst_excess", st.worst_excess},
                    {"worst_round", st.worst_round}};
  j["checks"] = checks;
  j["invariant_violations"] = s.violations;
  j["worst_margin"] = s.worst_margin;
  json first = json::array();
  for (const auto& v : s.first_violations) {
    json c = check_json(v.check);
    c["t"] = v.t;
    first.push_back(c);
  }
  j["first_violations"] = first;
  j["status"] = s.status;
  if (with_wall_time) j["wall_time_s"] = s.wall_time_s;
  return j.dump();
}

RunResult run(const ExperimentConfig& cfg, const RunOptions& ro) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  RunResult res;
  RegretSummary& s = res.summary;
  s.name = cfg.name;
  s.policy = cfg.policy;
  s.loss = cfg.loss.name();
  s.d = cfg.instance.d;
  s.T = cfg.instance.T;
  s.seed = cfg.instance.seed;

  const Instance inst = generate(cfg.instance);
  res.v = inst.v;
  const int d = cfg.instance.d;

  std::unique_ptr<std::ofstream> file;
  std::unique_ptr<RoundWriter> writer;
  if (!cfg.output_path.empty()) {
    file = std::make_unique<std::ofstream>(cfg.output_path, std::ios::binary);
    if (!*file) throw ConfigError("cannot write " + cfg.output_path);
    const bool rounds = cfg.log_level != LogLevel::Summary;
    const bool diag = cfg.log_level == LogLevel::RoundsDiagnostics;
    if (cfg.format == OutputFormat::Jsonl) writer = std::make_unique<JsonlWriter>(*file, rounds, diag);
    else writer = std::make_unique<CsvWriter>(*file, d, rounds, diag);
    writer->header(cfg, inst);
  }

  Polytope S = Polytope::unit_cube(d);
  if (ro.keep_states) res.states.push_back(S);
  std::vector<AuditCheck> failed;
  try {
    std::unique_ptr<Policy> policy = make_policy(cfg.policy, d, cfg.options);
    const Auditor auditor(cfg.policy, d, cfg.options, cfg.audit_seed);
    for (long t = 1; t <= cfg.instance.T; ++t) {
      if (elapsed() > cfg.time_limit_s) {
        s.status = "time-limit";
        break;
      }
      const Vec u = inst.contexts.col(t - 1);
      RoundOutcome out = play_round(S, inst.v, u, *policy, cfg.loss, t);
      failed.clear();
      if (cfg.audit) {
        for (const auto& c : auditor.check(S, out.state, out.record, inst.v)) {
          note(s, t, c);
          if (!c.pass()) failed.push_back(c);
        }
      }
      const RoundRecord& r = out.record;
      s.total_regret += r.loss;
      s.max_round_loss = std::max(s.max_round_loss, r.loss);
      s.breakdown[r.diagnostics.branch.empty() ? "-" : r.diagnostics.branch] += r.loss;
      s.rounds = t;
      if (writer) writer->round(r, s.total_regret, failed);
      S = std::move(out.state);
      if (ro.keep_states) res.states.push_back(S);
      if (ro.keep_rounds) res.rounds.push_back(std::move(out.record));
    }
  } catch (const std::exception& e) {
    s.status = std::string("error: ") + e.what();
  }
  s.wall_time_s = elapsed();
  if (writer) {
    writer->footer(s);
    std::ofstream side(cfg.output_path + ".summary.json", std::ios::binary);
    side << summary_json(s, true) << '\n';
  }
  return res;
}

int exit_code(const RegretSummary& s, bool allow_violations) {
  if (s.status != "ok") return 2;
  if (s.violations > 0 && !allow_violations) return 1;
  return 0;
}

int thread_budget() {
  if (const char* e = std::getenv("CSLAB_THREADS")) {
    const int n = std::atoi(e);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<RegretSummary> sweep(const std::vector<ExperimentConfig>& configs, std::ostream& table) {
  std::vector<RegretSummary> out(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < configs.size();) {
      try {
        out[i] = run(configs[i]).summary;
      } catch (const std::exception& e) {
        out[i].name = configs[i].name;
        out[i].status = std::string("error: ") + e.what();
      }
    }
  };
  const int n = std::min<int>(thread_budget(), static_cast<int>(configs.size()));
  std::vector<std::thread> pool;
  for (int k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<std::string> keys;
  for (const auto& c : configs)
    for (const auto& [k, _] : c.source)
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  if (configs.empty()) return out;
  for (const auto& k : keys) table << csv_field(k) << ',';
  table << "status,rounds,total_regret,max_round_loss,invariant_violations,worst_margin\r\n";
  for (std::size_t i = 0; i < configs.size(); ++i) {
    for (const auto& k : keys) {
      auto it = std::find_if(configs[i].source.begin(), configs[i].source.end(),
                             [&](const auto& p) { return p.first == k; });
      table << (it == configs[i].source.end() ? "" : csv_field(it->second)) << ',';
    }
    const RegretSummary& s = out[i];
    table << csv_field(s.status) << ',' << s.rounds << ',' << num(s.total_regret) << ','
          << num(s.max_round_loss) << ',' << s.violations << ',' << num(s.worst_margin) << "\r\n";
  }
  return out;
}

}  // namespace cslab
