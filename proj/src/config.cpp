#include "cslab/config.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "cslab/errors.hpp"

namespace cslab {

namespace fs = std::filesystem;

const char* to_string(LogLevel l) {
  switch (l) {
    case LogLevel::Summary: return "summary";
    case LogLevel::Rounds: return "rounds";
    case LogLevel::RoundsDiagnostics: return "rounds+diagnostics";
  }
  return "?";
}

const char* to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "jsonl"; }

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool valid_key(const std::string& k) {
  return !k.empty() && std::all_of(k.begin(), k.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
  });
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& s) {
  T x{};
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, x);
  if (ec != std::errc() || ptr != end) throw ConfigError("bad value for " + key + ": '" + s + "'");
  return x;
}

bool parse_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("bad boolean for " + key + ": '" + s + "'");
}

Vec parse_vector(const std::string& key, const std::string& s) {
  const auto parts = split(s, ',');
  Vec v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_number<double>(key, parts[i]);
  return v;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "name", "policy", "loss", "loss.beta",
      "instance.kind", "instance.d", "instance.T", "instance.seed", "instance.v", "instance.contexts",
      "policy.T", "policy.beta", "policy.budget", "policy.tau_split", "policy.max_bisect",
      "policy.max_escalations", "policy.seed",
      "log_level", "audit", "audit.seed", "output.path", "output.format", "time_limit_s",
      "allow_violations"};
  return keys;
}

}  // namespace

KeyValues parse_key_values(std::string_view text, const std::string& origin) {
  KeyValues kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    const std::string where = origin + ":" + std::to_string(n);
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    std::string key = trim(std::string_view(t).substr(0, eq));
    std::string value = trim(std::string_view(t).substr(eq + 1));
    if (!valid_key(key)) throw ConfigError(where + ": bad key '" + key + "'");
    for (const auto& [k, _] : kv)
      if (k == key) throw ConfigError(where + ": duplicate key '" + key + "'");
    kv.emplace_back(std::move(key), std::move(value));
  }
  return kv;
}

ExperimentConfig config_from(const KeyValues& kv) {
  std::map<std::string, std::string> m;
  for (const auto& [k, v] : kv) {
    if (std::find(known_keys().begin(), known_keys().end(), k) == known_keys().end())
      throw ConfigError("unknown key '" + k + "'");
    m[k] = v;
  }
  auto get = [&](const std::string& k) -> const std::string* {
    auto it = m.find(k);
    return it == m.end() ? nullptr : &it->second;
  };
  auto require = [&](const std::string& k) -> const std::string& {
    if (auto* s = get(k)) return *s;
    throw ConfigError("missing key '" + k + "'");
  };

  ExperimentConfig c;
  c.source = kv;
  if (auto* s = get("name")) c.name = *s;
  c.policy = require("policy");
  c.instance.kind = parse_instance_kind(require("instance.kind"));
  c.instance.d = parse_number<int>("instance.d", require("instance.d"));
  c.instance.T = parse_number<long>("instance.T", require("instance.T"));
  if (auto* s = get("instance.seed")) c.instance.seed = parse_number<std::uint64_t>("instance.seed", *s);
  if (auto* s = get("instance.v")) c.instance.v = parse_vector("instance.v", *s);
  if (auto* s = get("instance.contexts")) {
    const auto cols = split(*s, ';');
    c.instance.contexts.resize(c.instance.d, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const Vec u = parse_vector("instance.contexts", cols[i]);
      if (u.size() != c.instance.d) throw ConfigError("instance.contexts: vector of wrong dimension");
      c.instance.contexts.col(static_cast<Eigen::Index>(i)) = u;
    }
  }

  double beta = 1.0;
  if (auto* s = get("loss.beta")) beta = parse_number<double>("loss.beta", *s);
  c.loss = LossSpec::parse(get("loss") ? *get("loss") : "symmetric", beta);

  PolicyOptions& o = c.options;
  o.horizon = c.instance.T;
  o.seed = c.instance.seed;
  o.beta = c.loss.kind == LossSpec::Kind::OneSided ? c.loss.beta : 1.0;
  o.lower_end_below_horizon = c.loss.pricing_like();
  if (auto* s = get("policy.T")) o.horizon = parse_number<long>("policy.T", *s);
  if (auto* s = get("policy.beta")) o.beta = parse_number<double>("policy.beta", *s);
  if (auto* s = get("policy.budget")) o.budget = parse_number<int>("policy.budget", *s);
  if (auto* s = get("policy.tau_split")) o.tau_split = parse_number<double>("policy.tau_split", *s);
  if (auto* s = get("policy.max_bisect")) o.max_bisect = parse_number<int>("policy.max_bisect", *s);
  if (auto* s = get("policy.max_escalations"))
    o.max_escalations = parse_number<int>("policy.max_escalations", *s);
  if (auto* s = get("policy.seed")) o.seed = parse_number<std::uint64_t>("policy.seed", *s);

  if (auto* s = get("log_level")) {
    if (*s == "summary") c.log_level = LogLevel::Summary;
    else if (*s == "rounds") c.log_level = LogLevel::Rounds;
    else if (*s == "rounds+diagnostics") c.log_level = LogLevel::RoundsDiagnostics;
    else throw ConfigError("bad log_level '" + *s + "'");
  }
  c.audit = c.log_level == LogLevel::RoundsDiagnostics;
  if (auto* s = get("audit")) c.audit = parse_bool("audit", *s);
  c.audit_seed = c.instance.seed;
  if (auto* s = get("audit.seed")) c.audit_seed = parse_number<std::uint64_t>("audit.seed", *s);
  if (auto* s = get("output.path")) c.output_path = *s;
  if (auto* s = get("output.format")) {
    if (*s == "csv") c.format = OutputFormat::Csv;
    else if (*s == "jsonl") c.format = OutputFormat::Jsonl;
    else throw ConfigError("bad output.format '" + *s + "'");
  }
  if (auto* s = get("time_limit_s")) c.time_limit_s = parse_number<double>("time_limit_s", *s);
  if (auto* s = get("allow_violations")) c.allow_violations = parse_bool("allow_violations", *s);
  validate(c);
  return c;
}

void validate(const ExperimentConfig& c) {
  const PolicyInfo& info = policy_info(c.policy);
  if (c.instance.d < 1) throw ConfigError("instance.d must be >= 1");
  if (c.instance.T < 0) throw ConfigError("instance.T must be >= 0");
  if (info.fixed_dim != 0 && info.fixed_dim != c.instance.d)
    throw ConfigError(c.policy + " requires instance.d = " + std::to_string(info.fixed_dim));
  if (c.loss.kind != LossSpec::Kind::Symmetric && c.loss.kind != LossSpec::Kind::Pricing &&
      !(c.loss.beta > 0.0))
    throw ConfigError("loss.beta must be positive");
  if (info.family == PolicyFamily::Pricing && !c.loss.pricing_like())
    throw ConfigError(c.policy + " is a pricing policy: loss must be pricing or one-sided");
  if (info.family == PolicyFamily::Symmetric && c.loss.pricing_like())
    throw ConfigError(c.policy + " is a symmetric policy: loss must be symmetric or power");
  if (c.loss.pricing_like() && c.instance.kind == InstanceKind::UniformRandomContexts)
    throw ConfigError("pricing losses need <u,v> >= 0: use uniform-orthant-contexts");
  if (info.family == PolicyFamily::Pricing && c.options.horizon <= 0)
    throw ConfigError(c.policy + " needs policy.T > 0");
  if (!(c.options.tau_split > 0.0 && c.options.tau_split < 1.0))
    throw ConfigError("policy.tau_split must lie in (0,1)");
  if (c.options.max_bisect < 1) throw ConfigError("policy.max_bisect must be >= 1");
  if (c.options.max_escalations < 0) throw ConfigError("policy.max_escalations must be >= 0");
  if (c.options.budget < 0) throw ConfigError("policy.budget must be >= 0");
  if (!(c.time_limit_s > 0.0)) throw ConfigError("time_limit_s must be positive");
  if (c.instance.kind == InstanceKind::Fixed && (!c.instance.v || c.instance.contexts.cols() == 0))
    throw ConfigError("fixed instances need instance.v and instance.contexts");
  if (c.instance.kind == InstanceKind::SubsetInstance && c.instance.d % 8 != 0)
    throw ConfigError("subset-instance needs instance.d divisible by 8");
  if (c.instance.v && c.instance.v->size() != c.instance.d)
    throw ConfigError("instance.v must have instance.d entries");
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from(parse_key_values(ss.str(), path));
}

std::vector<KeyValues> expand(const KeyValues& kv) {
  std::vector<KeyValues> out{{}};
  for (const auto& [k, v] : kv) {
    std::vector<std::string> alts{v};
    if (v.size() >= 2 && v.front() == '{' && v.back() == '}') alts = split(v.substr(1, v.size() - 2), ',');
    std::vector<KeyValues> next;
    for (const auto& partial : out)
      for (const auto& a : alts) {
        next.push_back(partial);
        next.back().emplace_back(k, a);
      }
    out = std::move(next);
  }
  for (auto& cfg : out) {
    for (auto& [k, v] : cfg) {
      std::string r;
      for (std::size_t i = 0; i < v.size();) {
        if (v.compare(i, 2, "${") == 0) {
          const auto close = v.find('}', i);
          if (close == std::string::npos) throw ConfigError("unterminated ${ in " + k);
          const std::string ref = v.substr(i + 2, close - i - 2);
          auto it = std::find_if(cfg.begin(), cfg.end(), [&](const auto& p) { return p.first == ref; });
          if (it == cfg.end() || it->first == k) throw ConfigError("unknown reference ${" + ref + "} in " + k);
          r += it->second;
          i = close + 1;
        } else {
          r += v[i++];
        }
      }
      v = std::move(r);
    }
  }
  return out;
}

std::vector<ExperimentConfig> load_sweep(const std::string& path) {
  std::vector<std::pair<std::string, std::string>> texts;  // origin, text
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw ConfigError("cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(path))
      if (e.is_regular_file() && e.path().extension() == ".cfg") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) texts.emplace_back(f.string(), slurp(f));
  } else {
    const std::string all = slurp(path);
    std::istringstream in(all);
    std::string line, block;
    int n = 0;
    while (std::getline(in, line)) {
      if (trim(line) == "---") {
        texts.emplace_back(path + "#" + std::to_string(n++), block);
        block.clear();
      } else {
        block += line + "\n";
      }
    }
    texts.emplace_back(path + "#" + std::to_string(n), block);
  }
  std::vector<ExperimentConfig> out;
  for (const auto& [origin, text] : texts) {
    const KeyValues kv = parse_key_values(text, origin);
    if (kv.empty()) continue;
    for (const auto& e : expand(kv)) out.push_back(config_from(e));
  }
  return out;
}

}  // namespace cslab
