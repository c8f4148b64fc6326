#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cslab/geometry.hpp"

namespace cslab {

struct LossSpec {
  enum class Kind { Symmetric, Pricing, Power, OneSided };
  Kind kind = Kind::Symmetric;
  double beta = 1.0;

  static LossSpec symmetric() { return {Kind::Symmetric, 1.0}; }
  static LossSpec pricing() { return {Kind::Pricing, 1.0}; }
  static LossSpec power(double beta) { return {Kind::Power, beta}; }
  static LossSpec one_sided(double beta) { return {Kind::OneSided, beta}; }
  // "symmetric", "pricing", "power", "one-sided" (beta supplied separately).
  static LossSpec parse(const std::string& name, double beta = 1.0);

  bool pricing_like() const { return kind == Kind::Pricing || kind == Kind::OneSided; }
  std::string name() const;
};

double evaluate_loss(const LossSpec& spec, double theta, double p);

struct Feedback {
  bool sale = false;
};
// A tie p == theta counts as a sale.
inline Feedback feedback(double theta, double p) { return {p <= theta}; }

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct PolicyDiagnostics {
  std::optional<int> chosen_j;
  std::optional<int> chosen_J;
  double w = kNaN;
  std::vector<double> L;    // L_0..L_d, NaN where not evaluated
  std::vector<double> phi;  // phi_1..phi_d
  std::vector<long> k;      // k_1..k_d
  std::vector<double> V;    // V_1..V_d of the current knowledge set
  std::vector<double> V_hw; // their half-widths
  std::vector<double> p_i;  // candidate cuts p_1..p_d
  double potential = kNaN;
  double imbalance = kNaN;  // residual split imbalance at the returned cut
  std::string branch;
  std::uint64_t estimator_seed = 0;
  int estimator_budget = 0;
};

struct Guess {
  double p = 0.0;
  PolicyDiagnostics diag;
};

// Policies see only the knowledge set and the context.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  virtual Guess guess(const Polytope& state, const Vec& u) = 0;
};

struct RoundRecord {
  long t = 0;
  Vec context;
  double guess = 0.0;
  double truth_dot = 0.0;
  bool sale = false;
  double loss = 0.0;
  double width = 0.0;
  PolicyDiagnostics diagnostics;
};

struct RoundOutcome {
  Polytope state;
  RoundRecord record;
};

RoundOutcome play_round(const Polytope& state, const Vec& v, const Vec& u, Policy& policy,
                        const LossSpec& spec, long t = 0);

}  // namespace cslab
