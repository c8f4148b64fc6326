#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cslab/game.hpp"
#include "cslab/intrinsic.hpp"

namespace cslab {

// c_0 = 1, c_i = c_{i-1} / (2i).
struct ConstantLadder {
  std::vector<double> c;
  explicit ConstantLadder(int d);
  double operator[](int i) const { return c.at(static_cast<std::size_t>(i)); }
};

// l_k = scale * exp(-alpha^k); bkt(x) = k iff x in (l_{k+1}, l_k].
struct BucketLadder {
  double scale = 1.0;
  double alpha = 1.5;

  static BucketLadder pricing(int d, double beta = 1.0) { return {double(d) * d, 1.0 + beta / d}; }
  static BucketLadder planar() { return {1.0, 1.5}; }

  double level(long k) const;
  // Boundaries are widened by a relative 1e-9 so that values the policies produce by
  // aiming exactly at a level land in the intended bucket despite rounding.
  long bucket(double x) const;
  static constexpr long kInfinite = 1L << 40;  // bucket of 0
};

struct PolicyOptions {
  long horizon = 0;            // T, required by pricing policies
  double beta = 1.0;           // ladder exponent for one-sided losses
  int budget = 0;              // subspaces per estimate (0: default for d)
  double tau_split = 0.02;
  int max_bisect = 60;
  int max_escalations = 3;
  std::uint64_t seed = 0;
  bool lower_end_below_horizon = false;  // midpoint1d: price at lo once width <= 1/T
};

enum class PolicyFamily { Symmetric, Pricing, Any };

struct PolicyInfo {
  std::string name;
  PolicyFamily family;
  int fixed_dim;  // 0 when any dimension is accepted
  bool needs_vertices;
};

const std::vector<PolicyInfo>& policy_catalog();
const PolicyInfo& policy_info(const std::string& name);
std::unique_ptr<Policy> make_policy(const std::string& name, int d, const PolicyOptions& opt);

// Root of a monotone function on [lo, hi] given f(lo), f(hi) of opposite sign (or zero),
// by TOMS 748 (Alefeld, Potra and Shi). Stops when |f| <= tol_f, the bracket is narrower
// than tol_x, or after max_steps iterations; returns the best point seen and the number of
// evaluations.
struct RootResult {
  double x = 0.0;
  double fx = 0.0;
  int steps = 0;
};
RootResult monotone_root(const std::function<double(double)>& f, double lo, double hi, double flo,
                         double fhi, double tol_f, double tol_x, int max_steps);

// Guess for a numerically flat direction: width <= this => midpoint, nothing to cut.
inline constexpr double kFlatWidth = 2.0 * tol::kFeas;

// Below this width the absolute feasibility tolerance is a sizeable fraction of the set, so
// intrinsic volumes of the pieces are no longer resolved. The search policies stop splitting
// there (symmetric: midpoint, pricing: lower end); the extra loss is at most T times this.
inline constexpr double kResolutionWidth = 1000.0 * tol::kFeas;

}  // namespace cslab
