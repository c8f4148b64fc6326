#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cslab/game.hpp"
#include "cslab/policies.hpp"

namespace cslab {

// One asserted inequality lhs <= rhs (+ slack).
struct AuditCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool pass() const { return lhs <= rhs + slack; }
  double excess() const { return lhs - rhs - slack; }
};

// Per-round invariant checks for the policy that produced the round. Search policies are
// audited with the same common-random-number estimator the policy used (seed and budget
// from its diagnostics); the halving baselines get their own seeded estimator.
class Auditor {
 public:
  Auditor(std::string policy, int d, const PolicyOptions& opt, std::uint64_t seed = 0);

  std::vector<AuditCheck> check(const Polytope& before, const Polytope& after, const RoundRecord& r,
                                const Vec& v) const;

 private:
  void sym2d(const Polytope& before, const Polytope& after, const RoundRecord& r,
             std::vector<AuditCheck>& out) const;
  void price2d(const Polytope& after, const RoundRecord& r, std::vector<AuditCheck>& out) const;
  void symsearch(const Polytope& after, const RoundRecord& r, std::vector<AuditCheck>& out) const;
  void pricesearch(const Polytope& after, const RoundRecord& r, std::vector<AuditCheck>& out) const;
  void widthhalf(const Polytope& before, const Polytope& after, const RoundRecord& r,
                 std::vector<AuditCheck>& out) const;
  void volhalf(const Polytope& before, const Polytope& after, const RoundRecord& r,
               std::vector<AuditCheck>& out) const;

  std::string policy_;
  int d_;
  PolicyOptions opt_;
  std::uint64_t seed_;
};

// Potential of the planar symmetric policy: perimeter + sqrt(area) / C, C = (1 - sqrt(1/2)) / 2.
double planar_potential(const Polytope& S);

// kappa_j(rho) = j^2 (1 - rho^{1/j}) (c_{j-1}/j)^{1/j}: guaranteed potential drop per unit of
// half-width when the chosen V_j shrinks to at most rho times its value.
double potential_drop_rate(int j, double rho);

// Largest k_J a round with w >= 1/T can have: ln(ln(2 d^2 T)) / ln(alpha).
double bucket_cap(int d, long T, double alpha);

}  // namespace cslab
