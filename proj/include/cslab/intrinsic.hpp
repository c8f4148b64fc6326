#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "cslab/convex.hpp"
#include "cslab/geometry.hpp"
#include "cslab/rng.hpp"

namespace cslab {

enum class VolumeMethod {
  Exact1d,
  Exact2d,
  ExactBox,
  ExactVolume,    // V_m of an m-dimensional set
  ExactBoundary,  // V_{m-1}: half the boundary measure
  ExactRidge,     // V_{m-2}: (m-2)-faces weighted by exterior angles
  MonteCarlo,
};
const char* to_string(VolumeMethod m);

struct IntrinsicVolumeEstimate {
  int j = 0;
  double value = 0.0;
  double half_width = 0.0;  // 95% half-interval, 0 for exact methods
  VolumeMethod method = VolumeMethod::ExactVolume;
  long samples = 0;

  bool exact() const { return method != VolumeMethod::MonteCarlo; }
  double lower() const { return std::max(0.0, value - half_width); }
  double upper() const { return value + half_width; }
};

// Volume of the unit m-ball.
double kappa(int m);
double binomial(int n, int k);
// V_j(K) = kubota_coefficient(n, j) * E[Vol_j(projection of K onto a Haar j-subspace of R^n)].
double kubota_coefficient(int n, int j);
// e_0..e_n of the given numbers.
std::vector<double> elementary_symmetric(const std::vector<double>& x);

// Orthonormal d x j basis of a Haar-random j-subspace.
Mat haar_basis(int d, int j, Rng& rng);

struct ProjectionSample {
  Mat subspace_basis;  // d x j
  double projected_volume = 0.0;
};

// A fixed sample of Haar j-subspaces, reused across queries for common random numbers.
class SubspaceSet {
 public:
  SubspaceSet(int d, int j, int count, Rng rng);
  int ambient() const { return d_; }
  int j() const { return j_; }
  int count() const { return count_; }
  Mat basis(int s) const;
  // Projected j-volume of P for every subspace in the set.
  Vec projected_volumes(const Polytope& P) const;
  std::vector<ProjectionSample> samples(const Polytope& P) const;

 private:
  int d_, j_, count_;
  Mat stacked_;  // (count*j) x d, rows s*j .. s*j+j-1 span subspace s
};

int default_budget(int d);

// Intrinsic volumes with a lazily drawn, fixed subspace sample per j: all queries made
// through one estimator share their random numbers, so estimates are exactly monotone
// under inclusion.
class IntrinsicEstimator {
 public:
  IntrinsicEstimator(int d, int budget, std::uint64_t seed);

  int dim() const { return d_; }
  int budget() const { return budget_; }
  std::uint64_t seed() const { return seed_; }

  IntrinsicVolumeEstimate operator()(const Polytope& P, int j) const;
  IntrinsicVolumeEstimate monte_carlo(const Polytope& P, int j) const;
  std::vector<IntrinsicVolumeEstimate> all(const Polytope& P) const;  // j = 0..d

  const SubspaceSet& subspaces(int j) const;

 private:
  int d_, budget_;
  std::uint64_t seed_;
  mutable std::mutex mu_;
  mutable std::vector<std::unique_ptr<SubspaceSet>> sets_;
};

IntrinsicVolumeEstimate intrinsic_volume(const Polytope& P, int j, int budget, Rng& rng);
std::vector<IntrinsicVolumeEstimate> intrinsic_volumes(const Polytope& P, int budget, Rng& rng);

// Side lengths if P is an axis-aligned box (degenerate sides allowed), else empty.
std::vector<double> box_sides(const Polytope& P);

struct SteinerEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long samples = 0;
};
// Monte-Carlo Vol(P + eps B) by rejection sampling in the inflated bounding box.
SteinerEstimate steiner_volume(const Polytope& P, double eps, Rng& rng, long samples = 200000);
// sum_j kappa_{d-j} V_j eps^{d-j} with a standard error propagated from the estimates.
SteinerEstimate steiner_prediction(const std::vector<IntrinsicVolumeEstimate>& V, double eps);

struct CheckResult {
  bool pass = false;
  double margin = 0.0;  // signed lhs - rhs of the tested relation (0 for identities: |diff|)
  double slack = 0.0;   // confidence allowance used
  std::string detail;
};

CheckResult check_isoperimetric(const Polytope& P, int i, const IntrinsicEstimator& est);
CheckResult check_isoperimetric(const Polytope& P, int i, int budget, Rng& rng);
CheckResult check_cone_bound(const Polytope& base, double apex_height, int j,
                             const IntrinsicEstimator& est);
CheckResult check_cone_bound(const Polytope& base, double apex_height, int j, Rng& rng,
                             int budget = 0);
CheckResult check_cylinder_identity(const Polytope& base, double h, int j,
                                    const IntrinsicEstimator& est);
CheckResult check_cylinder_identity(const Polytope& base, double h, int j, Rng& rng,
                                    int budget = 0);

}  // namespace cslab
