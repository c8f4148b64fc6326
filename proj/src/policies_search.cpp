#include <algorithm>
#include <cmath>
#include <limits>

#include "cslab/errors.hpp"
#include "cslab/policies.hpp"
#include "cslab/rng.hpp"
#include "policies_internal.hpp"

namespace cslab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
  double lo = 0.0, mid = 0.0, hi = 0.0;
  bool straddles(double w) const { return lo < w && w < hi; }
};

double factorial(int n) { return std::tgamma(n + 1.0); }

// L_i = (V_i(K_i) / c_i)^{1/i} with the interval induced by the estimate's CI.
Interval slice_level(const IntrinsicVolumeEstimate& v, double c, int i) {
  auto f = [&](double x) { return std::pow(std::max(x, 0.0) / c, 1.0 / i); };
  return {f(v.lower()), f(v.value), f(v.upper())};
}

// Shared per-round machinery of the two search policies.
class SearchBase : public Policy {
 public:
  SearchBase(int d, const PolicyOptions& opt)
      : d_(d), opt_(opt), c_(d), budget0_(opt.budget > 0 ? opt.budget : default_budget(d)) {
    if (d > kMaxVertexDim) throw DimensionTooLarge(d, kMaxVertexDim);
  }

 protected:
  struct Round {
    const Polytope* S = nullptr;
    const Vec* u = nullptr;
    DirectionalExtent e;
    double w = 0.0;
    std::unique_ptr<IntrinsicEstimator> est;
    std::vector<IntrinsicVolumeEstimate> V;  // index i = 1..d
    std::vector<double> p;                   // p_i
    std::vector<double> resid;               // root residuals
    std::vector<Interval> L;                 // L_0..L_d
  };

  std::uint64_t next_seed() { return Rng::derive(opt_.seed, static_cast<std::uint64_t>(round_++)); }

  void fill_slices(Round& r) const {
    r.L.assign(static_cast<std::size_t>(d_ + 1), Interval{0.0, 0.0, 0.0});
    r.L[0] = {kInf, kInf, kInf};
    for (int i = 1; i < d_; ++i) {
      const Polytope K = cross_section(*r.S, *r.u, r.p[i]);
      r.L[i] = slice_level((*r.est)(K, i), c_[i], i);
    }
    // K_d lies in a hyperplane: V_d(K_d) = 0.
  }

  // True when every level the j-selection compared against w is certain.
  static bool certified(const Round& r, std::initializer_list<int> idx) {
    for (int i : idx)
      if (i >= 1 && i < static_cast<int>(r.L.size()) && r.L[i].straddles(r.w)) return false;
    return true;
  }

  double root_tol_x(const Round& r) const { return 1e-13 * std::max(r.e.width, 1e-300); }

  void fill_diag(const Round& r, PolicyDiagnostics& dg) const {
    dg.w = r.w;
    dg.L.resize(static_cast<std::size_t>(d_ + 1));
    for (int i = 0; i <= d_; ++i) dg.L[i] = r.L.empty() ? kNaN : r.L[i].mid;
    dg.V.resize(static_cast<std::size_t>(d_));
    dg.V_hw.resize(static_cast<std::size_t>(d_));
    dg.p_i.resize(static_cast<std::size_t>(d_));
    for (int i = 1; i <= d_; ++i) {
      dg.V[i - 1] = r.V[i].value;
      dg.V_hw[i - 1] = r.V[i].half_width;
      dg.p_i[i - 1] = r.p[i];
    }
    dg.estimator_seed = r.est->seed();
    dg.estimator_budget = r.est->budget();
  }

  int d_;
  PolicyOptions opt_;
  ConstantLadder c_;
  int budget0_;
  long round_ = 0;
};

Guess flat_guess(const DirectionalExtent& e) {
  Guess g;
  g.p = 0.5 * (e.lo + e.hi);
  g.diag.w = 0.5 * e.width;
  g.diag.branch = "flat";
  return g;
}

class SymmetricSearch final : public SearchBase {
 public:
  using SearchBase::SearchBase;
  std::string name() const override { return "symsearch"; }

  Guess guess(const Polytope& S, const Vec& u) override {
    const std::uint64_t seed = next_seed();
    Round r;
    r.S = &S;
    r.u = &u;
    r.e = extent(S, u);
    r.w = 0.5 * r.e.width;
    if (r.e.width <= kResolutionWidth) return flat_guess(r.e);

    int budget = budget0_;
    for (int attempt = 0;; ++attempt, budget *= 2) {
      r.est = std::make_unique<IntrinsicEstimator>(d_, budget, seed);
      split_all(r);
      fill_slices(r);
      int j = 1;
      while (j < d_ && !(r.L[j - 1].mid >= r.w && r.w >= r.L[j].mid)) ++j;
      if (certified(r, {j - 1, j})) return finish(r, j);
      if (attempt >= opt_.max_escalations)
        throw EstimatorFailure("symsearch: L_" + std::to_string(j) + " not separable from w at budget " +
                               std::to_string(budget));
    }
  }

 private:
  void split_all(Round& r) const {
    const Polytope& S = *r.S;
    const Vec& u = *r.u;
    r.V.assign(static_cast<std::size_t>(d_ + 1), {});
    r.p.assign(static_cast<std::size_t>(d_ + 1), 0.0);
    r.resid.assign(static_cast<std::size_t>(d_ + 1), 0.0);
    for (int i = 1; i <= d_; ++i) {
      r.V[i] = (*r.est)(S, i);
      const double Vi = r.V[i].value;
      auto f = [&](double p) {
        return (*r.est)(lower_part(S, u, p), i).value - (*r.est)(upper_part(S, u, p), i).value;
      };
      const double flo = f(r.e.lo), fhi = f(r.e.hi);
      if (!(flo < 0.0 && fhi > 0.0)) {
        r.p[i] = 0.5 * (r.e.lo + r.e.hi);
        r.resid[i] = f(r.p[i]);
        continue;
      }
      const RootResult rr = monotone_root(f, r.e.lo, r.e.hi, flo, fhi, opt_.tau_split * Vi,
                                          root_tol_x(r), opt_.max_bisect);
      r.p[i] = rr.x;
      r.resid[i] = rr.fx;
    }
  }

  Guess finish(const Round& r, int j) const {
    Guess g;
    g.p = r.p[j];
    auto& dg = g.diag;
    fill_diag(r, dg);
    dg.chosen_j = j;
    dg.imbalance = r.resid[j];
    double phi = 0.0;
    for (int i = 1; i <= d_; ++i) phi += double(i) * i * std::pow(std::max(r.V[i].value, 0.0), 1.0 / i);
    dg.potential = phi;
    dg.branch = "j=" + std::to_string(j);
    return g;
  }
};

class PricingSearch final : public SearchBase {
 public:
  PricingSearch(int d, const PolicyOptions& opt)
      : SearchBase(d, opt), ladder_(BucketLadder::pricing(d, opt.beta)) {
    if (opt.horizon <= 0) throw ConfigError("pricesearch needs a horizon T");
  }
  std::string name() const override { return "pricesearch"; }

  Guess guess(const Polytope& S, const Vec& u) override {
    const std::uint64_t seed = next_seed();
    Round r;
    r.S = &S;
    r.u = &u;
    r.e = extent(S, u);
    r.w = 0.5 * r.e.width;
    if (r.w < 1.0 / static_cast<double>(opt_.horizon) || r.e.width <= kResolutionWidth) {
      Guess g;
      g.p = r.e.lo;
      g.diag.w = r.w;
      g.diag.branch = "lower-end";
      return g;
    }

    int budget = budget0_;
    for (int attempt = 0;; ++attempt, budget *= 2) {
      r.est = std::make_unique<IntrinsicEstimator>(d_, budget, seed);
      std::vector<long> k(static_cast<std::size_t>(d_ + 1), 0);
      std::vector<double> phi(static_cast<std::size_t>(d_ + 1), 0.0);
      drops(r, k, phi);
      fill_slices(r);
      // M(i) = max{ j : k_j = k_i }.
      std::vector<int> M(static_cast<std::size_t>(d_ + 1), 0);
      for (int i = 1; i <= d_; ++i) {
        M[i] = i;
        for (int j = i + 1; j <= d_; ++j)
          if (k[j] == k[i]) M[i] = j;
      }
      int j = 1;
      while (j <= d_ && !(r.L[j - 1].mid >= r.w && r.w >= r.L[M[j]].mid)) ++j;
      std::string branch;
      if (j > d_) {
        // Only reachable when estimated buckets are not monotone in i.
        j = 1;
        while (j < d_ && !(r.w >= r.L[M[j]].mid)) ++j;
        branch = "fallback:";
      }
      if (certified(r, {j - 1, M[j]})) return finish(r, j, M[j], k, phi, branch);
      if (attempt >= opt_.max_escalations)
        throw EstimatorFailure("pricesearch: level ordering not certified at budget " +
                               std::to_string(budget));
    }
  }

  const BucketLadder& ladder() const { return ladder_; }

 private:
  void drops(Round& r, std::vector<long>& k, std::vector<double>& phi) const {
    const Polytope& S = *r.S;
    const Vec& u = *r.u;
    r.V.assign(static_cast<std::size_t>(d_ + 1), {});
    r.p.assign(static_cast<std::size_t>(d_ + 1), 0.0);
    r.resid.assign(static_cast<std::size_t>(d_ + 1), 0.0);
    for (int i = 1; i <= d_; ++i) {
      r.V[i] = (*r.est)(S, i);
      const double Vi = r.V[i].value;
      phi[i] = std::pow(factorial(i) * std::max(Vi, 0.0), 1.0 / i);
      k[i] = ladder_.bucket(phi[i]);
      const double target = std::pow(ladder_.level(k[i] + 1), i) / (2.0 * factorial(i));
      auto g = [&](double p) { return Vi - (*r.est)(upper_part(S, u, p), i).value - target; };
      const double ghi = g(r.e.hi);
      if (!(ghi > 0.0) || !(target > 0.0)) {
        r.p[i] = r.e.hi;
        r.resid[i] = ghi;
        continue;
      }
      const RootResult rr = monotone_root(g, r.e.lo, r.e.hi, -target, ghi, 0.01 * target,
                                          root_tol_x(r), opt_.max_bisect);
      r.p[i] = rr.x;
      r.resid[i] = rr.fx;
    }
  }

  Guess finish(const Round& r, int j, int J, const std::vector<long>& k,
               const std::vector<double>& phi, const std::string& prefix) const {
    Guess g;
    g.p = r.p[J];
    auto& dg = g.diag;
    fill_diag(r, dg);
    dg.chosen_j = j;
    dg.chosen_J = J;
    dg.imbalance = r.resid[J];
    dg.phi.assign(phi.begin() + 1, phi.end());
    dg.k.assign(k.begin() + 1, k.end());
    dg.branch = prefix + "J=" + std::to_string(J) + ",k=" + std::to_string(k[J]);
    return g;
  }

  BucketLadder ladder_;
};

}  // namespace

namespace detail {

std::unique_ptr<Policy> make_search(const std::string& name, int d, const PolicyOptions& opt) {
  if (name == "symsearch") return std::make_unique<SymmetricSearch>(d, opt);
  if (name == "pricesearch") return std::make_unique<PricingSearch>(d, opt);
  return nullptr;
}

}  // namespace detail
}  // namespace cslab
