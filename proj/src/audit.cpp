#include "cslab/audit.hpp"

#include <algorithm>
#include <cmath>

#include "cslab/convex.hpp"
#include "cslab/intrinsic.hpp"
#include "cslab/rng.hpp"

namespace cslab {

namespace {

constexpr double kRel = 1e-9;
// Cuts closer than the feasibility tolerance to a vertex are no-ops, so exact planar
// quantities are only resolved to a few tolerances.
constexpr double kGeom = 4.0 * tol::kFeas;

double ci(const IntrinsicVolumeEstimate& e) { return e.exact() ? 0.0 : e.half_width; }

double root(double x, int i) { return std::pow(std::max(x, 0.0), 1.0 / i); }

double factorial(int n) { return std::tgamma(n + 1.0); }

// Change of i^2 x^{1/i} when x moves by dx (upper bound).
double pot_term_slack(int i, double x, double dx) {
  return dx <= 0.0 ? 0.0 : double(i) * i * (root(x + dx, i) - root(x, i));
}

}  // namespace

double planar_potential(const Polytope& S) {
  static const double C = (1.0 - std::sqrt(0.5)) / 2.0;
  const AreaPerimeter ap = area_perimeter(S);
  return ap.perimeter + std::sqrt(ap.area) / C;
}

double potential_drop_rate(int j, double rho) {
  const ConstantLadder c(j);
  return double(j) * j * (1.0 - std::pow(rho, 1.0 / j)) * std::pow(c[j - 1] / j, 1.0 / j);
}

double bucket_cap(int d, long T, double alpha) {
  return std::log(std::log(2.0 * d * d * static_cast<double>(T))) / std::log(alpha);
}

Auditor::Auditor(std::string policy, int d, const PolicyOptions& opt, std::uint64_t seed)
    : policy_(std::move(policy)), d_(d), opt_(opt), seed_(seed) {}

std::vector<AuditCheck> Auditor::check(const Polytope& before, const Polytope& after,
                                       const RoundRecord& r, const Vec& v) const {
  std::vector<AuditCheck> out;
  double worst = -1e300;
  for (const auto& h : after.halfspaces()) worst = std::max(worst, h.slack(v));
  out.push_back({"consistency", worst, 0.0, tol::kFeas});
  out.push_back({"loss<=width", std::abs(r.truth_dot - r.guess), r.width, kRel * (1.0 + r.width)});

  if (r.diagnostics.branch == "flat" || r.diagnostics.branch == "lower-end") return out;
  // Below this width cuts within the feasibility tolerance of a vertex are no-ops, so the
  // split invariants are not resolved (the search policies stop splitting there too).
  if (r.width <= kResolutionWidth) return out;
  if (policy_ == "sym2d") sym2d(before, after, r, out);
  else if (policy_ == "price2d") price2d(after, r, out);
  else if (policy_ == "symsearch") symsearch(after, r, out);
  else if (policy_ == "pricesearch") pricesearch(after, r, out);
  else if (policy_ == "widthhalf") widthhalf(before, after, r, out);
  else if (policy_ == "volhalf") volhalf(before, after, r, out);
  return out;
}

void Auditor::sym2d(const Polytope& before, const Polytope& after, const RoundRecord& r,
                    std::vector<AuditCheck>& out) const {
  const double p0 = planar_potential(before), p1 = planar_potential(after);
  const double loss = std::abs(r.truth_dot - r.guess);
  out.push_back({"potential-drop>=loss", loss, p0 - p1, kRel * (1.0 + p0) + kGeom});
}

void Auditor::price2d(const Polytope& after, const RoundRecord& r,
                      std::vector<AuditCheck>& out) const {
  const auto& dg = r.diagnostics;
  if (r.sale || dg.branch.rfind("area", 0) != 0 || dg.k.size() < 2) return;
  const BucketLadder ladder = BucketLadder::planar();
  const double A = area_perimeter(after).area;
  out.push_back({"area-bucket-advance", 2.0 * std::sqrt(M_PI * A), ladder.level(dg.k[1] + 1),
                 kRel * ladder.level(dg.k[1] + 1)});
}

void Auditor::symsearch(const Polytope& after, const RoundRecord& r,
                        std::vector<AuditCheck>& out) const {
  const auto& dg = r.diagnostics;
  if (!dg.chosen_j) return;
  const int j = *dg.chosen_j;
  const IntrinsicEstimator est(d_, dg.estimator_budget, dg.estimator_seed);
  const ConstantLadder c(d_);
  const double w = dg.w;

  double phi0 = 0.0, phi1 = 0.0, slack_ci = 0.0, slack_mono = 0.0;
  std::vector<IntrinsicVolumeEstimate> va(static_cast<std::size_t>(d_ + 1));
  for (int i = 1; i <= d_; ++i) {
    va[i] = est(after, i);
    const double vb = dg.V[i - 1];
    phi0 += double(i) * i * root(vb, i);
    phi1 += double(i) * i * root(va[i].value, i);
    const double s = pot_term_slack(i, vb, dg.V_hw[i - 1]) + pot_term_slack(i, va[i].value, ci(va[i]));
    slack_ci += s;
    // Estimates of nested sets share random numbers and are monotone unless the method
    // changed between them (a lower-dimensional piece switches to an exact formula).
    const bool same_method = (dg.V_hw[i - 1] == 0.0) == va[i].exact();
    if (!same_method) slack_mono += s;
  }
  out.push_back({"potential-nonincreasing", phi1, phi0, slack_mono + kRel * (1.0 + phi0)});

  const double Vj = dg.V[j - 1], hwj = dg.V_hw[j - 1];
  const double imb = std::isfinite(dg.imbalance) ? std::abs(dg.imbalance) : 0.0;
  out.push_back({"split-shrink", va[j].value, 0.75 * Vj + 0.5 * imb,
                 hwj + ci(va[j]) + kRel * Vj});
  out.push_back({"volume-vs-width", c[j - 1] * std::pow(w, j) / j, Vj, hwj + kRel * Vj});
  const double rho = Vj > 0.0 ? std::min(1.0, 0.75 + 0.5 * imb / Vj) : 1.0;
  out.push_back({"potential-drop-rate", potential_drop_rate(j, rho) * w, phi0 - phi1,
                 slack_ci + kRel * (1.0 + phi0)});
}

void Auditor::pricesearch(const Polytope& after, const RoundRecord& r,
                          std::vector<AuditCheck>& out) const {
  const auto& dg = r.diagnostics;
  if (!dg.chosen_J) return;
  const int J = *dg.chosen_J;
  const BucketLadder ladder = BucketLadder::pricing(d_, opt_.beta);
  auto phi_of = [](double V, int i) { return root(factorial(i) * V, i); };

  for (int i = 1; i < d_; ++i) {
    const double hi = phi_of(dg.V[i - 1] + dg.V_hw[i - 1], i);
    const double lo = phi_of(dg.V[i] - dg.V_hw[i], i + 1);
    out.push_back({"phi-ladder", lo, hi, kRel * (1.0 + hi)});
  }
  const long kJ = dg.k[J - 1];
  const long k_loose = ladder.bucket(phi_of(dg.V[J - 1] + dg.V_hw[J - 1], J));
  out.push_back({"width<=2l_kJ", dg.w, 2.0 * ladder.level(kJ),
                 2.0 * (ladder.level(k_loose) - ladder.level(kJ)) + kRel * dg.w});
  out.push_back({"bucket-cap", static_cast<double>(kJ), bucket_cap(d_, opt_.horizon, ladder.alpha), 0.0});

  if (!r.sale) {
    const IntrinsicEstimator est(d_, dg.estimator_budget, dg.estimator_seed);
    const IntrinsicVolumeEstimate va = est(after, J);
    // Overshoot of the drop root beyond its target is added back before comparing.
    const double resid = std::isfinite(dg.imbalance) ? std::max(dg.imbalance, 0.0) : 0.0;
    const double lhs = phi_of(va.value, J);
    const double lhs_lo = phi_of(va.value - ci(va) - resid, J);
    const double rhs = ladder.level(kJ + 1);
    out.push_back({"bucket-advance", lhs, rhs, (lhs - lhs_lo) + kRel * rhs});
  }
}

void Auditor::widthhalf(const Polytope& before, const Polytope& after, const RoundRecord& r,
                        std::vector<AuditCheck>& out) const {
  const Polytope other = r.sale ? lower_part(before, r.context, r.guess)
                                : upper_part(before, r.context, r.guess);
  const Polytope& plus = r.sale ? after : other;
  const Polytope& minus = r.sale ? other : after;
  const IntrinsicEstimator est(d_, opt_.budget > 0 ? opt_.budget : default_budget(d_),
                               Rng::derive(seed_, static_cast<std::uint64_t>(r.t)));
  for (int j = 1; j <= d_; ++j) {
    const auto vp = est(plus, j), vm = est(minus, j);
    const double f = std::ldexp(1.0, -j);
    const double s = ci(vp) + ci(vm);
    out.push_back({"width-split-minus", f * vp.value, vm.value, s + kRel * vp.value});
    out.push_back({"width-split-plus", f * vm.value, vp.value, s + kRel * vm.value});
  }
}

void Auditor::volhalf(const Polytope& before, const Polytope& after, const RoundRecord& r,
                      std::vector<AuditCheck>& out) const {
  const Polytope other = r.sale ? lower_part(before, r.context, r.guess)
                                : upper_part(before, r.context, r.guess);
  const Polytope& plus = r.sale ? after : other;
  const Polytope& minus = r.sale ? other : after;
  const int m = affine_dimension(before);
  auto vol = [m](const Polytope& P) {
    const PolytopeMeasures pm = polytope_measures(P);
    return pm.dim == m ? pm.volume : 0.0;
  };
  const double Vp = vol(plus), Vm = vol(minus);
  if (!(Vp > 0.0 && Vm > 0.0) || m < 1) return;
  const double wp = extent(plus, r.context).width, wm = extent(minus, r.context).width;
  const double tol = kRel * r.width;
  // A cone over the cut slice inside one side, dilated from its apex, covers the other side.
  out.push_back({"volume-split-width-plus", (std::pow(1.0 + Vp / Vm, 1.0 / m) - 1.0) * wm, wp, tol});
  out.push_back({"volume-split-width-minus", (std::pow(1.0 + Vm / Vp, 1.0 / m) - 1.0) * wp, wm, tol});
}

}  // namespace cslab
