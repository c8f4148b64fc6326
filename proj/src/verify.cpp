#include "cslab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "cslab/convex.hpp"
#include "cslab/errors.hpp"
#include "cslab/intrinsic.hpp"

namespace cslab {

Polytope random_clipped_cube(int d, int cuts, Rng& rng) {
  Polytope P = Polytope::unit_cube(d);
  const Vec centre = Vec::Constant(d, 0.5);
  for (int c = 0; c < cuts; ++c) {
    Vec n(d);
    for (int i = 0; i < d; ++i) n(i) = rng.normal();
    n.normalize();
    // The plane passes 0.1..0.45 beyond the centre, so the centre stays deep inside.
    P = clip(P, {n, n.dot(centre) + rng.uniform(0.1, 0.45)});
  }
  return P;
}

long VerifyReport::failures() const {
  return std::count_if(cases.begin(), cases.end(), [](const VerifyCase& c) { return !c.pass; });
}

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> s = {"steiner", "isoperimetric", "cone",
                                             "cylinder", "valuation", "splits"};
  return s;
}

namespace {

constexpr double kRel = 1e-9;

double ci(const IntrinsicVolumeEstimate& e) { return e.exact() ? 0.0 : e.half_width; }

VerifyCase from_check(const std::string& suite, const std::string& id, const CheckResult& r) {
  return {suite, id, r.pass, r.margin, r.slack, r.detail};
}

void steiner(std::uint64_t seed, int count, VerifyReport& rep) {
  {
    // Unit square, eps = 1: area + perimeter + pi.
    Rng rng(Rng::derive(seed, 0));
    const Polytope sq = Polytope::unit_cube(2);
    const IntrinsicEstimator est(2, 0, seed);
    const SteinerEstimate pred = steiner_prediction(est.all(sq), 1.0);
    const SteinerEstimate mc = steiner_volume(sq, 1.0, rng);
    const double se = std::hypot(pred.std_error, mc.std_error);
    std::ostringstream os;
    os << "predicted " << pred.value << " (exact " << 5.0 + M_PI << ") mc " << mc.value;
    rep.cases.push_back({"steiner", "unit-square", std::abs(pred.value - mc.value) <= 3.0 * se &&
                                                      std::abs(pred.value - (5.0 + M_PI)) < 1e-12,
                         std::abs(pred.value - mc.value), 3.0 * se, os.str()});
  }
  const int n = std::max(1, count / 5);
  for (int k = 0; k < n; ++k) {
    const int d = 2 + k % 2;
    Rng rng(Rng::derive(seed, 100 + k));
    const Polytope P = random_clipped_cube(d, 1 + static_cast<int>(rng.below(4)), rng);
    const IntrinsicEstimator est(d, 0, rng.next_u64());
    const auto V = est.all(P);
    for (double eps : {0.1, 0.5, 1.0}) {
      const SteinerEstimate pred = steiner_prediction(V, eps);
      const SteinerEstimate mc = steiner_volume(P, eps, rng, 100000);
      const double se = std::hypot(pred.std_error, mc.std_error);
      std::ostringstream os;
      os << "d=" << d << " eps=" << eps << " predicted " << pred.value << " mc " << mc.value
         << " se " << se;
      rep.cases.push_back({"steiner", "p" + std::to_string(k) + "-d" + std::to_string(d) + "-eps" + std::to_string(eps).substr(0, 3),
                           std::abs(pred.value - mc.value) <= 3.0 * se,
                           std::abs(pred.value - mc.value), 3.0 * se, os.str()});
    }
  }
}

void isoperimetric(std::uint64_t seed, int count, VerifyReport& rep) {
  for (int k = 0; k < count; ++k) {
    const int d = 2 + k % 3;
    Rng rng(Rng::derive(seed, 1000 + k));
    const Polytope P = random_clipped_cube(d, 1 + static_cast<int>(rng.below(5)), rng);
    const IntrinsicEstimator est(d, 0, rng.next_u64());
    for (int i = 1; i < d; ++i)
      rep.cases.push_back(from_check("isoperimetric", "p" + std::to_string(k) + "-i" + std::to_string(i),
                                     check_isoperimetric(P, i, est)));
  }
}

void cone(std::uint64_t seed, int count, VerifyReport& rep) {
  {
    const IntrinsicEstimator est(3, 0, seed);
    const CheckResult r = check_cone_bound(Polytope::unit_cube(2), 1.0, 2, est);
    // Equality case: V_3 of the pyramid is 1/3.
    const bool eq = std::abs(r.margin) <= 1e-12;
    rep.cases.push_back({"cone", "square-pyramid", r.pass && eq, r.margin, r.slack, r.detail});
  }
  for (int k = 0; k < count; ++k) {
    const int b = 1 + k % 3;
    Rng rng(Rng::derive(seed, 2000 + k));
    const Polytope base = random_clipped_cube(b, static_cast<int>(rng.below(4)), rng);
    const double h = rng.uniform(0.2, 2.0);
    const IntrinsicEstimator est(b + 1, 0, rng.next_u64());
    for (int j = 0; j <= b; ++j)
      rep.cases.push_back(from_check("cone", "p" + std::to_string(k) + "-j" + std::to_string(j),
                                     check_cone_bound(base, h, j, est)));
  }
}

void cylinder(std::uint64_t seed, int count, VerifyReport& rep) {
  for (int k = 0; k < count; ++k) {
    const int b = 1 + k % 2;
    Rng rng(Rng::derive(seed, 3000 + k));
    const Polytope base = random_clipped_cube(b, static_cast<int>(rng.below(4)), rng);
    const double h = rng.uniform(0.2, 2.0);
    const IntrinsicEstimator est(b + 1, 0, rng.next_u64());
    for (int j = 0; j <= b; ++j)
      rep.cases.push_back(from_check("cylinder", "p" + std::to_string(k) + "-j" + std::to_string(j),
                                     check_cylinder_identity(base, h, j, est)));
  }
}

void valuation(std::uint64_t seed, int count, VerifyReport& rep) {
  for (int k = 0; k < count; ++k) {
    const int d = 2 + k % 2;
    Rng rng(Rng::derive(seed, 4000 + k));
    const Polytope S = random_clipped_cube(d, static_cast<int>(rng.below(4)), rng);
    Vec u(d);
    for (int i = 0; i < d; ++i) u(i) = rng.normal();
    u.normalize();
    const DirectionalExtent e = extent(S, u);
    const double p = e.lo + rng.uniform(0.2, 0.8) * e.width;
    const Polytope plus = upper_part(S, u, p), minus = lower_part(S, u, p);
    const Polytope K = cross_section(S, u, p);
    const IntrinsicEstimator est(d, 0, rng.next_u64());
    for (int j = 1; j <= d; ++j) {
      const auto a = est(plus, j), b = est(minus, j), c = est(S, j), kk = est(K, j);
      const double diff = a.value + b.value - c.value - kk.value;
      const double slack = std::sqrt(ci(a) * ci(a) + ci(b) * ci(b) + ci(c) * ci(c) + ci(kk) * ci(kk)) +
                           kRel * (1.0 + c.value);
      std::ostringstream os;
      os << "d=" << d << " j=" << j << " V+ + V- - V - V(K) = " << diff;
      rep.cases.push_back({"valuation", "p" + std::to_string(k) + "-j" + std::to_string(j),
                           std::abs(diff) <= slack, std::abs(diff), slack, os.str()});
    }
  }
}

void splits(std::uint64_t seed, int count, VerifyReport& rep) {
  for (int k = 0; k < count; ++k) {
    const int d = 2 + k % 2;
    Rng rng(Rng::derive(seed, 5000 + k));
    const Polytope S = random_clipped_cube(d, static_cast<int>(rng.below(4)), rng);
    Vec u(d);
    for (int i = 0; i < d; ++i) u(i) = rng.normal();
    u.normalize();
    const DirectionalExtent e = extent(S, u);
    const IntrinsicEstimator est(d, 0, rng.next_u64());

    // Width halving: V_j(S-) >= 2^-j V_j(S+) and the reverse.
    const double mid = 0.5 * (e.lo + e.hi);
    const Polytope plus = upper_part(S, u, mid), minus = lower_part(S, u, mid);
    for (int j = 1; j <= d; ++j) {
      const auto a = est(plus, j), b = est(minus, j);
      const double f = std::ldexp(1.0, -j);
      const double lo = std::min(b.value - f * a.value, a.value - f * b.value);
      const double slack = ci(a) + ci(b) + kRel * (a.value + b.value);
      std::ostringstream os;
      os << "width split j=" << j << " V+=" << a.value << " V-=" << b.value;
      rep.cases.push_back({"splits", "p" + std::to_string(k) + "-width-j" + std::to_string(j),
                           lo + slack >= 0.0, lo, slack, os.str()});
    }

    // Volume halving: w+ >= (2^{1/d} - 1) w- and the reverse, at the equal-volume cut.
    auto vol = [d](const Polytope& P) {
      const PolytopeMeasures pm = polytope_measures(P);
      return pm.dim == d ? pm.volume : 0.0;
    };
    double a = e.lo, b = e.hi;
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
      const double m = 0.5 * (a + b);
      (vol(lower_part(S, u, m)) < vol(upper_part(S, u, m)) ? a : b) = m;
    }
    const double p = 0.5 * (a + b);
    const double wp = extent(upper_part(S, u, p), u).width, wm = extent(lower_part(S, u, p), u).width;
    const double alpha = std::pow(2.0, 1.0 / d) - 1.0;
    const double lo = std::min(wp - alpha * wm, wm - alpha * wp);
    const double slack = 1e-9 * e.width;
    std::ostringstream os;
    os << "volume split w+=" << wp << " w-=" << wm << " alpha=" << alpha;
    rep.cases.push_back({"splits", "p" + std::to_string(k) + "-volume", lo + slack >= 0.0, lo, slack, os.str()});
  }
}

}  // namespace

VerifyReport verify(const std::string& suite, std::uint64_t seed, int count) {
  VerifyReport rep;
  auto one = [&](const std::string& s) {
    if (s == "steiner") steiner(seed, count, rep);
    else if (s == "isoperimetric") isoperimetric(seed, count, rep);
    else if (s == "cone") cone(seed, count, rep);
    else if (s == "cylinder") cylinder(seed, count, rep);
    else if (s == "valuation") valuation(seed, count, rep);
    else if (s == "splits") splits(seed, count, rep);
    else throw ConfigError("unknown verify suite '" + s + "'");
  };
  if (suite == "all")
    for (const auto& s : verify_suites()) one(s);
  else
    one(suite);
  return rep;
}

void print_report(const VerifyReport& r, std::ostream& os, bool only_failures) {
  for (const auto& c : r.cases) {
    if (only_failures && c.pass) continue;
    os << (c.pass ? "PASS " : "FAIL ") << c.suite << ' ' << c.id << " margin=" << std::setprecision(6)
       << c.margin << " slack=" << c.slack << "  " << c.detail << '\n';
  }
  os << r.cases.size() - static_cast<std::size_t>(r.failures()) << '/' << r.cases.size() << " passed\n";
}

}  // namespace cslab
