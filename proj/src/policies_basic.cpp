#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/tools/toms748_solve.hpp>

#include "cslab/convex.hpp"
#include "cslab/errors.hpp"
#include "cslab/policies.hpp"
#include "policies_internal.hpp"

namespace cslab {

ConstantLadder::ConstantLadder(int d) : c(static_cast<std::size_t>(std::max(d, 0) + 1)) {
  c[0] = 1.0;
  for (int i = 1; i <= d; ++i) c[i] = c[i - 1] / (2.0 * i);
}

double BucketLadder::level(long k) const {
  if (k < 0) return std::numeric_limits<double>::infinity();
  return scale * std::exp(-std::pow(alpha, static_cast<double>(k)));
}

long BucketLadder::bucket(double x) const {
  if (!(x > 0.0)) return kInfinite;
  const double r = scale * (1.0 + 1e-9) / x;
  if (r <= 1.0) return -1;
  const double y = std::log(std::log(r)) / std::log(alpha);
  if (y < 0.0) return -1;  // (l_0, inf) is bucket -1
  if (y > static_cast<double>(kInfinite)) return kInfinite;
  return static_cast<long>(std::floor(y));
}

RootResult monotone_root(const std::function<double(double)>& f, double lo, double hi, double flo,
                         double fhi, double tol_f, double tol_x, int max_steps) {
  RootResult best{std::abs(flo) <= std::abs(fhi) ? lo : hi, std::abs(flo) <= std::abs(fhi) ? flo : fhi, 0};
  if (std::abs(best.fx) <= tol_f || !(flo * fhi < 0.0) || max_steps <= 0) return best;
  // Values inside the residual tolerance are reported as exact zeros, which ends the solve.
  auto g = [&](double x) {
    const double fx = f(x);
    ++best.steps;
    if (std::abs(fx) < std::abs(best.fx)) best.x = x, best.fx = fx;
    return std::abs(fx) <= tol_f ? 0.0 : fx;
  };
  auto narrow = [tol_x](double a, double b) { return b - a <= tol_x; };
  std::uintmax_t iters = static_cast<std::uintmax_t>(max_steps);
  try {
    boost::math::tools::toms748_solve(g, lo, hi, flo, fhi, narrow, iters);
  } catch (const boost::math::evaluation_error&) {
    // The bracket is lost only through noise in f; the best point seen is still valid.
  } catch (const std::domain_error&) {
  }
  return best;
}

namespace detail {

std::vector<Eigen::Vector2d> plane_polygon(const Polytope& S) {
  if (S.dim() != 2) throw BadDimension("planar policy needs d = 2");
  const Mat& X = S.vertex_matrix();
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(static_cast<std::size_t>(X.cols()));
  for (Eigen::Index i = 0; i < X.cols(); ++i) pts.emplace_back(X(0, i), X(1, i));
  return convex_hull_2d(std::move(pts));
}

std::vector<Eigen::Vector2d> clip_polygon(const std::vector<Eigen::Vector2d>& poly,
                                          const Eigen::Vector2d& u, double p, bool keep_upper) {
  const double s = keep_upper ? -1.0 : 1.0;  // keep s*(<u,x> - p) <= 0
  auto g = [&](const Eigen::Vector2d& x) { return s * (u.dot(x) - p); };
  std::vector<Eigen::Vector2d> out;
  const std::size_t n = poly.size();
  if (n == 1) {
    if (g(poly[0]) <= 0.0) out.push_back(poly[0]);
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % n];
    const double ga = g(a), gb = g(b);
    if (ga <= 0.0) out.push_back(a);
    if ((ga < 0.0 && gb > 0.0) || (ga > 0.0 && gb < 0.0)) out.push_back(a + (b - a) * (ga / (ga - gb)));
    if (n == 2) break;  // a segment has one edge
  }
  if (n == 2 && g(poly[1]) <= 0.0) out.push_back(poly[1]);
  return out;
}

double chord_length(const std::vector<Eigen::Vector2d>& poly, const Eigen::Vector2d& u, double p) {
  const std::size_t n = poly.size();
  if (n < 2) return 0.0;
  double tmin = std::numeric_limits<double>::infinity(), tmax = -tmin;
  const Eigen::Vector2d v(-u.y(), u.x());
  auto note = [&](const Eigen::Vector2d& x) {
    const double t = v.dot(x);
    tmin = std::min(tmin, t);
    tmax = std::max(tmax, t);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % n];
    const double ga = u.dot(a) - p, gb = u.dot(b) - p;
    if (ga == 0.0) note(a);
    if ((ga < 0.0 && gb > 0.0) || (ga > 0.0 && gb < 0.0)) note(a + (b - a) * (ga / (ga - gb)));
  }
  return tmax >= tmin ? tmax - tmin : 0.0;
}

}  // namespace detail

namespace {

using detail::chord_length;
using detail::clip_polygon;
using detail::plane_polygon;

Guess flat(const DirectionalExtent& e) {
  Guess g;
  g.p = 0.5 * (e.lo + e.hi);
  g.diag.w = 0.5 * e.width;
  g.diag.branch = "flat";
  return g;
}

class Midpoint1d final : public Policy {
 public:
  Midpoint1d(long T, bool lower_end) : T_(T), lower_end_(lower_end) {}
  std::string name() const override { return "midpoint1d"; }
  Guess guess(const Polytope& S, const Vec& u) override {
    const DirectionalExtent e = extent(S, u);
    Guess g;
    g.diag.w = 0.5 * e.width;
    if (lower_end_ && T_ > 0 && e.width <= 1.0 / static_cast<double>(T_)) {
      g.p = e.lo;
      g.diag.branch = "lower-end";
    } else {
      g.p = 0.5 * (e.lo + e.hi);
      g.diag.branch = "midpoint";
    }
    return g;
  }

 private:
  long T_;
  bool lower_end_;
};

class Kl1d final : public Policy {
 public:
  explicit Kl1d(long T) : T_(T) {}
  std::string name() const override { return "kl1d"; }
  Guess guess(const Polytope& S, const Vec& u) override {
    const DirectionalExtent e = extent(S, u);
    const double delta = e.width;
    Guess g;
    g.diag.w = 0.5 * delta;
    if (delta <= 1.0 / static_cast<double>(T_)) {
      g.p = e.lo;
      g.diag.branch = "lower-end";
      return g;
    }
    // k = floor(1 + log2 log2 (1/delta)); undefined at delta = 1, where k = 0 is used.
    const double ll = std::log2(std::log2(1.0 / delta));
    long k = std::isfinite(ll) ? static_cast<long>(std::floor(1.0 + ll + 1e-9)) : 0;
    k = std::max(k, 0L);
    // Steps below the feasibility tolerance would not move the knowledge set, so the step is
    // floored at kResolutionWidth (and kept inside the interval).
    const double step = std::exp2(-std::exp2(static_cast<double>(k)));
    g.p = e.lo + std::min(std::max(step, kResolutionWidth), 0.5 * delta);
    g.diag.k = {k};
    g.diag.branch = "k=" + std::to_string(k);
    return g;
  }

 private:
  long T_;
};

class Sym2d final : public Policy {
 public:
  explicit Sym2d(int max_bisect) : max_bisect_(max_bisect) {}
  std::string name() const override { return "sym2d"; }
  Guess guess(const Polytope& S, const Vec& uu) override {
    const DirectionalExtent e = extent(S, uu);
    if (e.width <= kFlatWidth) return flat(e);
    const Eigen::Vector2d u(uu(0), uu(1));
    const auto poly = plane_polygon(S);
    const double mid = 0.5 * (e.lo + e.hi);
    const double w = 0.5 * e.width;
    const double h = chord_length(poly, u, mid);
    Guess g;
    g.diag.w = w;
    if (w >= h) {
      g.p = mid;
      g.diag.branch = "midpoint";
      return g;
    }
    const double A = polygon_area(poly);
    auto f = [&](double p) {
      return polygon_area(clip_polygon(poly, u, p, false)) - polygon_area(clip_polygon(poly, u, p, true));
    };
    const RootResult r = monotone_root(f, e.lo, e.hi, -A, A, 1e-12 * A, 1e-15, max_bisect_);
    g.p = r.x;
    g.diag.imbalance = r.fx;
    g.diag.branch = "equal-area";
    return g;
  }

 private:
  int max_bisect_;
};

class Price2d final : public Policy {
 public:
  Price2d(long T, int max_bisect) : T_(T), max_bisect_(max_bisect) {}
  std::string name() const override { return "price2d"; }
  Guess guess(const Polytope& S, const Vec& uu) override {
    const DirectionalExtent e = extent(S, uu);
    Guess g;
    const double w = e.width;
    g.diag.w = w;
    if (w < 1.0 / static_cast<double>(T_)) {
      g.p = e.lo;
      g.diag.branch = "lower-end";
      return g;
    }
    const Eigen::Vector2d u(uu(0), uu(1));
    const auto poly = plane_polygon(S);
    const double A = polygon_area(poly);
    const double P = polygon_perimeter(poly);
    const double Ap = 2.0 * std::sqrt(M_PI * A);
    const long kA = ladder_.bucket(Ap), kP = ladder_.bucket(P);
    g.diag.phi = {P, Ap};
    g.diag.k = {kP, kA};
    g.diag.potential = P;

    double hmax = 0.0;
    for (const auto& x : poly) hmax = std::max(hmax, chord_length(poly, u, u.dot(x)));

    if (kA == kP || (kA > kP && w < hmax)) {
      const double target = std::pow(ladder_.level(kA + 1), 2) / (4.0 * M_PI);
      g.diag.branch = kA == kP ? "area" : "area-thin";
      auto f = [&](double p) { return polygon_area(clip_polygon(poly, u, p, false)) - target; };
      if (target >= A) {
        g.p = e.hi;
        g.diag.imbalance = A - target;
        return g;
      }
      const RootResult r = monotone_root(f, e.lo, e.hi, -target, A - target, 1e-12 * A, 1e-15,
                                         max_bisect_);
      g.p = r.x;
      g.diag.imbalance = r.fx;
      return g;
    }
    const double target = 0.5 * ladder_.level(kP + 1);
    g.diag.branch = "perimeter";
    auto f = [&](double p) { return P - polygon_perimeter(clip_polygon(poly, u, p, true)) - target; };
    const double fhi = f(e.hi);
    if (fhi <= 0.0) {
      g.p = e.hi;
      g.diag.imbalance = fhi;
      return g;
    }
    const RootResult r = monotone_root(f, e.lo, e.hi, -target, fhi, 1e-12 * P, 1e-15, max_bisect_);
    g.p = r.x;
    g.diag.imbalance = r.fx;
    return g;
  }

 private:
  long T_;
  int max_bisect_;
  BucketLadder ladder_ = BucketLadder::planar();
};

class WidthHalving final : public Policy {
 public:
  std::string name() const override { return "widthhalf"; }
  Guess guess(const Polytope& S, const Vec& u) override {
    const DirectionalExtent e = extent(S, u);
    Guess g;
    g.p = 0.5 * (e.lo + e.hi);
    g.diag.w = 0.5 * e.width;
    g.diag.branch = "midpoint";
    return g;
  }
};

// m-dimensional measure of a piece of an m-dimensional set (0 if the piece is thinner).
double measure_in(const Polytope& piece, int m) {
  if (piece.empty()) return 0.0;
  const PolytopeMeasures pm = polytope_measures(piece);
  return pm.dim == m ? pm.volume : 0.0;
}

class VolumeHalving final : public Policy {
 public:
  VolumeHalving(double tau, int max_bisect) : tau_(tau), max_bisect_(max_bisect) {}
  std::string name() const override { return "volhalf"; }
  Guess guess(const Polytope& S, const Vec& u) override {
    const DirectionalExtent e = extent(S, u);
    if (e.width <= kFlatWidth) return flat(e);
    const PolytopeMeasures pm = polytope_measures(S);
    const int m = pm.dim;
    auto f = [&](double p) {
      return measure_in(lower_part(S, u, p), m) - measure_in(upper_part(S, u, p), m);
    };
    const RootResult r = monotone_root(f, e.lo, e.hi, -pm.volume, pm.volume, tau_ * pm.volume,
                                       1e-15, max_bisect_);
    Guess g;
    g.p = r.x;
    g.diag.w = 0.5 * e.width;
    g.diag.imbalance = r.fx;
    g.diag.V = {pm.volume};
    g.diag.branch = "equal-volume";
    return g;
  }

 private:
  double tau_;
  int max_bisect_;
};

}  // namespace

namespace detail {

std::unique_ptr<Policy> make_basic(const std::string& name, const PolicyOptions& opt) {
  if (name == "midpoint1d") return std::make_unique<Midpoint1d>(opt.horizon, opt.lower_end_below_horizon);
  if (name == "kl1d") return std::make_unique<Kl1d>(opt.horizon);
  if (name == "sym2d") return std::make_unique<Sym2d>(opt.max_bisect);
  if (name == "price2d") return std::make_unique<Price2d>(opt.horizon, opt.max_bisect);
  if (name == "widthhalf") return std::make_unique<WidthHalving>();
  if (name == "volhalf") return std::make_unique<VolumeHalving>(opt.tau_split, opt.max_bisect);
  return nullptr;
}

}  // namespace detail

}  // namespace cslab
