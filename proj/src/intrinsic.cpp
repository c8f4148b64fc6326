#include "cslab/intrinsic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "cslab/errors.hpp"

namespace cslab {

const char* to_string(VolumeMethod m) {
  switch (m) {
    case VolumeMethod::Exact1d: return "exact-1d";
    case VolumeMethod::Exact2d: return "exact-2d";
    case VolumeMethod::ExactBox: return "exact-box";
    case VolumeMethod::ExactVolume: return "exact-volume";
    case VolumeMethod::ExactBoundary: return "exact-boundary";
    case VolumeMethod::ExactRidge: return "exact-ridge";
    case VolumeMethod::MonteCarlo: return "monte-carlo";
  }
  return "?";
}

double kappa(int m) {
  if (m == 0) return 1.0;
  const double h = 0.5 * m;
  return std::exp(h * std::log(std::numbers::pi) - std::lgamma(h + 1.0));
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double kubota_coefficient(int n, int j) {
  return binomial(n, j) * kappa(n) / (kappa(j) * kappa(n - j));
}

std::vector<double> elementary_symmetric(const std::vector<double>& x) {
  std::vector<double> e(x.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t k = i + 1; k >= 1; --k) e[k] += e[k - 1] * x[i];
  return e;
}

Mat haar_basis(int d, int j, Rng& rng) {
  Mat Q(d, j);
  while (true) {
    for (int c = 0; c < j; ++c)
      for (int r = 0; r < d; ++r) Q(r, c) = rng.normal();
    // Gram-Schmidt, twice for stability; reject badly conditioned draws.
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    for (int c = 0; c < j; ++c) {
      const double n0 = Q.col(c).norm();
      for (int pass = 0; pass < 2; ++pass)
        for (int p = 0; p < c; ++p) Q.col(c) -= Q.col(p).dot(Q.col(c)) * Q.col(p);
      const double nrm = Q.col(c).norm();
      rmin = std::min(rmin, nrm / std::max(n0, 1e-300));
      rmax = std::max(rmax, 1.0);
      if (nrm > 0) Q.col(c) /= nrm;
    }
    if (rmin / rmax >= 1e-8) return Q;
  }
}

SubspaceSet::SubspaceSet(int d, int j, int count, Rng rng)
    : d_(d), j_(j), count_(count), stacked_(static_cast<Eigen::Index>(count) * j, d) {
  for (int s = 0; s < count; ++s) {
    const Mat B = haar_basis(d, j, rng);
    stacked_.middleRows(static_cast<Eigen::Index>(s) * j, j) = B.transpose();
  }
}

Mat SubspaceSet::basis(int s) const {
  return stacked_.middleRows(static_cast<Eigen::Index>(s) * j_, j_).transpose();
}

Vec SubspaceSet::projected_volumes(const Polytope& P) const {
  const Mat& X = P.vertex_matrix();
  const Mat Y = stacked_ * X;
  Vec out(count_);
  if (j_ == d_) {
    // Full-dimensional projections are rotations, so every sample sees the same volume.
    const PolytopeMeasures pm = polytope_measures(P, false);
    out.setConstant(pm.dim == d_ ? pm.volume : 0.0);
    return out;
  }
  if (j_ == 1) {
    out = Y.rowwise().maxCoeff() - Y.rowwise().minCoeff();
    return out;
  }
  if (j_ == 2) {
    std::vector<Eigen::Vector2d> q(static_cast<std::size_t>(X.cols()));
    for (int s = 0; s < count_; ++s) {
      for (Eigen::Index i = 0; i < X.cols(); ++i) q[i] = Eigen::Vector2d(Y(2 * s, i), Y(2 * s + 1, i));
      out(s) = polygon_area(convex_hull_2d(q));
    }
    return out;
  }
  for (int s = 0; s < count_; ++s)
    out(s) = hull_volume(Y.middleRows(static_cast<Eigen::Index>(s) * j_, j_));
  return out;
}

std::vector<ProjectionSample> SubspaceSet::samples(const Polytope& P) const {
  const Vec v = projected_volumes(P);
  std::vector<ProjectionSample> out(static_cast<std::size_t>(count_));
  for (int s = 0; s < count_; ++s) {
    out[s].subspace_basis = basis(s);
    out[s].projected_volume = v(s);
  }
  return out;
}

int default_budget(int d) { return d <= 4 ? 2000 : 8000; }

std::vector<double> box_sides(const Polytope& P) {
  const Mat& X = P.vertex_matrix();
  const int d = static_cast<int>(X.rows());
  const Vec lo = X.rowwise().minCoeff();
  const Vec hi = X.rowwise().maxCoeff();
  const double scale = std::max(1.0, X.cwiseAbs().maxCoeff());
  const double eps = 1e-12 * scale;
  int r = 0;
  std::vector<double> sides(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    sides[i] = hi(i) - lo(i);
    if (sides[i] > tol::kMerge) ++r;
    else sides[i] = 0.0;
  }
  if (r > 30 || X.cols() != (Eigen::Index(1) << r)) return {};
  for (Eigen::Index k = 0; k < X.cols(); ++k)
    for (int i = 0; i < d; ++i)
      if (std::abs(X(i, k) - lo(i)) > eps && std::abs(X(i, k) - hi(i)) > eps) return {};
  return sides;
}

IntrinsicEstimator::IntrinsicEstimator(int d, int budget, std::uint64_t seed)
    : d_(d), budget_(budget > 0 ? budget : default_budget(d)), seed_(seed),
      sets_(static_cast<std::size_t>(d + 1)) {}

const SubspaceSet& IntrinsicEstimator::subspaces(int j) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = sets_.at(static_cast<std::size_t>(j));
  if (!slot) slot = std::make_unique<SubspaceSet>(d_, j, budget_, Rng(Rng::derive(seed_, j)));
  return *slot;
}

IntrinsicVolumeEstimate IntrinsicEstimator::monte_carlo(const Polytope& P, int j) const {
  if (P.empty()) throw EmptyPolytope();
  IntrinsicVolumeEstimate e;
  e.j = j;
  if (j == 0) {
    e.value = 1.0;
    return e;
  }
  const Vec v = subspaces(j).projected_volumes(P);
  const double c = kubota_coefficient(d_, j);
  const double mean = v.mean();
  const double var = v.size() > 1 ? (v.array() - mean).square().sum() / (v.size() - 1) : 0.0;
  e.value = c * mean;
  e.half_width = 1.96 * c * std::sqrt(var / v.size());
  e.method = VolumeMethod::MonteCarlo;
  e.samples = v.size();
  return e;
}

IntrinsicVolumeEstimate IntrinsicEstimator::operator()(const Polytope& P, int j) const {
  if (P.empty()) throw EmptyPolytope();
  IntrinsicVolumeEstimate e;
  e.j = j;
  if (j == 0) {
    e.value = 1.0;
    return e;
  }
  const auto sides = box_sides(P);
  if (!sides.empty()) {
    e.method = VolumeMethod::ExactBox;
    e.value = elementary_symmetric(sides)[static_cast<std::size_t>(j)];
    return e;
  }
  const int m = affine_dimension(P);
  if (j > m) {
    e.method = m <= 1 ? VolumeMethod::Exact1d : m == 2 ? VolumeMethod::Exact2d : VolumeMethod::ExactVolume;
    return e;
  }
  if (m <= 2) {
    const AreaPerimeter ap = area_perimeter(P);
    e.method = m == 1 ? VolumeMethod::Exact1d : VolumeMethod::Exact2d;
    e.value = (m == 2 && j == 2) ? ap.area : ap.perimeter / 2.0;
    return e;
  }
  if (j >= m - 2) {
    const PolytopeMeasures pm = polytope_measures(P, j == m - 2);
    e.method = j == m ? VolumeMethod::ExactVolume
             : j == m - 1 ? VolumeMethod::ExactBoundary : VolumeMethod::ExactRidge;
    e.value = j == m ? pm.volume : j == m - 1 ? pm.boundary / 2.0 : pm.ridge;
    return e;
  }
  return monte_carlo(P, j);
}

std::vector<IntrinsicVolumeEstimate> IntrinsicEstimator::all(const Polytope& P) const {
  std::vector<IntrinsicVolumeEstimate> out;
  for (int j = 0; j <= d_; ++j) out.push_back((*this)(P, j));
  return out;
}

IntrinsicVolumeEstimate intrinsic_volume(const Polytope& P, int j, int budget, Rng& rng) {
  if (j < 0 || j > P.dim()) throw Error("intrinsic_volume: index out of range");
  IntrinsicEstimator est(P.dim(), budget, rng.next_u64());
  return est(P, j);
}

std::vector<IntrinsicVolumeEstimate> intrinsic_volumes(const Polytope& P, int budget, Rng& rng) {
  IntrinsicEstimator est(P.dim(), budget, rng.next_u64());
  return est.all(P);
}

SteinerEstimate steiner_volume(const Polytope& P, double eps, Rng& rng, long samples) {
  if (P.empty()) throw EmptyPolytope();
  const Mat& X = P.vertex_matrix();
  const int d = P.dim();
  const Vec lo = X.rowwise().minCoeff().array() - eps;
  const Vec hi = X.rowwise().maxCoeff().array() + eps;
  const double box = (hi - lo).prod();
  std::vector<Halfspace> unit;
  for (const auto& h : P.halfspaces()) {
    const double n = h.normal.norm();
    unit.push_back({h.normal / n, h.offset / n});
  }
  long hits = 0;
  Vec x(d);
  for (long s = 0; s < samples; ++s) {
    for (int i = 0; i < d; ++i) x(i) = rng.uniform(lo(i), hi(i));
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& h : unit) worst = std::max(worst, h.slack(x));
    if (worst <= 0.0) {
      ++hits;
      continue;
    }
    if (worst > eps) continue;  // the halfspace gap already exceeds eps
    if (distance_to_hull(X, x) <= eps) ++hits;
  }
  SteinerEstimate out;
  const double p = static_cast<double>(hits) / samples;
  out.value = box * p;
  out.std_error = box * std::sqrt(p * (1.0 - p) / samples);
  out.samples = samples;
  return out;
}

SteinerEstimate steiner_prediction(const std::vector<IntrinsicVolumeEstimate>& V, double eps) {
  const int d = static_cast<int>(V.size()) - 1;
  SteinerEstimate out;
  double var = 0.0;
  for (int j = 0; j <= d; ++j) {
    const double c = kappa(d - j) * std::pow(eps, d - j);
    out.value += c * V[j].value;
    const double se = V[j].half_width / 1.96;
    var += c * c * se * se;
  }
  out.std_error = std::sqrt(var);
  return out;
}

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

double root(double x, int i) { return x <= 0.0 ? 0.0 : std::pow(x, 1.0 / i); }

}  // namespace

CheckResult check_isoperimetric(const Polytope& P, int i, const IntrinsicEstimator& est) {
  const auto a = est(P, i);
  const auto b = est(P, i + 1);
  const double lhs = root(factorial(i) * a.value, i);
  const double rhs = root(factorial(i + 1) * b.value, i + 1);
  const double lhs_hi = root(factorial(i) * a.upper(), i);
  const double rhs_lo = root(factorial(i + 1) * b.lower(), i + 1);
  CheckResult r;
  r.margin = lhs - rhs;
  r.slack = (lhs_hi - lhs) + (rhs - rhs_lo) + 1e-12 * std::max(1.0, lhs);
  r.pass = r.margin + r.slack >= 0.0;
  std::ostringstream os;
  os << "i=" << i << " lhs=" << lhs << " rhs=" << rhs;
  r.detail = os.str();
  return r;
}

CheckResult check_isoperimetric(const Polytope& P, int i, int budget, Rng& rng) {
  return check_isoperimetric(P, i, IntrinsicEstimator(P.dim(), budget, rng.next_u64()));
}

CheckResult check_cone_bound(const Polytope& base, double h, int j, const IntrinsicEstimator& est) {
  const int n = base.dim() + 1;
  const Polytope cone = cone_over(base, h);
  const Polytope flat = embed(base, n);
  const auto a = est(cone, j + 1);
  const auto b = est(flat, j);
  const double lhs = a.value;
  const double rhs = h * b.value / (j + 1);
  CheckResult r;
  r.margin = lhs - rhs;
  r.slack = a.half_width + h * b.half_width / (j + 1) + 1e-9 * std::max(1.0, std::abs(rhs));
  r.pass = r.margin + r.slack >= 0.0;
  std::ostringstream os;
  os << "j=" << j << " h=" << h << " V_{j+1}(cone)=" << lhs << " hV_j(base)/(j+1)=" << rhs;
  r.detail = os.str();
  return r;
}

CheckResult check_cone_bound(const Polytope& base, double h, int j, Rng& rng, int budget) {
  return check_cone_bound(base, h, j, IntrinsicEstimator(base.dim() + 1, budget, rng.next_u64()));
}

CheckResult check_cylinder_identity(const Polytope& base, double h, int j,
                                    const IntrinsicEstimator& est) {
  const int n = base.dim() + 1;
  const Polytope cyl = prism(base, h);
  const Polytope flat = embed(base, n);
  const auto a = est(cyl, j + 1);
  const auto b = est(flat, j + 1);
  const auto c = est(flat, j);
  const double lhs = a.value;
  const double rhs = b.value + h * c.value;
  CheckResult r;
  r.margin = std::abs(lhs - rhs);
  r.slack = std::sqrt(a.half_width * a.half_width + b.half_width * b.half_width +
                      h * h * c.half_width * c.half_width) +
            1e-9 * std::max(1.0, std::abs(rhs));
  r.pass = r.margin <= r.slack;
  std::ostringstream os;
  os << "j=" << j << " h=" << h << " V_{j+1}(prism)=" << lhs << " V_{j+1}(K)+hV_j(K)=" << rhs;
  r.detail = os.str();
  return r;
}

CheckResult check_cylinder_identity(const Polytope& base, double h, int j, Rng& rng, int budget) {
  return check_cylinder_identity(base, h, j,
                                 IntrinsicEstimator(base.dim() + 1, budget, rng.next_u64()));
}

}  // namespace cslab
