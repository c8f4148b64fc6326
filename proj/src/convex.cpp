#include "cslab/convex.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include <boost/multiprecision/cpp_int.hpp>

#include "cslab/errors.hpp"

namespace cslab {

namespace {

double rank_tolerance(double smax) { return 1e-11 * std::max(1.0, smax); }

struct HullMeasures3d {
  double volume = 0.0;
  double boundary = 0.0;
  double ridge = 0.0;  // sum over edges of length times exterior angle / (2 pi)
};

using V3 = Eigen::Vector3d;

// Oriented plane through a, b, c with the cross product and its component magnitudes kept for
// the floating-point filter of orientation tests.
struct Face3 {
  Eigen::Index a, b, c;
  V3 n;      // (b - a) x (c - a), outward
  V3 nabs;   // componentwise sum of |products| in n
  bool alive;
};

// Sign of ((b - a) x (c - a)) . (x - a), evaluated exactly. When the coordinates span at most
// 120 binary orders of magnitude they are scaled to integers of at most 174 bits, and the
// determinant (at most 525 bits) fits a fixed-width integer; otherwise rationals are used.
int orient_exact(const V3& a, const V3& b, const V3& c, const V3& x) {
  const std::array<double, 12> v{a.x(), a.y(), a.z(), b.x(), b.y(), b.z(),
                                 c.x(), c.y(), c.z(), x.x(), x.y(), x.z()};
  int emin = std::numeric_limits<int>::max(), emax = std::numeric_limits<int>::min();
  for (double t : v) {
    if (t == 0.0) continue;
    int e = 0;
    std::frexp(t, &e);
    emin = std::min(emin, e);
    emax = std::max(emax, e);
  }
  if (emax == std::numeric_limits<int>::min()) return 0;
  auto det_sign = [&](auto conv) {
    const auto ax = conv(v[0]), ay = conv(v[1]), az = conv(v[2]);
    const auto bx = conv(v[3]) - ax, by = conv(v[4]) - ay, bz = conv(v[5]) - az;
    const auto cx = conv(v[6]) - ax, cy = conv(v[7]) - ay, cz = conv(v[8]) - az;
    const auto xx = conv(v[9]) - ax, xy = conv(v[10]) - ay, xz = conv(v[11]) - az;
    const auto det = xx * (by * cz - bz * cy) + xy * (bz * cx - bx * cz) + xz * (bx * cy - by * cx);
    return det > 0 ? 1 : det < 0 ? -1 : 0;
  };
  namespace mp = boost::multiprecision;
  if (emax - emin <= 120) {
    using I = mp::number<mp::cpp_int_backend<640, 640, mp::signed_magnitude, mp::unchecked, void>, mp::et_off>;
    return det_sign([&](double t) { return I(std::ldexp(t, 53 - emin)); });
  }
  using Q = mp::number<mp::cpp_rational_backend, mp::et_off>;
  return det_sign([](double t) { return Q(t); });
}

int orient(const Face3& f, const Mat& pts, const V3& x) {
  const V3 a = pts.col(f.a);
  const V3 xa = x - a;
  const double det = f.n.dot(xa);
  const double bound = 4e-15 * f.nabs.dot(xa.cwiseAbs());
  if (det > bound) return 1;
  if (det < -bound) return -1;
  return orient_exact(a, pts.col(f.b), pts.col(f.c), x);
}

// Incremental (beneath-beyond) triangulated hull of a 3-D point set with exact orientation
// signs, so the face structure stays consistent even for clusters of nearly coincident or
// nearly coplanar vertices. Splitting a flat face into triangles adds zero exterior angle.
HullMeasures3d hull_measures_3d(const Mat& raw, double eps) {
  const Mat pts = raw.colwise() - raw.rowwise().mean();
  const auto n = pts.cols();
  auto P = [&](Eigen::Index i) -> V3 { return pts.col(i); };
  auto argmax = [&](auto&& score) {
    Eigen::Index best = 0;
    double bs = -1.0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (const double s = score(P(i)); s > bs) bs = s, best = i;
    return std::pair{best, bs};
  };
  const auto [i1, d1] = argmax([&](const V3& x) { return (x - P(0)).norm(); });
  if (d1 <= eps) return {};
  const V3 dir = (P(i1) - P(0)) / d1;
  const auto [i2, d2] = argmax([&](const V3& x) { return (x - P(0)).cross(dir).norm(); });
  if (d2 <= eps) return {};
  const V3 nrm0 = (P(i1) - P(0)).cross(P(i2) - P(0)).normalized();
  const auto [i3, d3] = argmax([&](const V3& x) { return std::abs(nrm0.dot(x - P(0))); });
  if (d3 <= eps) return {};

  std::vector<Face3> faces;
  auto add = [&](Eigen::Index a, Eigen::Index b, Eigen::Index c) {
    const V3 ba = P(b) - P(a), ca = P(c) - P(a);
    const V3 nabs(std::abs(ba.y() * ca.z()) + std::abs(ba.z() * ca.y()),
                  std::abs(ba.z() * ca.x()) + std::abs(ba.x() * ca.z()),
                  std::abs(ba.x() * ca.y()) + std::abs(ba.y() * ca.x()));
    faces.push_back({a, b, c, ba.cross(ca), nabs, true});
  };
  // Initial tetrahedron, each face oriented away from the opposite vertex.
  const std::array<Eigen::Index, 4> tet{0, i1, i2, i3};
  for (int o = 0; o < 4; ++o) {
    std::array<Eigen::Index, 3> f{};
    for (int q = 0, r = 0; q < 4; ++q)
      if (q != o) f[static_cast<std::size_t>(r++)] = tet[static_cast<std::size_t>(q)];
    if (orient_exact(P(f[0]), P(f[1]), P(f[2]), P(tet[static_cast<std::size_t>(o)])) > 0) std::swap(f[1], f[2]);
    add(f[0], f[1], f[2]);
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    if (i == 0 || i == i1 || i == i2 || i == i3) continue;
    const V3 x = P(i);
    std::set<std::pair<Eigen::Index, Eigen::Index>> edges;
    for (Face3& f : faces) {
      if (!f.alive || orient(f, pts, x) <= 0) continue;
      f.alive = false;
      edges.insert({f.a, f.b});
      edges.insert({f.b, f.c});
      edges.insert({f.c, f.a});
    }
    // Horizon edges keep the direction they had in the visible face, so the new faces are
    // outward oriented by construction.
    for (const auto& [a, b] : edges)
      if (!edges.count({b, a})) add(a, b, i);
  }

  HullMeasures3d m;
  std::map<std::pair<Eigen::Index, Eigen::Index>, const Face3*> by_edge;
  for (const Face3& f : faces) {
    if (!f.alive) continue;
    m.boundary += f.n.norm() / 2.0;
    m.volume += f.n.dot(P(f.a)) / 6.0;
    by_edge[{f.a, f.b}] = &f;
    by_edge[{f.b, f.c}] = &f;
    by_edge[{f.c, f.a}] = &f;
  }
  for (const auto& [e, f] : by_edge) {
    if (e.first > e.second) continue;
    const auto other = by_edge.find({e.second, e.first});
    if (other == by_edge.end()) continue;
    // atan2 keeps the angle between nearly coplanar triangles accurate; acos would not.
    const V3& n1 = f->n;
    const V3& n2 = other->second->n;
    const double angle = std::atan2(n1.cross(n2).norm(), n1.dot(n2));
    m.ridge += (P(e.first) - P(e.second)).norm() * angle / (2.0 * M_PI);
  }
  return m;
}

AffineFrame frame_of(const Mat& pts, Mat* centered_out = nullptr) {
  AffineFrame f;
  const auto d = pts.rows();
  const auto n = pts.cols();
  f.origin = pts.rowwise().mean();
  if (n <= 1) {
    f.basis.resize(d, 0);
    return f;
  }
  Mat C = pts.colwise() - f.origin;
  if (n == 2 && !centered_out) {
    // Segment: the singular value of C is |x1 - x0| / sqrt(2).
    const Vec e = pts.col(1) - pts.col(0);
    const double s0 = e.norm() / std::sqrt(2.0);
    f.basis = s0 > rank_tolerance(s0) ? Mat(e / e.norm()) : Mat(d, 0);
    return f;
  }
  Eigen::JacobiSVD<Mat> svd(C, Eigen::ComputeThinU);
  const Vec& s = svd.singularValues();
  const double t = rank_tolerance(s(0));
  int r = 0;
  while (r < s.size() && s(r) > t) ++r;
  f.basis = svd.matrixU().leftCols(r);
  if (centered_out) *centered_out = std::move(C);
  return f;
}

Mat gather(const Mat& X, const std::vector<int>& ids) {
  Mat out(X.rows(), static_cast<Eigen::Index>(ids.size()));
  for (std::size_t i = 0; i < ids.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = X.col(ids[i]);
  return out;
}

double segment_length(const Mat& pts, const AffineFrame& f) {
  const Vec c = f.coords(pts).row(0).transpose();
  return c.maxCoeff() - c.minCoeff();
}

double planar_area(const Mat& pts, const AffineFrame& f, double* perimeter = nullptr) {
  const Mat c = f.coords(pts);
  std::vector<Eigen::Vector2d> q;
  q.reserve(static_cast<std::size_t>(c.cols()));
  for (Eigen::Index i = 0; i < c.cols(); ++i) q.emplace_back(c(0, i), c(1, i));
  const auto hull = convex_hull_2d(std::move(q));
  if (perimeter) *perimeter = polygon_perimeter(hull);
  return polygon_area(hull);
}

// Face recursion over the combinatorial structure of a vertex-mode polytope.
class FaceMeasure {
 public:
  explicit FaceMeasure(const Polytope& P) : X_(P.vertex_matrix()), act_(P.active_sets()) {}

  // Facets (as vertex-id lists) of the k-dimensional face spanned by ids.
  struct Facet {
    std::vector<int> ids;
    AffineFrame frame;
    int halfspace;  // a constraint tight on exactly these vertices
  };

  std::vector<Facet> facets(const std::vector<int>& ids, int k) const {
    std::set<int> cand;
    for (int i : ids) cand.insert(act_[i].begin(), act_[i].end());
    std::set<std::vector<int>> seen;
    std::vector<Facet> out;
    for (int g : cand) {
      std::vector<int> sub;
      for (int i : ids)
        if (std::binary_search(act_[i].begin(), act_[i].end(), g)) sub.push_back(i);
      if (static_cast<int>(sub.size()) < k || sub.size() == ids.size()) continue;
      if (seen.count(sub)) continue;
      seen.insert(sub);
      AffineFrame f = frame_of(gather(X_, sub));
      if (f.dim() == k - 1) out.push_back({std::move(sub), std::move(f), g});
    }
    return out;
  }

  double volume(const std::vector<int>& ids, int k, const AffineFrame& f) const {
    if (k == 0) return 1.0;
    const Mat pts = gather(X_, ids);
    if (k == 1) return segment_length(pts, f);
    if (k == 2) return planar_area(pts, f);
    double v = 0.0;
    for (const auto& [sub, sf, g] : facets(ids, k)) {
      Vec r = f.origin - sf.origin;
      r -= sf.basis * (sf.basis.transpose() * r);
      v += r.norm() * volume(sub, k - 1, sf) / k;
    }
    return v;
  }

 private:
  const Mat& X_;
  const std::vector<std::vector<int>>& act_;
};

}  // namespace

AffineFrame affine_frame(const Mat& pts) { return frame_of(pts); }

std::vector<Eigen::Vector2d> convex_hull_2d(std::vector<Eigen::Vector2d> pts) {
  std::sort(pts.begin(), pts.end(), [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  if (pts.size() < 3) return pts;
  auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<Eigen::Vector2d> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i - 1]) <= 0) --k;
    h[k++] = pts[i - 1];
  }
  h.resize(k - 1);
  return h;
}

double polygon_area(const std::vector<Eigen::Vector2d>& p) {
  if (p.size() < 3) return 0.0;
  double a = 0.0;
  for (std::size_t i = 0, j = p.size() - 1; i < p.size(); j = i++)
    a += p[j].x() * p[i].y() - p[i].x() * p[j].y();
  return std::abs(a) / 2.0;
}

double polygon_perimeter(const std::vector<Eigen::Vector2d>& p) {
  if (p.size() < 2) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0, j = p.size() - 1; i < p.size(); j = i++) s += (p[i] - p[j]).norm();
  return s;
}

double hull_volume(const Mat& pts) {
  const int k = static_cast<int>(pts.rows());
  const auto n = pts.cols();
  if (k == 0) return 1.0;
  if (n < k + 1) return 0.0;
  if (k == 1) return pts.maxCoeff() - pts.minCoeff();
  if (k == 2) {
    std::vector<Eigen::Vector2d> q;
    q.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) q.emplace_back(pts(0, i), pts(1, i));
    return polygon_area(convex_hull_2d(std::move(q)));
  }
  const AffineFrame f = frame_of(pts);
  if (f.dim() < k) return 0.0;
  const Vec c = f.origin;
  const double scale = (pts.colwise() - c).cwiseAbs().maxCoeff();
  const double eps = 1e-10 * std::max(scale, 1e-300);
  if (k == 3) return hull_measures_3d(pts, eps).volume;

  // Brute-force facet search: every k-subset spanning a hyperplane with all points on
  // one side. Small point counts only.
  std::set<std::vector<int>> seen;
  double vol = 0.0;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  Mat Dm(k, k - 1);
  while (true) {
    for (int r = 1; r < k; ++r) Dm.col(r - 1) = pts.col(idx[r]) - pts.col(idx[0]);
    Eigen::JacobiSVD<Mat> svd(Dm, Eigen::ComputeFullU);
    const Vec& s = svd.singularValues();
    if (s(k - 2) > rank_tolerance(s(0)) * 1e-2 && s(k - 2) > 1e-14 * std::max(1.0, scale)) {
      Vec nrm = svd.matrixU().col(k - 1);
      double off = nrm.dot(pts.col(idx[0]));
      if (nrm.dot(c) > off) {
        nrm = -nrm;
        off = -off;
      }
      const Vec sl = (pts.transpose() * nrm).array() - off;
      if (sl.maxCoeff() <= eps) {
        std::vector<int> on;
        for (Eigen::Index i = 0; i < n; ++i)
          if (sl(i) >= -eps) on.push_back(static_cast<int>(i));
        if (!seen.count(on)) {
          seen.insert(on);
          const Mat B = svd.matrixU().leftCols(k - 1);
          Mat q(k - 1, static_cast<Eigen::Index>(on.size()));
          for (std::size_t i = 0; i < on.size(); ++i)
            q.col(static_cast<Eigen::Index>(i)) = B.transpose() * (pts.col(on[i]) - pts.col(idx[0]));
          vol += (off - nrm.dot(c)) * hull_volume(q) / k;
        }
      }
    }
    int r = k - 1;
    while (r >= 0 && idx[r] == n - k + r) --r;
    if (r < 0) break;
    ++idx[r];
    for (int q = r + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
  }
  return vol;
}

int affine_dimension(const Polytope& P) {
  if (P.empty()) throw EmptyPolytope();
  return frame_of(P.vertex_matrix()).dim();
}

PolytopeMeasures polytope_measures(const Polytope& P, bool with_ridges) {
  if (P.empty()) throw EmptyPolytope();
  const Mat& X = P.vertex_matrix();
  const AffineFrame f = frame_of(X);
  PolytopeMeasures m;
  m.dim = f.dim();
  if (m.dim == 0) {
    m.volume = 1.0;
    return m;
  }
  if (m.dim == 1) {
    m.volume = segment_length(X, f);
    m.boundary = 2.0;
    return m;
  }
  if (m.dim == 2) {
    m.volume = planar_area(X, f, &m.boundary);
    return m;
  }
  if (m.dim == 3) {
    const Mat c = f.coords(X);
    const HullMeasures3d h = hull_measures_3d(c, 1e-10 * std::max(c.cwiseAbs().maxCoeff(), 1e-300));
    m.volume = h.volume;
    m.boundary = h.boundary;
    if (with_ridges) m.ridge = h.ridge;
    return m;
  }
  FaceMeasure fm(P);
  std::vector<int> all(static_cast<std::size_t>(X.cols()));
  std::iota(all.begin(), all.end(), 0);
  // Each ridge is counted once, from the first facet that finds it; its exterior angle is
  // the angle between the outward normals (within the affine hull) of the two constraints
  // meeting there.
  auto hull_normal = [&](int h) -> Vec {
    const Vec& n = P.halfspaces()[static_cast<std::size_t>(h)].normal;
    const Vec t = f.basis * (f.basis.transpose() * n);
    const double len = t.norm();
    return len > 1e-12 * n.norm() ? Vec(t / len) : Vec();
  };
  std::set<std::vector<int>> ridges;
  for (const auto& [sub, sf, h] : fm.facets(all, m.dim)) {
    const double a = fm.volume(sub, m.dim - 1, sf);
    Vec r = f.origin - sf.origin;
    r -= sf.basis * (sf.basis.transpose() * r);
    m.boundary += a;
    m.volume += r.norm() * a / m.dim;
    if (!with_ridges) continue;
    const Vec n1 = hull_normal(h);
    for (const auto& [g, gf, h2] : fm.facets(sub, m.dim - 1)) {
      if (!ridges.insert(g).second) continue;
      const Vec n2 = hull_normal(h2);
      if (n1.size() == 0 || n2.size() == 0) continue;
      const double c = std::clamp(n1.dot(n2), -1.0, 1.0);
      m.ridge += fm.volume(g, m.dim - 2, gf) * std::acos(c) / (2.0 * M_PI);
    }
  }
  return m;
}

std::vector<Eigen::Vector2d> planar_polygon(const Polytope& P, AffineFrame* frame) {
  const Mat& X = P.vertex_matrix();
  AffineFrame f = frame_of(X);
  if (f.dim() != 2) throw Error("planar_polygon: affine dimension is not 2");
  const Mat c = f.coords(X);
  std::vector<Eigen::Vector2d> q;
  for (Eigen::Index i = 0; i < c.cols(); ++i) q.emplace_back(c(0, i), c(1, i));
  if (frame) *frame = std::move(f);
  return convex_hull_2d(std::move(q));
}

AreaPerimeter area_perimeter(const Polytope& P) {
  const PolytopeMeasures m = polytope_measures(P);
  AreaPerimeter out;
  if (m.dim > 2) throw Error("area_perimeter: affine dimension exceeds 2");
  if (m.dim == 2) {
    out.area = m.volume;
    out.perimeter = m.boundary;
  } else if (m.dim == 1) {
    out.perimeter = 2.0 * m.volume;
  }
  return out;
}

double distance_to_hull(const Mat& pts, const Vec& x) {
  const Mat Q = pts.colwise() - x;
  const auto n = Q.cols();
  Eigen::Index j0 = 0;
  Q.colwise().squaredNorm().minCoeff(&j0);
  if (n == 1) return Q.col(0).norm();
  const double scale2 = std::max(Q.colwise().squaredNorm().maxCoeff(), 1e-300);

  std::vector<Eigen::Index> S{j0};
  std::vector<double> lam{1.0};
  Vec y = Q.col(j0);
  for (int outer = 0; outer < 200; ++outer) {
    Eigen::Index j = 0;
    const Vec g = Q.transpose() * y;
    g.minCoeff(&j);
    if (y.squaredNorm() - g(j) <= 1e-12 * scale2) break;
    if (std::find(S.begin(), S.end(), j) != S.end()) break;
    S.push_back(j);
    lam.push_back(0.0);
    for (int minor = 0; minor < 100; ++minor) {
      const auto s = static_cast<Eigen::Index>(S.size());
      Mat Ms(Q.rows(), s);
      for (Eigen::Index a = 0; a < s; ++a) Ms.col(a) = Q.col(S[a]);
      Mat K = Mat::Zero(s + 1, s + 1);
      K.topLeftCorner(s, s) = Ms.transpose() * Ms;
      K.block(0, s, s, 1).setOnes();
      K.block(s, 0, 1, s).setOnes();
      Vec rhs = Vec::Zero(s + 1);
      rhs(s) = 1.0;
      const Vec sol = K.completeOrthogonalDecomposition().solve(rhs);
      const Vec alpha = sol.head(s);
      if (alpha.minCoeff() > 1e-14) {
        for (Eigen::Index a = 0; a < s; ++a) lam[a] = alpha(a);
        y = Ms * alpha;
        break;
      }
      double theta = 1.0;
      for (Eigen::Index a = 0; a < s; ++a)
        if (alpha(a) <= 1e-14) theta = std::min(theta, lam[a] / (lam[a] - alpha(a)));
      for (Eigen::Index a = 0; a < s; ++a) lam[a] = theta * alpha(a) + (1.0 - theta) * lam[a];
      std::vector<Eigen::Index> S2;
      std::vector<double> l2;
      for (Eigen::Index a = 0; a < s; ++a) {
        if (lam[a] > 1e-14) {
          S2.push_back(S[a]);
          l2.push_back(lam[a]);
        }
      }
      if (S2.empty()) {
        S2.push_back(S.back());
        l2.push_back(1.0);
      }
      S = std::move(S2);
      lam = std::move(l2);
      const double tot = std::accumulate(lam.begin(), lam.end(), 0.0);
      y.setZero();
      for (std::size_t a = 0; a < S.size(); ++a) y += (lam[a] / tot) * Q.col(S[a]);
    }
  }
  return y.norm();
}

}  // namespace cslab
