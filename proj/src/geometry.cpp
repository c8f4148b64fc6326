#include "cslab/geometry.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>

#include "cslab/errors.hpp"
#include "cslab/lp.hpp"

namespace cslab {

struct Polytope::Data {
  int d = 0;
  std::vector<Halfspace> hs;
  std::vector<char> prot;
  bool vertex_mode = true;
  bool empty = true;
  Mat X;                                 // d x n
  std::vector<std::vector<int>> active;  // sorted halfspace indices per vertex
  std::uint64_t generation = 0;
};

namespace {

std::atomic<std::size_t> g_max_halfspaces{512};

using DataPtr = std::shared_ptr<Polytope::Data>;

bool lex_less(const Mat& X, Eigen::Index a, Eigen::Index b) {
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    if (X(r, a) < X(r, b)) return true;
    if (X(r, a) > X(r, b)) return false;
  }
  return false;
}

// Sorts vertex columns lexicographically, carrying active sets along.
void sort_vertices(Polytope::Data& D) {
  const auto n = D.X.cols();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return lex_less(D.X, a, b); });
  bool sorted = true;
  for (Eigen::Index i = 0; i < n; ++i) sorted = sorted && order[i] == i;
  if (sorted) return;
  Mat X(D.X.rows(), n);
  std::vector<std::vector<int>> act(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    X.col(i) = D.X.col(order[i]);
    if (!D.active.empty()) act[i] = std::move(D.active[order[i]]);
  }
  D.X = std::move(X);
  if (!D.active.empty()) D.active = std::move(act);
}

void compute_active(Polytope::Data& D) {
  const auto n = D.X.cols();
  const auto m = static_cast<Eigen::Index>(D.hs.size());
  Mat A(m, D.d);
  Vec b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    A.row(i) = D.hs[static_cast<std::size_t>(i)].normal.transpose();
    b(i) = D.hs[static_cast<std::size_t>(i)].offset;
  }
  const Mat slack = (A * D.X).colwise() - b;
  D.active.assign(static_cast<std::size_t>(n), {});
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index i = 0; i < m; ++i)
      if (std::abs(slack(i, k)) <= tol::kAct) D.active[k].push_back(static_cast<int>(i));
}

// Rank of the (normalized) normals indexed by idx.
int normal_rank(const std::vector<Halfspace>& hs, const std::vector<int>& idx, int d) {
  if (idx.empty()) return 0;
  if (d == 1) return 1;
  Mat N(static_cast<Eigen::Index>(idx.size()), d);
  for (std::size_t r = 0; r < idx.size(); ++r)
    N.row(static_cast<Eigen::Index>(r)) = hs[idx[r]].normal.normalized().transpose();
  Eigen::ColPivHouseholderQR<Mat> qr(N);
  qr.setThreshold(1e-9);
  return static_cast<int>(qr.rank());
}

bool rank_at_least(const std::vector<Halfspace>& hs, const std::vector<int>& idx, int d,
                  int need) {
  if (need <= 0) return true;
  if (static_cast<int>(idx.size()) < need) return false;
  if (need == 1) return true;
  if (d == 3 && need == 2) {
    const Eigen::Vector3d a = hs[idx[0]].normal.normalized();
    for (std::size_t k = 1; k < idx.size(); ++k) {
      const Eigen::Vector3d b = hs[idx[k]].normal.normalized();
      if (a.cross(b).norm() > 1e-9) return true;
    }
    // All parallel to the first one.
    return false;
  }
  return normal_rank(hs, idx, d) >= need;
}

Polytope make(DataPtr D) { return Polytope(std::shared_ptr<const Polytope::Data>(std::move(D))); }

void check_limit(const Polytope::Data& D) {
  if (D.hs.size() > g_max_halfspaces.load()) throw TooManyConstraints(D.hs.size());
}

// Drops unprotected halfspaces that are tight at no vertex and reindexes active sets.
void prune(Polytope::Data& D) {
  std::vector<char> used(D.hs.size(), 0);
  for (const auto& a : D.active)
    for (int i : a) used[i] = 1;
  std::vector<int> remap(D.hs.size(), -1);
  std::vector<Halfspace> hs;
  std::vector<char> prot;
  for (std::size_t i = 0; i < D.hs.size(); ++i) {
    if (D.prot[i] || used[i]) {
      remap[i] = static_cast<int>(hs.size());
      hs.push_back(std::move(D.hs[i]));
      prot.push_back(D.prot[i]);
    }
  }
  if (hs.size() == D.hs.size()) {
    D.hs = std::move(hs);
    return;
  }
  for (auto& a : D.active)
    for (int& i : a) i = remap[i];
  D.hs = std::move(hs);
  D.prot = std::move(prot);
}

bool h_mode_empty(int d, const std::vector<Halfspace>& hs) {
  Mat A(static_cast<Eigen::Index>(hs.size()), d);
  Vec b(static_cast<Eigen::Index>(hs.size()));
  for (std::size_t i = 0; i < hs.size(); ++i) {
    A.row(static_cast<Eigen::Index>(i)) = hs[i].normal.transpose();
    b(static_cast<Eigen::Index>(i)) = hs[i].offset + tol::kFeas;
  }
  return lp_maximize(Vec::Zero(d), A, b).status == LpResult::Status::Infeasible;
}

std::pair<double, double> h_mode_range(int d, const std::vector<Halfspace>& hs, const Vec& u) {
  Mat A(static_cast<Eigen::Index>(hs.size()), d);
  Vec b(static_cast<Eigen::Index>(hs.size()));
  for (std::size_t i = 0; i < hs.size(); ++i) {
    A.row(static_cast<Eigen::Index>(i)) = hs[i].normal.transpose();
    b(static_cast<Eigen::Index>(i)) = hs[i].offset;
  }
  const LpResult hi = lp_maximize(u, A, b);
  const LpResult lo = lp_maximize(-u, A, b);
  if (hi.status != LpResult::Status::Optimal || lo.status != LpResult::Status::Optimal)
    throw EmptyPolytope();
  return {-lo.value, hi.value};
}

Polytope clip_impl(const Polytope& P, const Halfspace& h, bool force) {
  const auto& S = P.data();
  if (S.empty) return P;
  auto D = std::make_shared<Polytope::Data>();
  D->d = S.d;
  D->vertex_mode = S.vertex_mode;
  D->generation = S.generation + 1;

  if (!S.vertex_mode) {
    const auto [lo, hi] = h_mode_range(S.d, S.hs, h.normal);
    if (hi <= h.offset + tol::kFeas && !force) return P;
    D->hs = S.hs;
    D->prot = S.prot;
    D->hs.push_back(h);
    D->prot.push_back(force ? 1 : 0);
    D->empty = lo > h.offset + tol::kFeas;
    check_limit(*D);
    return make(std::move(D));
  }

  const Mat& X = S.X;
  const auto n = X.cols();
  Vec s = X.transpose() * h.normal;
  s.array() -= h.offset;
  bool any_out = false, any_in = false;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (s(k) > tol::kFeas) any_out = true;
    else any_in = true;
  }
  if (!any_out && !force) return P;
  if (!any_in) {
    D->hs = S.hs;
    D->prot = S.prot;
    D->empty = true;
    D->X.resize(S.d, 0);
    return make(std::move(D));
  }

  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(n) + 8);
  for (Eigen::Index k = 0; k < n; ++k)
    if (s(k) <= tol::kFeas) pts.push_back(X.col(k));
  const std::size_t kept = pts.size();

  if (any_out) {
    // Edges joining a strictly inside vertex a to an outside vertex b share at least d - 1
    // constraints; candidates are found through per-constraint lists of inside vertices.
    std::vector<std::vector<Eigen::Index>> inside_on(S.hs.size());
    for (Eigen::Index a = 0; a < n; ++a)
      if (s(a) < -tol::kFeas)
        for (int g : S.active[a]) inside_on[static_cast<std::size_t>(g)].push_back(a);
    std::vector<int> shared(static_cast<std::size_t>(n), 0);
    std::vector<Eigen::Index> touched;
    std::vector<int> common;
    for (Eigen::Index b = 0; b < n; ++b) {
      if (s(b) <= tol::kFeas) continue;
      touched.clear();
      if (S.d == 1) {
        // A segment's two ends share no constraint.
        for (Eigen::Index a = 0; a < n; ++a)
          if (s(a) < -tol::kFeas) touched.push_back(a);
      }
      for (int g : S.active[b])
        for (Eigen::Index a : inside_on[static_cast<std::size_t>(g)])
          if (shared[a]++ == 0) touched.push_back(a);
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      for (Eigen::Index a : touched) {
        const int cnt = shared[a];
        shared[a] = 0;
        if (cnt < S.d - 1) continue;
        common.clear();
        std::set_intersection(S.active[a].begin(), S.active[a].end(), S.active[b].begin(),
                              S.active[b].end(), std::back_inserter(common));
        if (!rank_at_least(S.hs, common, S.d, S.d - 1)) continue;
        const double t = s(a) / (s(a) - s(b));
        Vec y = X.col(a) + t * (X.col(b) - X.col(a));
        bool dup = false;
        for (std::size_t q = kept; q < pts.size() && !dup; ++q)
          dup = (pts[q] - y).cwiseAbs().maxCoeff() <= tol::kMerge;
        for (std::size_t q = 0; q < kept && !dup; ++q)
          dup = (pts[q] - y).cwiseAbs().maxCoeff() <= tol::kMerge;
        if (!dup) pts.push_back(std::move(y));
      }
    }
  }

  D->hs = S.hs;
  D->prot = S.prot;
  D->hs.push_back(h);
  D->prot.push_back(force ? 1 : 0);
  D->X.resize(S.d, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t q = 0; q < pts.size(); ++q) D->X.col(static_cast<Eigen::Index>(q)) = pts[q];
  D->empty = false;
  compute_active(*D);
  prune(*D);
  check_limit(*D);
  sort_vertices(*D);
  return make(std::move(D));
}

Halfspace axis_halfspace(int d, int i, double sign, double offset) {
  Halfspace h;
  h.normal = Vec::Zero(d);
  h.normal(i) = sign;
  h.offset = offset;
  return h;
}

}  // namespace

void set_max_halfspaces(std::size_t n) { g_max_halfspaces.store(n); }
std::size_t max_halfspaces() { return g_max_halfspaces.load(); }

Polytope::Polytope() : data_(std::make_shared<Data>()) {}
Polytope::Polytope(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

Polytope Polytope::box(const Vec& lo, const Vec& hi) {
  const int d = static_cast<int>(lo.size());
  auto D = std::make_shared<Data>();
  D->d = d;
  for (int i = 0; i < d; ++i) {
    D->hs.push_back(axis_halfspace(d, i, -1.0, -lo(i)));
    D->hs.push_back(axis_halfspace(d, i, 1.0, hi(i)));
  }
  D->prot.assign(D->hs.size(), 1);
  D->vertex_mode = d <= kMaxVertexDim;
  D->empty = false;
  for (int i = 0; i < d; ++i)
    if (lo(i) > hi(i)) D->empty = true;
  if (!D->vertex_mode || D->empty) {
    D->X.resize(d, 0);
    return make(std::move(D));
  }
  std::vector<Vec> pts;
  for (std::uint64_t mask = 0; mask < (1ULL << d); ++mask) {
    Vec x(d);
    for (int i = 0; i < d; ++i) x(i) = (mask >> i) & 1ULL ? hi(i) : lo(i);
    bool dup = false;
    for (const auto& q : pts) dup = dup || (q - x).cwiseAbs().maxCoeff() <= tol::kMerge;
    if (!dup) pts.push_back(x);
  }
  D->X.resize(d, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t q = 0; q < pts.size(); ++q) D->X.col(static_cast<Eigen::Index>(q)) = pts[q];
  compute_active(*D);
  sort_vertices(*D);
  return make(std::move(D));
}

Polytope Polytope::unit_cube(int d) { return box(Vec::Zero(d), Vec::Ones(d)); }

Polytope Polytope::from_halfspaces(int d, std::vector<Halfspace> hs) {
  auto D = std::make_shared<Data>();
  D->d = d;
  D->hs = std::move(hs);
  D->prot.assign(D->hs.size(), 1);
  D->vertex_mode = d <= kMaxVertexDim;
  check_limit(*D);
  if (!D->vertex_mode) {
    D->empty = h_mode_empty(d, D->hs);
    D->X.resize(d, 0);
    return make(std::move(D));
  }
  D->X = enumerate_vertices_bruteforce(d, D->hs);
  D->empty = D->X.cols() == 0;
  compute_active(*D);
  return make(std::move(D));
}

int Polytope::dim() const { return data_->d; }
bool Polytope::empty() const { return data_->empty; }
bool Polytope::vertex_mode() const { return data_->vertex_mode; }
std::uint64_t Polytope::generation() const { return data_->generation; }
const std::vector<Halfspace>& Polytope::halfspaces() const { return data_->hs; }
bool Polytope::is_protected(std::size_t i) const { return data_->prot.at(i) != 0; }

const Mat& Polytope::vertex_matrix() const {
  if (!data_->vertex_mode) throw DimensionTooLarge(data_->d, kMaxVertexDim);
  return data_->X;
}

std::size_t Polytope::vertex_count() const {
  return static_cast<std::size_t>(vertex_matrix().cols());
}

Vec Polytope::vertex(std::size_t i) const {
  return vertex_matrix().col(static_cast<Eigen::Index>(i));
}

const std::vector<std::vector<int>>& Polytope::active_sets() const {
  if (!data_->vertex_mode) throw DimensionTooLarge(data_->d, kMaxVertexDim);
  return data_->active;
}

bool Polytope::contains(const Vec& x, double slack) const {
  for (const auto& h : data_->hs)
    if (h.slack(x) > slack) return false;
  return true;
}

Polytope Polytope::transformed(const Mat& A, const Vec& t) const {
  auto D = std::make_shared<Data>(*data_);
  const Mat AinvT = A.inverse().transpose();
  for (auto& h : D->hs) {
    h.normal = AinvT * h.normal;
    h.offset += h.normal.dot(t);
  }
  if (D->vertex_mode && D->X.cols() > 0) {
    D->X = (A * D->X).colwise() + t;
    sort_vertices(*D);
  }
  D->generation += 1;
  return make(std::move(D));
}

Polytope clip(const Polytope& P, const Halfspace& h) { return clip_impl(P, h, false); }

DirectionalExtent extent(const Polytope& P, const Vec& u) {
  if (P.empty()) throw EmptyPolytope();
  DirectionalExtent e;
  if (!P.vertex_mode()) {
    const auto [lo, hi] = h_mode_range(P.dim(), P.halfspaces(), u);
    e.lo = lo;
    e.hi = std::max(lo, hi);
  } else {
    const Mat& X = P.vertex_matrix();
    if (X.cols() == 0) throw EmptyPolytope();
    const Vec r = X.transpose() * u;
    e.lo = r.minCoeff();
    e.hi = r.maxCoeff();
  }
  e.width = e.hi - e.lo;
  return e;
}

std::vector<Vec> vertices(const Polytope& P) {
  const Mat& X = P.vertex_matrix();
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(X.cols()));
  for (Eigen::Index k = 0; k < X.cols(); ++k) out.emplace_back(X.col(k));
  return out;
}

Polytope upper_part(const Polytope& P, const Vec& u, double p) {
  return clip(P, Halfspace{-u, -p});
}

Polytope lower_part(const Polytope& P, const Vec& u, double p) {
  return clip(P, Halfspace{u, p});
}

Polytope cross_section(const Polytope& P, const Vec& u, double p) {
  const DirectionalExtent e = extent(P, u);
  if (p < e.lo - tol::kFeas || p > e.hi + tol::kFeas) throw SliceOutOfRange(p, e.lo, e.hi);
  const double q = std::clamp(p, e.lo, e.hi);
  Polytope a = clip_impl(P, Halfspace{u, q}, true);
  return clip_impl(a, Halfspace{-u, -q}, true);
}

Polytope prism(const Polytope& base, double h) {
  const int k = base.dim();
  std::vector<Halfspace> hs;
  for (const auto& g : base.halfspaces()) {
    Halfspace e;
    e.normal = Vec::Zero(k + 1);
    e.normal.head(k) = g.normal;
    e.offset = g.offset;
    hs.push_back(e);
  }
  hs.push_back(axis_halfspace(k + 1, k, -1.0, 0.0));
  hs.push_back(axis_halfspace(k + 1, k, 1.0, h));
  return Polytope::from_halfspaces(k + 1, std::move(hs));
}

Polytope cone_over(const Polytope& base, double h) {
  const int k = base.dim();
  const Vec c = base.vertex_matrix().rowwise().mean();
  // Point (y, z) lies in the cone iff (y - (z/h) c) / (1 - z/h) is in the base, which is
  // linear in (y, z) for each base halfspace.
  std::vector<Halfspace> hs;
  for (const auto& g : base.halfspaces()) {
    Halfspace e;
    e.normal = Vec::Zero(k + 1);
    e.normal.head(k) = g.normal;
    e.normal(k) = (g.offset - g.normal.dot(c)) / h;
    e.offset = g.offset;
    hs.push_back(e);
  }
  hs.push_back(axis_halfspace(k + 1, k, -1.0, 0.0));
  hs.push_back(axis_halfspace(k + 1, k, 1.0, h));
  return Polytope::from_halfspaces(k + 1, std::move(hs));
}

Polytope embed(const Polytope& P, int d) {
  const int k = P.dim();
  std::vector<Halfspace> hs;
  for (const auto& g : P.halfspaces()) {
    Halfspace e;
    e.normal = Vec::Zero(d);
    e.normal.head(k) = g.normal;
    e.offset = g.offset;
    hs.push_back(e);
  }
  for (int i = k; i < d; ++i) {
    hs.push_back(axis_halfspace(d, i, 1.0, 0.0));
    hs.push_back(axis_halfspace(d, i, -1.0, 0.0));
  }
  return Polytope::from_halfspaces(d, std::move(hs));
}

Mat enumerate_vertices_bruteforce(int d, const std::vector<Halfspace>& hs) {
  const int m = static_cast<int>(hs.size());
  std::vector<Vec> pts;
  if (m >= d) {
    std::vector<int> idx(d);
    std::iota(idx.begin(), idx.end(), 0);
    Mat A(d, d);
    Vec b(d);
    while (true) {
      for (int r = 0; r < d; ++r) {
        A.row(r) = hs[idx[r]].normal.transpose();
        b(r) = hs[idx[r]].offset;
      }
      Eigen::FullPivLU<Mat> lu(A);
      lu.setThreshold(1e-10);
      if (lu.rank() == d) {
        const Vec x = lu.solve(b);
        bool ok = true;
        for (const auto& h : hs) {
          if (h.slack(x) > tol::kFeas) {
            ok = false;
            break;
          }
        }
        if (ok) {
          bool dup = false;
          for (const auto& q : pts) dup = dup || (q - x).cwiseAbs().maxCoeff() <= tol::kMerge;
          if (!dup) pts.push_back(x);
        }
      }
      int r = d - 1;
      while (r >= 0 && idx[r] == m - d + r) --r;
      if (r < 0) break;
      ++idx[r];
      for (int q = r + 1; q < d; ++q) idx[q] = idx[q - 1] + 1;
    }
  }
  Polytope::Data tmp;
  tmp.d = d;
  tmp.X.resize(d, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t q = 0; q < pts.size(); ++q) tmp.X.col(static_cast<Eigen::Index>(q)) = pts[q];
  sort_vertices(tmp);
  return tmp.X;
}

}  // namespace cslab
