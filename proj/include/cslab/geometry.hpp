#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

namespace cslab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

namespace tol {
inline constexpr double kFeas = 1e-9;   // feasibility slack
inline constexpr double kAct = 1e-9;    // "tight" for active sets and pruning
inline constexpr double kMerge = 1e-10; // vertices closer than this (max-norm) are merged
}  // namespace tol

// Above this dimension polytopes keep only their halfspaces; extents come from an LP.
inline constexpr int kMaxVertexDim = 8;

void set_max_halfspaces(std::size_t n);
std::size_t max_halfspaces();

// { x : <normal, x> <= offset }
struct Halfspace {
  Vec normal;
  double offset = 0.0;

  double slack(const Vec& x) const { return normal.dot(x) - offset; }
};

struct DirectionalExtent {
  double lo = 0.0;
  double hi = 0.0;
  double width = 0.0;
};

// Immutable convex polytope. Copies share storage.
//
// Vertex mode (d <= kMaxVertexDim): vertices are kept sorted lexicographically together
// with the set of halfspaces tight at each vertex. Halfspace-only mode (larger d): no
// vertices, extents by linear programming.
class Polytope {
 public:
  Polytope();

  static Polytope unit_cube(int d);
  static Polytope box(const Vec& lo, const Vec& hi);
  // Bounded intersection of halfspaces; vertices by brute-force enumeration.
  static Polytope from_halfspaces(int d, std::vector<Halfspace> hs);

  int dim() const;
  bool empty() const;
  bool vertex_mode() const;
  std::uint64_t generation() const;

  const std::vector<Halfspace>& halfspaces() const;
  // Protected halfspaces (construction-time constraints and forced slice planes) are
  // never pruned.
  bool is_protected(std::size_t i) const;

  const Mat& vertex_matrix() const;  // d x n, throws DimensionTooLarge in halfspace mode
  std::size_t vertex_count() const;
  Vec vertex(std::size_t i) const;
  const std::vector<std::vector<int>>& active_sets() const;

  bool contains(const Vec& x, double slack = tol::kFeas) const;

  // Image under x -> A x + t with A invertible.
  Polytope transformed(const Mat& A, const Vec& t) const;

  struct Data;
  explicit Polytope(std::shared_ptr<const Data> data);
  const Data& data() const { return *data_; }

 private:
  std::shared_ptr<const Data> data_;
};

Polytope clip(const Polytope& P, const Halfspace& h);
DirectionalExtent extent(const Polytope& P, const Vec& u);
std::vector<Vec> vertices(const Polytope& P);
Polytope cross_section(const Polytope& P, const Vec& u, double p);

// S+(p;u) = {x in P : <u,x> >= p} and S-(p;u) = {x in P : <u,x> <= p}.
Polytope upper_part(const Polytope& P, const Vec& u, double p);
Polytope lower_part(const Polytope& P, const Vec& u, double p);

// base x [0, h] in one more dimension.
Polytope prism(const Polytope& base, double h);
// Cone over base (at last coordinate 0) with apex at height h over the vertex centroid.
Polytope cone_over(const Polytope& base, double h);
// Same polytope sitting in R^d, extra coordinates fixed at 0.
Polytope embed(const Polytope& P, int d);

// Reference vertex enumeration: every d-subset of constraints, solve, filter, merge.
// Returns vertices as sorted columns.
Mat enumerate_vertices_bruteforce(int d, const std::vector<Halfspace>& hs);

}  // namespace cslab
