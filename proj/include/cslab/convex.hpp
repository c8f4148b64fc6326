#pragma once

#include <vector>

#include "cslab/geometry.hpp"

namespace cslab {

// Orthonormal frame of the affine hull of a point set (points are columns).
struct AffineFrame {
  Vec origin;  // centroid
  Mat basis;   // d x m, orthonormal columns
  int dim() const { return static_cast<int>(basis.cols()); }
  Mat coords(const Mat& pts) const { return basis.transpose() * (pts.colwise() - origin); }
};

AffineFrame affine_frame(const Mat& pts);

// Convex hull of planar points, counter-clockwise, collinear points dropped.
std::vector<Eigen::Vector2d> convex_hull_2d(std::vector<Eigen::Vector2d> pts);
double polygon_area(const std::vector<Eigen::Vector2d>& ccw);
double polygon_perimeter(const std::vector<Eigen::Vector2d>& ccw);

// k-dimensional volume of the convex hull of the columns of pts (k = pts.rows()).
// Zero when the points do not span R^k.
double hull_volume(const Mat& pts);

// Exact measures of a vertex-mode polytope in its own affine hull: m = affine dimension,
// volume = V_m, boundary = (m-1)-measure of the relative boundary (so V_{m-1} = boundary/2).
// For m = 0 the volume is 1 and the boundary 0; for m = 1 the boundary counts 2 endpoints.
// With with_ridges (m >= 3), ridge = V_{m-2}: every (m-2)-face weighted by its exterior
// angle over 2 pi.
struct PolytopeMeasures {
  int dim = 0;
  double volume = 0.0;
  double boundary = 0.0;
  double ridge = 0.0;
};
PolytopeMeasures polytope_measures(const Polytope& P, bool with_ridges = false);
int affine_dimension(const Polytope& P);

// Area and perimeter of a polytope whose affine hull has dimension <= 2. A segment has
// area 0 and perimeter twice its length.
struct AreaPerimeter {
  double area = 0.0;
  double perimeter = 0.0;
};
AreaPerimeter area_perimeter(const Polytope& P);

// Ordered boundary of a polytope with affine dimension 2, in its own plane coordinates.
std::vector<Eigen::Vector2d> planar_polygon(const Polytope& P, AffineFrame* frame = nullptr);

// Euclidean distance from x to conv(columns of pts) (Wolfe's nearest-point method).
double distance_to_hull(const Mat& pts, const Vec& x);

}  // namespace cslab
