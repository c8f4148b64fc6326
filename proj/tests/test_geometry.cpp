#include <cmath>
#include <vector>

#include "cslab/convex.hpp"
#include "cslab/errors.hpp"
#include "cslab/geometry.hpp"
#include "cslab/lp.hpp"
#include "cslab/rng.hpp"

#include "gtest/gtest.h"

namespace {

using namespace cslab;

Vec vec(std::initializer_list<double> xs)
{
    Vec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

Halfspace hs(std::initializer_list<double> n, double b) { return {vec(n), b}; }

// Vertex set as sorted columns for comparison.
void expect_vertices(const Polytope& P, const std::vector<Vec>& want)
{
    const Mat& X = P.vertex_matrix();
    ASSERT_EQ(static_cast<std::size_t>(X.cols()), want.size());
    for (const Vec& w : want) {
        bool found = false;
        for (Eigen::Index k = 0; k < X.cols() && !found; ++k)
            found = (X.col(k) - w).cwiseAbs().maxCoeff() < 1e-12;
        EXPECT_TRUE(found) << "missing vertex " << w.transpose();
    }
}

TEST(Clip, AxisCutOfSquare)
{
    const Polytope P = clip(Polytope::unit_cube(2), hs({1, 0}, 0.5));
    expect_vertices(P, {vec({0, 0}), vec({0.5, 0}), vec({0.5, 1}), vec({0, 1})});
    EXPECT_GT(P.generation(), Polytope::unit_cube(2).generation());
}

TEST(Clip, RedundantConstraintIsDropped)
{
    const Polytope S = Polytope::unit_cube(2);
    const Polytope P = clip(S, hs({1, 0}, 2.0));
    expect_vertices(P, {vec({0, 0}), vec({1, 0}), vec({1, 1}), vec({0, 1})});
    EXPECT_EQ(P.halfspaces().size(), 4u);
}

TEST(Clip, CornerOfCubeIsSimplex)
{
    const Polytope P = clip(Polytope::unit_cube(3), hs({1, 1, 1}, 0.5));
    expect_vertices(P, {vec({0, 0, 0}), vec({0.5, 0, 0}), vec({0, 0.5, 0}), vec({0, 0, 0.5})});
}

TEST(Clip, EmptyResultIsValue)
{
    const Polytope P = clip(Polytope::unit_cube(2), hs({1, 1}, -1.0));
    EXPECT_TRUE(P.empty());
    EXPECT_THROW(extent(P, vec({1, 0})), EmptyPolytope);
}

TEST(Extent, SquareAndDiagonal)
{
    const Polytope S = Polytope::unit_cube(2);
    const DirectionalExtent a = extent(S, vec({1, 0}));
    EXPECT_DOUBLE_EQ(a.lo, 0.0);
    EXPECT_DOUBLE_EQ(a.hi, 1.0);
    EXPECT_DOUBLE_EQ(a.width, 1.0);
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(extent(S, vec({r, r})).width, std::sqrt(2.0), 1e-15);
}

TEST(Extent, SimplexAlongAxis)
{
    const Polytope P = clip(Polytope::unit_cube(3), hs({1, 1, 1}, 0.5));
    const DirectionalExtent e = extent(P, vec({1, 0, 0}));
    EXPECT_NEAR(e.lo, 0.0, 1e-15);
    EXPECT_NEAR(e.hi, 0.5, 1e-15);
}

TEST(Vertices, SegmentSquareAndPrism)
{
    EXPECT_EQ(vertices(Polytope::unit_cube(1)).size(), 2u);
    EXPECT_EQ(vertices(Polytope::unit_cube(2)).size(), 4u);
    const Polytope P = clip(Polytope::unit_cube(3), hs({1, 1, 0}, 1.0));
    const Mat ref = enumerate_vertices_bruteforce(3, P.halfspaces());
    EXPECT_EQ(P.vertex_count(), 6u);
    ASSERT_EQ(ref.cols(), 6);
    EXPECT_LT((ref - P.vertex_matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Vertices, LexicographicOrder)
{
    const Polytope P = clip(Polytope::unit_cube(3), hs({2, -1, 0.5}, 0.7));
    const Mat& X = P.vertex_matrix();
    for (Eigen::Index k = 1; k < X.cols(); ++k) {
        bool less = false;
        for (Eigen::Index r = 0; r < X.rows(); ++r) {
            if (X(r, k - 1) < X(r, k)) { less = true; break; }
            if (X(r, k - 1) > X(r, k)) break;
        }
        EXPECT_TRUE(less);
    }
}

TEST(Vertices, TooManyConstraints)
{
    const std::size_t old = max_halfspaces();
    set_max_halfspaces(6);
    Polytope P = Polytope::unit_cube(2);
    P = clip(P, hs({1, 1}, 1.8));
    P = clip(P, hs({-1, 1}, 0.8));
    EXPECT_THROW(clip(P, hs({1, -1}, 0.8)), TooManyConstraints);
    set_max_halfspaces(old);
}

TEST(CrossSection, SegmentOfSquare)
{
    const Polytope K = cross_section(Polytope::unit_cube(2), vec({1, 0}), 0.5);
    expect_vertices(K, {vec({0.5, 0}), vec({0.5, 1})});
}

TEST(CrossSection, SquareOfCube)
{
    const Polytope K = cross_section(Polytope::unit_cube(3), vec({1, 0, 0}), 0.25);
    EXPECT_EQ(K.vertex_count(), 4u);
    EXPECT_EQ(affine_dimension(K), 2);
    EXPECT_NEAR(polytope_measures(K).volume, 1.0, 1e-14);
}

TEST(CrossSection, TriangleOfSimplex)
{
    const Polytope simplex = clip(Polytope::unit_cube(3), hs({1, 1, 1}, 1.0));
    const Polytope K = cross_section(simplex, vec({1, 0, 0}), 0.5);
    expect_vertices(K, {vec({0.5, 0, 0}), vec({0.5, 0.5, 0}), vec({0.5, 0, 0.5})});
}

TEST(CrossSection, OutOfRangeAndDegenerate)
{
    const Polytope S = Polytope::unit_cube(2);
    EXPECT_THROW(cross_section(S, vec({1, 0}), 1.5), SliceOutOfRange);
    const double r = 1.0 / std::sqrt(2.0);
    const Polytope corner = cross_section(S, vec({r, r}), std::sqrt(2.0));
    EXPECT_EQ(corner.vertex_count(), 1u);
}

TEST(Parts, UpperAndLowerPartitionTheSquare)
{
    const Polytope S = Polytope::unit_cube(2);
    const Vec u = vec({0.6, 0.8});
    const Polytope up = upper_part(S, u, 0.7), lo = lower_part(S, u, 0.7);
    EXPECT_NEAR(area_perimeter(up).area + area_perimeter(lo).area, 1.0, 1e-14);
    EXPECT_NEAR(extent(up, u).lo, 0.7, 1e-14);
    EXPECT_NEAR(extent(lo, u).hi, 0.7, 1e-14);
}

TEST(Builders, PrismConeAndEmbed)
{
    const Polytope tri = clip(Polytope::unit_cube(2), hs({1, 1}, 1.0));
    const Polytope pr = prism(tri, 2.0);
    EXPECT_EQ(pr.dim(), 3);
    EXPECT_NEAR(polytope_measures(pr).volume, 1.0, 1e-14);
    const Polytope cone = cone_over(Polytope::unit_cube(2), 1.0);
    EXPECT_EQ(cone.vertex_count(), 5u);
    EXPECT_NEAR(polytope_measures(cone).volume, 1.0 / 3.0, 1e-14);
    const Polytope seg = embed(Polytope::unit_cube(1), 3);
    EXPECT_EQ(seg.dim(), 3);
    EXPECT_EQ(affine_dimension(seg), 1);
}

TEST(Builders, TransformedScalesVolume)
{
    Mat A = Mat::Identity(3, 3) * 2.0;
    const Polytope P = Polytope::unit_cube(3).transformed(A, Vec::Zero(3));
    EXPECT_NEAR(polytope_measures(P).volume, 8.0, 1e-12);
}

TEST(HalfspaceMode, LargeDimensionUsesLp)
{
    Polytope P = Polytope::unit_cube(12);
    EXPECT_FALSE(P.vertex_mode());
    Vec u = Vec::Constant(12, 1.0 / std::sqrt(12.0));
    P = clip(P, {u, 0.5});
    const DirectionalExtent e = extent(P, u);
    EXPECT_NEAR(e.lo, 0.0, 1e-9);
    EXPECT_NEAR(e.hi, 0.5, 1e-9);
    EXPECT_THROW(P.vertex_matrix(), DimensionTooLarge);
}

TEST(Lp, SmallProblems)
{
    Mat A(3, 2);
    A << 1, 0, 0, 1, 1, 1;
    Vec b = vec({1, 1, 1.5});
    const LpResult r = lp_maximize(vec({1, 1}), A, b);
    ASSERT_EQ(r.status, LpResult::Status::Optimal);
    EXPECT_NEAR(r.value, 1.5, 1e-12);
    Mat B(2, 1);
    B << 1, -1;
    EXPECT_EQ(lp_maximize(vec({1}), B, vec({-1, -1})).status, LpResult::Status::Infeasible);
    Mat C(1, 1);
    C << -1;
    EXPECT_EQ(lp_maximize(vec({1}), C, vec({0})).status, LpResult::Status::Unbounded);
}

TEST(Planar, AreaAndPerimeter)
{
    const AreaPerimeter sq = area_perimeter(Polytope::unit_cube(2));
    EXPECT_DOUBLE_EQ(sq.area, 1.0);
    EXPECT_DOUBLE_EQ(sq.perimeter, 4.0);
    const AreaPerimeter tri = area_perimeter(clip(Polytope::unit_cube(2), hs({1, 1}, 1.0)));
    EXPECT_NEAR(tri.area, 0.5, 1e-15);
    EXPECT_NEAR(tri.perimeter, 2.0 + std::sqrt(2.0), 1e-14);
    const AreaPerimeter pent = area_perimeter(clip(Polytope::unit_cube(2), hs({1, 1}, 1.5)));
    EXPECT_NEAR(pent.area, 0.875, 1e-15);
    EXPECT_NEAR(pent.perimeter, 3.0 + std::sqrt(2.0) / 2.0, 1e-14);
    const AreaPerimeter seg = area_perimeter(cross_section(Polytope::unit_cube(2), vec({1, 0}), 0.3));
    EXPECT_EQ(seg.area, 0.0);
    EXPECT_NEAR(seg.perimeter, 2.0, 1e-15);
}

TEST(Measures, CubeBoundaryAndRidge)
{
    const PolytopeMeasures m = polytope_measures(Polytope::unit_cube(3), true);
    EXPECT_EQ(m.dim, 3);
    EXPECT_NEAR(m.volume, 1.0, 1e-14);
    EXPECT_NEAR(m.boundary, 6.0, 1e-14);
    // 12 edges with exterior angle pi/2: V_1 = 12 * (1/4) = 3.
    EXPECT_NEAR(m.ridge, 3.0, 1e-13);
}

TEST(Measures, RegularSimplexMeanWidth)
{
    // Corner simplex conv{0, e1, e2, e3}: V_1 sums edge length times (pi - dihedral angle)
    // over 2 pi. Axis edges have dihedral pi/2, the three slanted edges acos(1/sqrt3).
    const Polytope P = clip(Polytope::unit_cube(3), hs({1, 1, 1}, 1.0));
    const PolytopeMeasures m = polytope_measures(P, true);
    const double axis_edges = 3.0 * 1.0 * (M_PI - M_PI / 2.0);
    const double diag_dihedral = std::acos(1.0 / std::sqrt(3.0));
    const double diag_edges = 3.0 * std::sqrt(2.0) * (M_PI - diag_dihedral);
    EXPECT_NEAR(m.ridge, (axis_edges + diag_edges) / (2.0 * M_PI), 1e-13);
    EXPECT_NEAR(m.volume, 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(m.boundary, 1.5 + std::sqrt(3.0) / 2.0, 1e-14);
}

TEST(Hull, DistanceAndVolume)
{
    Mat pts(2, 4);
    pts << 0, 1, 1, 0, 0, 0, 1, 1;
    EXPECT_NEAR(distance_to_hull(pts, vec({2, 0.5})), 1.0, 1e-9);
    EXPECT_NEAR(distance_to_hull(pts, vec({0.5, 0.5})), 0.0, 1e-9);
    EXPECT_NEAR(distance_to_hull(pts, vec({2, 2})), std::sqrt(2.0), 1e-9);
    EXPECT_NEAR(hull_volume(pts), 1.0, 1e-14);
}

TEST(Hull, ClusteredVerticesOfThinBox)
{
    // Each corner of a 1 x 1 x 1e-4 box is repeated with 1e-10 jitter, the way long
    // sequences of cuts leave nearly coincident vertices behind.
    Rng rng(12);
    Mat pts(3, 8 * 5 + 20);
    Eigen::Index c = 0;
    for (int corner = 0; corner < 8; ++corner) {
        const Vec x = vec({double(corner & 1), double((corner >> 1) & 1), 1e-4 * double((corner >> 2) & 1)});
        for (int k = 0; k < 5; ++k) pts.col(c++) = x + 1e-10 * vec({rng.normal(), rng.normal(), rng.normal()});
    }
    while (c < pts.cols()) pts.col(c++) = vec({rng.uniform(), rng.uniform(), 1e-4 * rng.uniform()});
    // Jitter can move the two large faces outward by a few 1e-10.
    EXPECT_NEAR(hull_volume(pts), 1e-4, 1e-9);
}

} // namespace
