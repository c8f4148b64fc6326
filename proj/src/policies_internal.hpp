#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cslab/policies.hpp"

namespace cslab::detail {

// Counter-clockwise boundary of a 2-D knowledge set (1 or 2 points when degenerate).
std::vector<Eigen::Vector2d> plane_polygon(const Polytope& S);
// Part of a convex polygon on one side of <u,x> = p.
std::vector<Eigen::Vector2d> clip_polygon(const std::vector<Eigen::Vector2d>& poly,
                                          const Eigen::Vector2d& u, double p, bool keep_upper);
// Length of the chord {<u,x> = p}.
double chord_length(const std::vector<Eigen::Vector2d>& poly, const Eigen::Vector2d& u, double p);

std::unique_ptr<Policy> make_basic(const std::string& name, const PolicyOptions& opt);
std::unique_ptr<Policy> make_search(const std::string& name, int d, const PolicyOptions& opt);

}  // namespace cslab::detail
