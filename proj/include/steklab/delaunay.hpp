#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace steklab::dela {

using Vec2 = Eigen::Vector2d;

struct PolygonMesh {
    // points[0..n_boundary) are the input polygon nodes in input order
    std::vector<Vec2> points;
    int n_boundary = 0;
    std::vector<std::array<int, 3>> triangles;  // CCW
};

/// Triangulates the inside of a simple closed polygon (nodes in order, not
/// repeated) with interior points on a lattice of spacing h. All polygon
/// nodes are kept verbatim and every polygon edge appears in the output.
PolygonMesh triangulate_polygon(const std::vector<Vec2>& polygon, double h);

bool point_in_polygon(const std::vector<Vec2>& polygon, const Vec2& p);

}  // namespace steklab::dela
