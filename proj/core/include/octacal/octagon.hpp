#pragma once

#include "octacal/lines.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace octacal {

/// Eight corner points, clockwise about their centroid in image
/// coordinates (y down), index 0 anchored at the left member of the two
/// uppermost corners.
struct OctagonCorners {
    std::array<Eigen::Vector2d, 8> corners;
    int64_t frame_id = -1;

    Eigen::Vector2d centroid() const;
    double mean_side_length() const;
};

/// Vertices of the regular unit octagon (circumradius 1), same ordering
/// convention as OctagonCorners.
std::array<Eigen::Vector2d, 8> canonical_octagon();

/// Pairwise intersections of the eight lines, kept only when the
/// intersection lies within endpoint_radius of an endpoint of both parent
/// segments. Near-parallel pairs contribute nothing.
std::vector<Eigen::Vector2d> corner_candidates(const std::array<EdgeLine, 8>& lines,
                                               double endpoint_radius);

/// Gate on the corner count: exactly eight candidates pass through.
std::optional<std::array<Eigen::Vector2d, 8>> validate_count(
    const std::vector<Eigen::Vector2d>& candidates);

/// Clockwise ordering about the centroid with the upright-sign anchor
/// rule. Throws std::invalid_argument on duplicate points.
OctagonCorners order_corners(const std::array<Eigen::Vector2d, 8>& corners);

struct AffineCheckResult {
    bool pass = false;
    double residual = 0.0;   // max vertex distance after the best affine fit
    double threshold = 0.0;  // tol * mean side length
};

/// Least-squares affine map from the canonical octagon onto the corners,
/// minimized over the eight cyclic correspondences; passes when the max
/// vertex residual stays below tol * mean side length. A degenerate fitted
/// map rejects.
AffineCheckResult affine_octagon_check(const OctagonCorners& oct, double tol);

} // namespace octacal
