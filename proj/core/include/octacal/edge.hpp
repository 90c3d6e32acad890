#pragma once

#include "octacal/gradient.hpp"

#include <Eigen/Core>

#include <vector>

namespace octacal {

/// Contour point with subpixel position and the unit gradient normal it
/// was refined along. `degenerate` marks points whose parabola fit had
/// non-negative curvature (offset kept at zero).
struct SubpixelPoint {
    double x = 0.0;
    double y = 0.0;
    double nx = 0.0;
    double ny = 0.0;
    double strength = 0.0;
    bool degenerate = false;

    Eigen::Vector2d pos() const { return {x, y}; }
    Eigen::Vector2d normal() const { return {nx, ny}; }
};

/// Ordered run of neighboring contour points.
struct Chain {
    std::vector<SubpixelPoint> points;
    bool closed = false;

    Eigen::Vector2d centroid() const;
};

/// Non-maximum suppression along the gradient normal. A pixel survives iff
/// its magnitude is at least mag_threshold * max(magnitude) and is a local
/// maximum against the magnitudes interpolated 1 px away on either side of
/// the normal. Survivors carry integer positions; refinement comes later.
std::vector<SubpixelPoint> canny_nms(const GradientField& grad, double mag_threshold);

/// Devernay correction: move the point along its normal to the vertex of
/// the parabola through the three magnitude samples at -1, 0, +1 px. The
/// offset is clamped to [-0.5, 0.5]; a non-concave sample triple keeps the
/// point in place and raises the `degenerate` flag.
SubpixelPoint devernay_refine(const SubpixelPoint& p, const GradientField& grad);

/// Greedy nearest-neighbor chaining. A link requires distance <= d_chain
/// and normals within 90 degrees. Chains shorter than 2 points are
/// dropped; output is sorted by descending point count.
std::vector<Chain> chain_points(const std::vector<SubpixelPoint>& points, double d_chain);

/// The chain with the most points; ties go to the chain whose centroid is
/// nearest roi_center. Throws std::runtime_error on an empty list.
const Chain& select_longest_chain(const std::vector<Chain>& chains,
                                  const Eigen::Vector2d& roi_center);

} // namespace octacal
