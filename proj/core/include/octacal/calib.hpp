#pragma once

#include "octacal/octagon.hpp"

#include <Eigen/Core>

#include <array>
#include <optional>

namespace octacal {

/// Pinhole intrinsics with the principal point fixed at the image center.
struct Intrinsics {
    double fx = 0.0;
    double fy = 0.0;
    double cx = 0.0;
    double cy = 0.0;

    Eigen::Matrix3d matrix() const {
        Eigen::Matrix3d a = Eigen::Matrix3d::Identity();
        a(0, 0) = fx;
        a(1, 1) = fy;
        a(0, 2) = cx;
        a(1, 2) = cy;
        return a;
    }
};

/// Planar reference target: the eight corners of the regular inner octagon
/// in meters, Z = 0, centroid at the origin, canonical corner ordering.
struct ReferenceOctagon {
    std::array<Eigen::Vector2d, 8> points;
    double flat_to_flat = 0.0; // meters, across the inner octagon
    double border_ratio = 0.0; // white border width / inner side length

    double side_length() const { return (points[1] - points[0]).norm(); }
    double circumradius() const { return points[0].norm(); }
};

ReferenceOctagon make_reference_octagon(double flat_to_flat_m, double border_ratio);

/// Plane-to-image map, Frobenius norm 1, sign fixed so H(2,2) >= 0.
struct Homography {
    Eigen::Matrix3d h = Eigen::Matrix3d::Zero();

    /// Apply to a plane point (X, Y); throws on points mapped to infinity.
    Eigen::Vector2d apply(const Eigen::Vector2d& plane_pt) const;
};

/// Scale/sign-normalize an arbitrary nonzero 3x3 matrix into a Homography.
Homography normalize_homography(const Eigen::Matrix3d& h);

/// Normalized DLT from 8 plane-image correspondences: both point sets are
/// conditioned (centroid at origin, mean distance sqrt(2)), H comes from
/// the smallest singular vector of the stacked 16x9 design matrix. Throws
/// std::invalid_argument on degenerate (collinear) configurations.
Homography dlt_homography(const std::array<Eigen::Vector2d, 8>& world,
                          const OctagonCorners& image);

enum class FocalFailure {
    degenerate_view, // 2x2 constraint system ill-conditioned
    negative_focal,  // alpha or beta came out non-positive
};

struct FocalResult {
    double fx = 0.0;
    double fy = 0.0;
    double condition = 0.0; // condition number of the 2x2 system
};

/// Closed-form focal recovery from one homography with a known principal
/// point. The two orthonormality constraints on the first two columns of
/// H reduce to a 2x2 linear system in (1/fx^2, 1/fy^2).
std::optional<FocalResult> focal_from_homography(const Eigen::Matrix3d& h, double cx,
                                                 double cy, double cond_max = 1e4,
                                                 FocalFailure* failure = nullptr);

/// Residuals of the two focal constraints at a given (fx, fy); both vanish
/// when the intrinsics are consistent with the homography.
Eigen::Vector2d focal_constraint_residuals(const Eigen::Matrix3d& h, double fx, double fy,
                                           double cx, double cy);

/// RMS of the reprojection residuals through H. Throws when a point maps
/// to infinity.
double reprojection_error(const Homography& h, const std::array<Eigen::Vector2d, 8>& world,
                          const OctagonCorners& image);

} // namespace octacal
