#pragma once

#include "octacal/calib.hpp"
#include "octacal/image.hpp"

#include <Eigen/Core>

#include <optional>
#include <random>
#include <vector>

namespace octacal {

/// World-to-camera rigid transform; R orthonormal with det +1.
struct CameraPose {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();
};

struct SceneSpec {
    Intrinsics intrinsics;
    CameraPose pose;
    ReferenceOctagon octagon;
    int image_width = 1280;
    int image_height = 720;
    double contour_noise_sigma = 0.0; // perpendicular edge jitter, pixels
    double blur_sigma = 0.0;          // Gaussian blur after rasterization
    double exposure_gain = 1.0;
    // Occlusion/shape controls for robustness experiments.
    int drop_vertex = -1;               // render a 7-gon by removing this vertex
    int perturb_vertex = -1;            // displace one vertex ...
    double perturb_fraction = 0.0;      // ... by this fraction of the side length
};

/// Exact pinhole projection (Eq.-style s m = A [R|t] M). Throws on
/// non-positive depth.
Eigen::Vector2d project_point(const Eigen::Vector3d& world, const Intrinsics& intr,
                              const CameraPose& pose);

/// Plane-to-image homography A [r1 r2 t] of a Z=0 plane.
Eigen::Matrix3d homography_from_pose(const Intrinsics& intr, const CameraPose& pose);

struct RenderedScene {
    Image rgb;
    OctagonCorners truth;                  // projected inner-octagon corners
    std::vector<Eigen::Vector2d> contour;  // dense samples of the true contour
    double tilt_deg = 0.0;
};

/// Rasterize the target: red inner octagon, white border, gray background,
/// 4x4 supersampled, then optional contour jitter, blur, and gain. Throws
/// when the octagon falls outside the frame.
RenderedScene render_scene(const SceneSpec& spec, std::mt19937_64& rng);

struct PoseRanges {
    double tilt_lo_deg = 15.0;
    double tilt_hi_deg = 60.0;
    double distance_lo = 5.0;  // meters
    double distance_hi = 12.0; // meters
    double roll_deg = 10.0;    // roll sampled in [-roll, +roll]
};

/// Uniform pose over the admissible band: tilt about a random in-plane
/// axis, bounded roll, distance along the optical axis, small image-plane
/// offset. Tilt ranges reaching below 10 degrees are rejected (focal
/// recovery degenerates near fronto-parallel).
CameraPose sample_pose(std::mt19937_64& rng, const PoseRanges& ranges);

/// Tilt angle (degrees) between the plane normal and the optical axis.
double pose_tilt_deg(const CameraPose& pose);

} // namespace octacal
