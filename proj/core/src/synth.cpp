#include "octacal/synth.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace octacal {

Eigen::Vector2d project_point(const Eigen::Vector3d& world, const Intrinsics& intr,
                              const CameraPose& pose) {
    const Eigen::Vector3d cam = pose.rotation * world + pose.translation;
    if (cam.z() <= 0.0) throw std::runtime_error("project_point: non-positive depth");
    return {intr.fx * cam.x() / cam.z() + intr.cx, intr.fy * cam.y() / cam.z() + intr.cy};
}

Eigen::Matrix3d homography_from_pose(const Intrinsics& intr, const CameraPose& pose) {
    Eigen::Matrix3d rt;
    rt.col(0) = pose.rotation.col(0);
    rt.col(1) = pose.rotation.col(1);
    rt.col(2) = pose.translation;
    return intr.matrix() * rt;
}

double pose_tilt_deg(const CameraPose& pose) {
    const Eigen::Vector3d plane_normal_cam = pose.rotation.col(2);
    const double c = std::clamp(std::abs(plane_normal_cam.z()), -1.0, 1.0);
    return std::acos(c) * 180.0 / std::numbers::pi;
}

namespace {

// Convex polygon as an intersection of half-planes, image coordinates,
// outward normals. s(p) = max_k (n_k . p - d_k) is negative inside, and
// |s| bounds the distance to the boundary.
struct ConvexRegion {
    std::vector<Eigen::Vector2d> normals;
    std::vector<double> offsets;

    double signed_margin(double x, double y) const {
        double s = -std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < normals.size(); ++k) {
            s = std::max(s, normals[k].x() * x + normals[k].y() * y - offsets[k]);
        }
        return s;
    }
};

ConvexRegion make_region(const std::vector<Eigen::Vector2d>& verts) {
    ConvexRegion region;
    const size_t n = verts.size();
    region.normals.reserve(n);
    region.offsets.reserve(n);
    for (size_t k = 0; k < n; ++k) {
        const Eigen::Vector2d a = verts[k];
        const Eigen::Vector2d b = verts[(k + 1) % n];
        Eigen::Vector2d e = b - a;
        const double len = e.norm();
        if (len < 1e-12) throw std::runtime_error("render: degenerate polygon edge");
        // Clockwise in y-down coordinates puts the interior right of the
        // edge; the outward normal is the edge direction rotated by -90.
        const Eigen::Vector2d outward(e.y() / len, -e.x() / len);
        region.normals.push_back(outward);
        region.offsets.push_back(outward.dot(a));
    }
    return region;
}

bool is_clockwise_convex(const std::vector<Eigen::Vector2d>& verts) {
    const size_t n = verts.size();
    for (size_t k = 0; k < n; ++k) {
        const Eigen::Vector2d d1 = verts[(k + 1) % n] - verts[k];
        const Eigen::Vector2d d2 = verts[(k + 2) % n] - verts[(k + 1) % n];
        if (d1.x() * d2.y() - d1.y() * d2.x() <= 0.0) return false;
    }
    return true;
}

void blur_region(Image& img, int x0, int y0, int x1, int y1, double sigma) {
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    const int n = 2 * radius + 1;
    std::vector<double> kernel(n);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
        sum += kernel[i + radius];
    }
    for (double& v : kernel) v /= sum;

    x0 = std::max(0, x0);
    y0 = std::max(0, y0);
    x1 = std::min(img.width - 1, x1);
    y1 = std::min(img.height - 1, y1);
    const int rw = x1 - x0 + 1;
    const int rh = y1 - y0 + 1;
    if (rw <= 0 || rh <= 0) return;

    std::vector<double> tmp(static_cast<size_t>(rw) * rh * img.channels);
    // Horizontal pass into tmp.
    for (int y = 0; y < rh; ++y)
        for (int x = 0; x < rw; ++x)
            for (int c = 0; c < img.channels; ++c) {
                double acc = 0.0;
                for (int k = -radius; k <= radius; ++k) {
                    const int xx = std::clamp(x0 + x + k, x0, x1);
                    acc += kernel[k + radius] * img.at(xx, y0 + y, c);
                }
                tmp[(static_cast<size_t>(y) * rw + x) * img.channels + c] = acc;
            }
    // Vertical pass back into the image.
    for (int y = 0; y < rh; ++y)
        for (int x = 0; x < rw; ++x)
            for (int c = 0; c < img.channels; ++c) {
                double acc = 0.0;
                for (int k = -radius; k <= radius; ++k) {
                    const int yy = std::clamp(y + k, 0, rh - 1);
                    acc += kernel[k + radius] *
                           tmp[(static_cast<size_t>(yy) * rw + x) * img.channels + c];
                }
                img.at(x0 + x, y0 + y, c) = acc;
            }
}

constexpr double kRed[3] = {0.72, 0.05, 0.08};
constexpr double kWhite[3] = {0.98, 0.98, 0.98};
constexpr double kBackground[3] = {0.46, 0.48, 0.50};

} // namespace

RenderedScene render_scene(const SceneSpec& spec, std::mt19937_64& rng) {
    const auto& ref = spec.octagon;
    const Intrinsics& intr = spec.intrinsics;

    // Inner octagon vertices in image space (exact truth).
    std::array<Eigen::Vector2d, 8> inner_ideal;
    for (int k = 0; k < 8; ++k) {
        const Eigen::Vector3d w(ref.points[k].x(), ref.points[k].y(), 0.0);
        inner_ideal[k] = project_point(w, intr, spec.pose);
    }

    // Outer (white border) octagon: inner offset outward by the border
    // width in the plane, then projected.
    const double border_m = ref.border_ratio * ref.side_length();
    const double outer_scale =
        (0.5 * ref.flat_to_flat + border_m) / (0.5 * ref.flat_to_flat);
    std::vector<Eigen::Vector2d> outer_img(8);
    for (int k = 0; k < 8; ++k) {
        const Eigen::Vector2d p = outer_scale * ref.points[k];
        outer_img[k] = project_point(Eigen::Vector3d(p.x(), p.y(), 0.0), intr, spec.pose);
    }

    // Shape controls: drop or displace a vertex of the rendered polygon
    // (the reported truth stays the ideal corners).
    std::vector<Eigen::Vector2d> inner_render(inner_ideal.begin(), inner_ideal.end());
    if (spec.perturb_vertex >= 0) {
        const int k = spec.perturb_vertex % 8;
        const double side = (inner_ideal[(k + 1) % 8] - inner_ideal[k]).norm();
        Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
        for (const auto& v : inner_render) centroid += v;
        centroid /= 8.0;
        const Eigen::Vector2d radial = (inner_render[k] - centroid).normalized();
        inner_render[k] += spec.perturb_fraction * side * radial;
    }
    if (spec.drop_vertex >= 0)
        inner_render.erase(inner_render.begin() + (spec.drop_vertex % 8));

    if (!is_clockwise_convex(inner_render) || !is_clockwise_convex(outer_img))
        throw std::runtime_error("render_scene: projected target is not convex");

    for (const auto& v : outer_img) {
        if (v.x() < 1.0 || v.x() > spec.image_width - 2.0 || v.y() < 1.0 ||
            v.y() > spec.image_height - 2.0)
            throw std::runtime_error("render_scene: octagon outside frame");
    }

    ConvexRegion inner = make_region(inner_render);
    const ConvexRegion outer = make_region(outer_img);

    // Contour noise: displace each inner edge along its outward normal.
    if (spec.contour_noise_sigma > 0.0) {
        std::normal_distribution<double> jitter(0.0, spec.contour_noise_sigma);
        for (double& d : inner.offsets) d += jitter(rng);
    }

    Image img(spec.image_width, spec.image_height, 3);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < 3; ++c) img.at(x, y, c) = kBackground[c];

    double bx0 = std::numeric_limits<double>::infinity(), by0 = bx0;
    double bx1 = -bx0, by1 = -by0;
    for (const auto& v : outer_img) {
        bx0 = std::min(bx0, v.x());
        by0 = std::min(by0, v.y());
        bx1 = std::max(bx1, v.x());
        by1 = std::max(by1, v.y());
    }
    const double slack = 3.0 * spec.contour_noise_sigma + 2.0;
    const int px0 = std::max(0, static_cast<int>(std::floor(bx0 - slack)));
    const int py0 = std::max(0, static_cast<int>(std::floor(by0 - slack)));
    const int px1 = std::min(img.width - 1, static_cast<int>(std::ceil(bx1 + slack)));
    const int py1 = std::min(img.height - 1, static_cast<int>(std::ceil(by1 + slack)));

    constexpr int kSub = 4; // 4x4 supersampling on boundary pixels
    constexpr double kMargin = 0.75;
    for (int y = py0; y <= py1; ++y) {
        for (int x = px0; x <= px1; ++x) {
            const double si = inner.signed_margin(x, y);
            const double so = outer.signed_margin(x, y);

            double red_frac, white_frac;
            if (si < -kMargin) {
                red_frac = 1.0;
                white_frac = 0.0;
            } else if (so > kMargin) {
                continue; // stays background
            } else if (si > kMargin && so < -kMargin) {
                red_frac = 0.0;
                white_frac = 1.0;
            } else {
                int in_inner = 0, in_outer = 0;
                for (int sy = 0; sy < kSub; ++sy)
                    for (int sx = 0; sx < kSub; ++sx) {
                        const double qx = x + (sx + 0.5) / kSub - 0.5;
                        const double qy = y + (sy + 0.5) / kSub - 0.5;
                        if (inner.signed_margin(qx, qy) <= 0.0)
                            ++in_inner;
                        else if (outer.signed_margin(qx, qy) <= 0.0)
                            ++in_outer;
                    }
                red_frac = in_inner / static_cast<double>(kSub * kSub);
                white_frac = in_outer / static_cast<double>(kSub * kSub);
            }
            const double bg_frac = 1.0 - red_frac - white_frac;
            for (int c = 0; c < 3; ++c)
                img.at(x, y, c) =
                    red_frac * kRed[c] + white_frac * kWhite[c] + bg_frac * kBackground[c];
        }
    }

    if (spec.blur_sigma > 0.0) {
        const int pad = static_cast<int>(std::ceil(3.0 * spec.blur_sigma)) + 1;
        blur_region(img, px0 - pad, py0 - pad, px1 + pad, py1 + pad, spec.blur_sigma);
    }

    if (spec.exposure_gain != 1.0) {
        for (double& v : img.data) v = std::clamp(v * spec.exposure_gain, 0.0, 1.0);
    }

    RenderedScene scene;
    scene.rgb = std::move(img);
    scene.tilt_deg = pose_tilt_deg(spec.pose);
    for (int k = 0; k < 8; ++k) scene.truth.corners[k] = inner_ideal[k];

    // Dense samples of the ideal contour, about 1.5 px apart.
    for (int k = 0; k < 8; ++k) {
        const Eigen::Vector2d a = inner_ideal[k];
        const Eigen::Vector2d b = inner_ideal[(k + 1) % 8];
        const int steps = std::max(2, static_cast<int>((b - a).norm() / 1.5));
        for (int s = 0; s < steps; ++s)
            scene.contour.push_back(a + (b - a) * (static_cast<double>(s) / steps));
    }
    return scene;
}

CameraPose sample_pose(std::mt19937_64& rng, const PoseRanges& ranges) {
    if (ranges.tilt_lo_deg < 10.0)
        throw std::invalid_argument("sample_pose: tilt range must stay at or above 10 deg");
    if (ranges.tilt_hi_deg <= ranges.tilt_lo_deg)
        throw std::invalid_argument("sample_pose: empty tilt range");
    if (ranges.distance_hi <= ranges.distance_lo || ranges.distance_lo <= 0.0)
        throw std::invalid_argument("sample_pose: invalid distance range");

    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double tilt = (ranges.tilt_lo_deg +
                         (ranges.tilt_hi_deg - ranges.tilt_lo_deg) * u01(rng)) *
                        std::numbers::pi / 180.0;
    const double axis_angle = 2.0 * std::numbers::pi * u01(rng);
    const double roll =
        (2.0 * u01(rng) - 1.0) * ranges.roll_deg * std::numbers::pi / 180.0;
    const double distance =
        ranges.distance_lo + (ranges.distance_hi - ranges.distance_lo) * u01(rng);

    const Eigen::Vector3d axis(std::cos(axis_angle), std::sin(axis_angle), 0.0);
    const Eigen::Matrix3d tilt_rot = Eigen::AngleAxisd(tilt, axis).toRotationMatrix();
    const Eigen::Matrix3d roll_rot =
        Eigen::AngleAxisd(roll, Eigen::Vector3d::UnitZ()).toRotationMatrix();

    CameraPose pose;
    pose.rotation = roll_rot * tilt_rot;
    // Small angular offset keeps the target near but not exactly at the
    // principal point.
    const double ox = (2.0 * u01(rng) - 1.0) * 0.05;
    const double oy = (2.0 * u01(rng) - 1.0) * 0.05;
    pose.translation = {ox * distance, oy * distance, distance};
    return pose;
}

} // namespace octacal
