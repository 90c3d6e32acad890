#include "octacal/calib.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace octacal {

ReferenceOctagon make_reference_octagon(double flat_to_flat_m, double border_ratio) {
    if (flat_to_flat_m <= 0.0)
        throw std::invalid_argument("reference octagon: flat-to-flat must be positive");
    if (border_ratio < 0.0)
        throw std::invalid_argument("reference octagon: border ratio must be non-negative");

    ReferenceOctagon ref;
    ref.flat_to_flat = flat_to_flat_m;
    ref.border_ratio = border_ratio;
    const double circumradius = 0.5 * flat_to_flat_m / std::cos(std::numbers::pi / 8.0);
    const auto canon = canonical_octagon();
    for (int i = 0; i < 8; ++i) ref.points[i] = circumradius * canon[i];
    return ref;
}

Eigen::Vector2d Homography::apply(const Eigen::Vector2d& plane_pt) const {
    const Eigen::Vector3d m = h * Eigen::Vector3d(plane_pt.x(), plane_pt.y(), 1.0);
    if (std::abs(m.z()) < 1e-15)
        throw std::runtime_error("homography: point mapped to infinity");
    return {m.x() / m.z(), m.y() / m.z()};
}

Homography normalize_homography(const Eigen::Matrix3d& h) {
    const double norm = h.norm();
    if (norm < 1e-15) throw std::invalid_argument("normalize_homography: zero matrix");
    Homography out;
    out.h = h / norm;
    if (out.h(2, 2) < 0.0) out.h = -out.h;
    return out;
}

namespace {

// Hartley conditioning: centroid to the origin, mean distance sqrt(2).
Eigen::Matrix3d conditioning_transform(const std::array<Eigen::Vector2d, 8>& pts) {
    Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
    for (const auto& p : pts) centroid += p;
    centroid /= 8.0;

    double mean_dist = 0.0;
    for (const auto& p : pts) mean_dist += (p - centroid).norm();
    mean_dist /= 8.0;
    const double scale = (mean_dist > 1e-15) ? std::numbers::sqrt2 / mean_dist : 1.0;

    Eigen::Matrix3d t = Eigen::Matrix3d::Identity();
    t(0, 0) = scale;
    t(1, 1) = scale;
    t(0, 2) = -scale * centroid.x();
    t(1, 2) = -scale * centroid.y();
    return t;
}

} // namespace

Homography dlt_homography(const std::array<Eigen::Vector2d, 8>& world,
                          const OctagonCorners& image) {
    const Eigen::Matrix3d t_world = conditioning_transform(world);
    const Eigen::Matrix3d t_image = conditioning_transform(image.corners);

    Eigen::Matrix<double, 16, 9> design = Eigen::Matrix<double, 16, 9>::Zero();
    for (int k = 0; k < 8; ++k) {
        const Eigen::Vector3d w =
            t_world * Eigen::Vector3d(world[k].x(), world[k].y(), 1.0);
        const Eigen::Vector3d m =
            t_image * Eigen::Vector3d(image.corners[k].x(), image.corners[k].y(), 1.0);
        const double u = m.x() / m.z();
        const double v = m.y() / m.z();
        design.row(2 * k) << -w.x(), -w.y(), -w.z(), 0, 0, 0, u * w.x(), u * w.y(), u * w.z();
        design.row(2 * k + 1) << 0, 0, 0, -w.x(), -w.y(), -w.z(), v * w.x(), v * w.y(),
            v * w.z();
    }

    Eigen::JacobiSVD<Eigen::Matrix<double, 16, 9>> svd(design, Eigen::ComputeFullV);
    // A rank-deficient design (collinear points) makes H ambiguous.
    if (svd.singularValues()(7) < 1e-9 * svd.singularValues()(0))
        throw std::invalid_argument("dlt_homography: degenerate point configuration");

    const Eigen::Matrix<double, 9, 1> hvec = svd.matrixV().col(8);
    Eigen::Matrix3d h_cond;
    h_cond << hvec(0), hvec(1), hvec(2), hvec(3), hvec(4), hvec(5), hvec(6), hvec(7), hvec(8);

    const Eigen::Matrix3d h = t_image.inverse() * h_cond * t_world;
    return normalize_homography(h);
}

std::optional<FocalResult> focal_from_homography(const Eigen::Matrix3d& h, double cx,
                                                 double cy, double cond_max,
                                                 FocalFailure* failure) {
    const Eigen::Vector3d h1 = h.col(0);
    const Eigen::Vector3d h2 = h.col(1);

    // With B = A^-T A^-1 and alpha = 1/fx^2, beta = 1/fy^2:
    //   h_i' B h_j = alpha u_i u_j + beta v_i v_j + h_i3 h_j3,
    // where u_i = h_i1 - cx h_i3 and v_i = h_i2 - cy h_i3.
    const double u1 = h1(0) - cx * h1(2);
    const double v1 = h1(1) - cy * h1(2);
    const double u2 = h2(0) - cx * h2(2);
    const double v2 = h2(1) - cy * h2(2);
    const double w1 = h1(2);
    const double w2 = h2(2);

    Eigen::Matrix2d m;
    m << u1 * u2, v1 * v2, u1 * u1 - u2 * u2, v1 * v1 - v2 * v2;
    const Eigen::Vector2d b(-w1 * w2, -(w1 * w1 - w2 * w2));

    const Eigen::JacobiSVD<Eigen::Matrix2d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double smin = svd.singularValues()(1);
    const double smax = svd.singularValues()(0);
    const double cond = (smin > 0.0) ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(cond < cond_max)) {
        if (failure) *failure = FocalFailure::degenerate_view;
        return std::nullopt;
    }

    const Eigen::Vector2d alpha_beta = svd.solve(b);
    if (alpha_beta(0) <= 0.0 || alpha_beta(1) <= 0.0) {
        if (failure) *failure = FocalFailure::negative_focal;
        return std::nullopt;
    }

    FocalResult result;
    result.fx = 1.0 / std::sqrt(alpha_beta(0));
    result.fy = 1.0 / std::sqrt(alpha_beta(1));
    result.condition = cond;
    return result;
}

Eigen::Vector2d focal_constraint_residuals(const Eigen::Matrix3d& h, double fx, double fy,
                                           double cx, double cy) {
    Eigen::Matrix3d a = Eigen::Matrix3d::Identity();
    a(0, 0) = fx;
    a(1, 1) = fy;
    a(0, 2) = cx;
    a(1, 2) = cy;
    const Eigen::Matrix3d a_inv = a.inverse();
    const Eigen::Matrix3d b = a_inv.transpose() * a_inv;
    const Eigen::Vector3d h1 = h.col(0);
    const Eigen::Vector3d h2 = h.col(1);
    return {h1.dot(b * h2), h1.dot(b * h1) - h2.dot(b * h2)};
}

double reprojection_error(const Homography& h, const std::array<Eigen::Vector2d, 8>& world,
                          const OctagonCorners& image) {
    double sum_sq = 0.0;
    for (int k = 0; k < 8; ++k) {
        const Eigen::Vector2d projected = h.apply(world[k]);
        sum_sq += (image.corners[k] - projected).squaredNorm();
    }
    return std::sqrt(sum_sq / 8.0);
}

} // namespace octacal
