#include "octacal/octagon.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace octacal {

Eigen::Vector2d OctagonCorners::centroid() const {
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    for (const auto& p : corners) c += p;
    return c / 8.0;
}

double OctagonCorners::mean_side_length() const {
    double sum = 0.0;
    for (int i = 0; i < 8; ++i) sum += (corners[(i + 1) % 8] - corners[i]).norm();
    return sum / 8.0;
}

std::array<Eigen::Vector2d, 8> canonical_octagon() {
    // Vertex 0 is the upper-left end of the flat top edge; increasing index
    // walks clockwise in y-down image convention.
    std::array<Eigen::Vector2d, 8> v;
    const double start = -0.625 * std::numbers::pi; // -112.5 degrees
    for (int k = 0; k < 8; ++k) {
        const double a = start + k * 0.25 * std::numbers::pi;
        v[k] = {std::cos(a), std::sin(a)};
    }
    return v;
}

std::vector<Eigen::Vector2d> corner_candidates(const std::array<EdgeLine, 8>& lines,
                                               double endpoint_radius) {
    std::vector<Eigen::Vector2d> out;
    out.reserve(8);
    for (int i = 0; i < 8; ++i) {
        for (int j = i + 1; j < 8; ++j) {
            const EdgeLine& a = lines[i];
            const EdgeLine& b = lines[j];
            const double cross = a.nx * b.ny - a.ny * b.nx;
            if (std::abs(cross) < 1e-6) continue;

            // Solve n_a.p = d_a, n_b.p = d_b.
            const double x = (a.d * b.ny - b.d * a.ny) / cross;
            const double y = (a.nx * b.d - b.nx * a.d) / cross;
            const Eigen::Vector2d p(x, y);

            const double da = std::min((p - a.p0).norm(), (p - a.p1).norm());
            const double db = std::min((p - b.p0).norm(), (p - b.p1).norm());
            if (da <= endpoint_radius && db <= endpoint_radius) out.push_back(p);
        }
    }
    return out;
}

std::optional<std::array<Eigen::Vector2d, 8>> validate_count(
    const std::vector<Eigen::Vector2d>& candidates) {
    if (candidates.size() != 8) return std::nullopt;
    std::array<Eigen::Vector2d, 8> out;
    std::copy(candidates.begin(), candidates.end(), out.begin());
    return out;
}

OctagonCorners order_corners(const std::array<Eigen::Vector2d, 8>& corners) {
    for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j)
            if ((corners[i] - corners[j]).norm() < 1e-9)
                throw std::invalid_argument("order_corners: duplicate corner points");

    Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
    for (const auto& p : corners) centroid += p;
    centroid /= 8.0;

    // Increasing atan2 walks clockwise when y points down.
    std::array<int, 8> order{0, 1, 2, 3, 4, 5, 6, 7};
    std::array<double, 8> angle;
    for (int i = 0; i < 8; ++i) {
        const Eigen::Vector2d r = corners[i] - centroid;
        angle[i] = std::atan2(r.y(), r.x());
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) { return angle[a] < angle[b]; });

    // Anchor: of the two uppermost corners, the left one.
    int top1 = order[0];
    int top2 = -1;
    for (int i : order) {
        if (corners[i].y() < corners[top1].y()) top1 = i;
    }
    for (int i : order) {
        if (i == top1) continue;
        if (top2 < 0 || corners[i].y() < corners[top2].y()) top2 = i;
    }
    const int anchor = (corners[top1].x() <= corners[top2].x()) ? top1 : top2;

    int start = 0;
    for (int i = 0; i < 8; ++i)
        if (order[i] == anchor) start = i;

    OctagonCorners out;
    for (int i = 0; i < 8; ++i) out.corners[i] = corners[order[(start + i) % 8]];
    return out;
}

namespace {

// Least-squares affine map src -> dst under a fixed correspondence shift.
// Returns the max vertex residual, or nothing when the map degenerates.
std::optional<double> affine_fit_residual(const std::array<Eigen::Vector2d, 8>& src,
                                          const std::array<Eigen::Vector2d, 8>& dst,
                                          int shift) {
    Eigen::Matrix<double, 16, 6> design = Eigen::Matrix<double, 16, 6>::Zero();
    Eigen::Matrix<double, 16, 1> rhs;
    for (int k = 0; k < 8; ++k) {
        const Eigen::Vector2d& s = src[k];
        const Eigen::Vector2d& t = dst[(k + shift) % 8];
        design(2 * k, 0) = s.x();
        design(2 * k, 1) = s.y();
        design(2 * k, 2) = 1.0;
        design(2 * k + 1, 3) = s.x();
        design(2 * k + 1, 4) = s.y();
        design(2 * k + 1, 5) = 1.0;
        rhs(2 * k) = t.x();
        rhs(2 * k + 1) = t.y();
    }
    const Eigen::Matrix<double, 6, 1> params =
        design.colPivHouseholderQr().solve(rhs);

    Eigen::Matrix2d linear;
    linear << params(0), params(1), params(3), params(4);
    const Eigen::Vector2d offset(params(2), params(5));
    if (std::abs(linear.determinant()) < 1e-12) return std::nullopt;

    double max_residual = 0.0;
    for (int k = 0; k < 8; ++k) {
        const Eigen::Vector2d mapped = linear * src[k] + offset;
        max_residual = std::max(max_residual, (mapped - dst[(k + shift) % 8]).norm());
    }
    return max_residual;
}

} // namespace

AffineCheckResult affine_octagon_check(const OctagonCorners& oct, double tol) {
    const auto canon = canonical_octagon();

    AffineCheckResult result;
    result.threshold = tol * oct.mean_side_length();

    double best = std::numeric_limits<double>::infinity();
    bool any = false;
    for (int shift = 0; shift < 8; ++shift) {
        const auto residual = affine_fit_residual(canon, oct.corners, shift);
        if (!residual) continue;
        any = true;
        best = std::min(best, *residual);
    }
    if (!any) return result; // every correspondence degenerated

    result.residual = best;
    result.pass = best <= result.threshold;
    return result;
}

} // namespace octacal
