#pragma once

#include "octacal/edge.hpp"
#include "octacal/gradient.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace octacal {

/// Line in normal form n.x = d with |n| = 1 and d >= 0, plus the segment
/// endpoints spanned by its support points.
struct EdgeLine {
    double nx = 0.0;
    double ny = 0.0;
    double d = 0.0;
    Eigen::Vector2d p0 = Eigen::Vector2d::Zero();
    Eigen::Vector2d p1 = Eigen::Vector2d::Zero();
    int support_count = 0;

    Eigen::Vector2d normal() const { return {nx, ny}; }
    Eigen::Vector2d direction() const { return {-ny, nx}; }
    double distance(const Eigen::Vector2d& p) const {
        return std::abs(nx * p.x() + ny * p.y() - d);
    }
    double length() const { return (p1 - p0).norm(); }
    Eigen::Vector2d midpoint() const { return 0.5 * (p0 + p1); }
};

struct RansacConfig {
    double p = 0.999;       // target probability of hitting a support pair
    double tol = 0.5;       // perpendicular support distance, pixels
    int min_support = 5;    // fewer support points than this is a failure
    int min_iterations = 8; // floor on the iteration count per edge
};

/// Eq.-style iteration count K = ceil(log(1-p)/log(1-w^2)) with
/// w = 1/(8-i)^2. The i = 7 singularity (w = 1) is defined as K = 1.
long iteration_count(double p, int edge_index);

/// Number of unordered point pairs, saturating instead of overflowing.
long pair_count(size_t n);

/// Total-least-squares line through a point set: smallest eigenvector of
/// the 2x2 scatter matrix, endpoints at the projections of the extreme
/// points along the line.
EdgeLine fit_line_tls(std::span<const Eigen::Vector2d> points);

struct RansacResult {
    EdgeLine line;
    std::vector<size_t> support; // indices into the input point set
};

/// One edge of the octagon: RANSAC over point pairs followed by a TLS fit
/// of the best support set. Iterations = clamp(iteration_count, floor,
/// pair count). Returns nothing when the best support is too small.
std::optional<RansacResult> ransac_fit_edge(std::span<const Eigen::Vector2d> points,
                                            const RansacConfig& cfg, int edge_index,
                                            std::mt19937_64& rng);

struct OctagonEdges {
    std::array<EdgeLine, 8> lines;
    std::array<std::vector<Eigen::Vector2d>, 8> supports;
};

/// Fit all eight edges sequentially, removing each support set before the
/// next fit. Returns nothing as soon as one edge cannot be fitted.
std::optional<OctagonEdges> fit_all_edges(const Chain& contour, const RansacConfig& cfg,
                                          std::mt19937_64& rng);

/// Perpendicular-search refinement of one line against an image gradient.
/// Samples `samples` points on the segment, moves each to the nearest
/// local magnitude maximum along the line normal (subpixel parabola), and
/// refits only when more than half of the moves stay within
/// boundary_fraction * border width. boundary_fraction = 0 disables
/// refinement; the border width is segment length * border_ratio.
EdgeLine refine_line(const EdgeLine& line, const GradientField& grad, int samples,
                     double boundary_fraction, double border_ratio);

} // namespace octacal
