#include "octacal/lines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace octacal {

long iteration_count(double p, int edge_index) {
    if (p < 0.0 || p >= 1.0)
        throw std::invalid_argument("iteration_count: p must be in [0,1)");
    if (edge_index < 0 || edge_index > 7)
        throw std::invalid_argument("iteration_count: edge index must be 0..7");
    if (edge_index == 7) return 1; // w = 1, every pair is a support pair
    const double w = 1.0 / ((8.0 - edge_index) * (8.0 - edge_index));
    const double k = std::log(1.0 - p) / std::log(1.0 - w * w);
    return static_cast<long>(std::ceil(k));
}

long pair_count(size_t n) {
    if (n < 2) return 0;
    const double c = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    if (c > static_cast<double>(std::numeric_limits<long>::max()))
        return std::numeric_limits<long>::max();
    return static_cast<long>(c);
}

EdgeLine fit_line_tls(std::span<const Eigen::Vector2d> points) {
    if (points.size() < 2) throw std::invalid_argument("fit_line_tls: need at least 2 points");

    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    for (const auto& p : points) mean += p;
    mean /= static_cast<double>(points.size());

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& p : points) {
        const double dx = p.x() - mean.x();
        const double dy = p.y() - mean.y();
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }

    // Direction of largest scatter via the half-angle closed form; the
    // normal is its perpendicular (the smallest-eigenvalue eigenvector).
    const double theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
    Eigen::Vector2d dir(std::cos(theta), std::sin(theta));
    Eigen::Vector2d normal(-dir.y(), dir.x());

    double d = normal.dot(mean);
    if (d < 0.0) {
        normal = -normal;
        d = -d;
    }

    EdgeLine line;
    line.nx = normal.x();
    line.ny = normal.y();
    line.d = d;
    line.support_count = static_cast<int>(points.size());

    // Endpoints: extreme projections onto the line.
    const Eigen::Vector2d tangent(-normal.y(), normal.x());
    double t_min = std::numeric_limits<double>::infinity();
    double t_max = -std::numeric_limits<double>::infinity();
    for (const auto& p : points) {
        const double t = tangent.dot(p);
        t_min = std::min(t_min, t);
        t_max = std::max(t_max, t);
    }
    const Eigen::Vector2d foot = d * normal;
    line.p0 = foot + t_min * tangent;
    line.p1 = foot + t_max * tangent;
    return line;
}

std::optional<RansacResult> ransac_fit_edge(std::span<const Eigen::Vector2d> points,
                                            const RansacConfig& cfg, int edge_index,
                                            std::mt19937_64& rng) {
    const size_t n = points.size();
    if (n < 2) return std::nullopt;

    long iters = std::max(iteration_count(cfg.p, edge_index),
                          static_cast<long>(cfg.min_iterations));
    iters = std::min(iters, pair_count(n));

    std::uniform_int_distribution<size_t> pick_a(0, n - 1);
    std::uniform_int_distribution<size_t> pick_b(0, n - 2);

    int best_count = 0;
    std::vector<size_t> best_support;
    std::vector<size_t> support;
    support.reserve(n);

    for (long it = 0; it < iters; ++it) {
        const size_t a = pick_a(rng);
        size_t b = pick_b(rng);
        if (b >= a) ++b; // distinct pair
        const Eigen::Vector2d diff = points[b] - points[a];
        const double len = diff.norm();
        if (len < 1e-12) continue; // coincident sample, no line defined

        const double nx = -diff.y() / len;
        const double ny = diff.x() / len;
        const double d = nx * points[a].x() + ny * points[a].y();

        support.clear();
        for (size_t i = 0; i < n; ++i) {
            if (std::abs(nx * points[i].x() + ny * points[i].y() - d) <= cfg.tol)
                support.push_back(i);
        }
        if (static_cast<int>(support.size()) > best_count) {
            best_count = static_cast<int>(support.size());
            best_support = support;
            if (best_count == static_cast<int>(n)) break; // cannot improve
        }
    }

    if (best_count < cfg.min_support) return std::nullopt;

    std::vector<Eigen::Vector2d> support_pts;
    support_pts.reserve(best_support.size());
    for (size_t i : best_support) support_pts.push_back(points[i]);

    RansacResult result;
    result.line = fit_line_tls(support_pts);
    result.support = std::move(best_support);
    return result;
}

std::optional<OctagonEdges> fit_all_edges(const Chain& contour, const RansacConfig& cfg,
                                          std::mt19937_64& rng) {
    std::vector<Eigen::Vector2d> remaining;
    remaining.reserve(contour.points.size());
    for (const auto& p : contour.points) remaining.push_back(p.pos());

    OctagonEdges edges;
    for (int i = 0; i < 8; ++i) {
        auto fit = ransac_fit_edge(remaining, cfg, i, rng);
        if (!fit) return std::nullopt;

        edges.lines[i] = fit->line;
        auto& support = edges.supports[i];
        support.reserve(fit->support.size());
        for (size_t idx : fit->support) support.push_back(remaining[idx]);

        // Remove the support set before fitting the next edge.
        std::vector<char> drop(remaining.size(), 0);
        for (size_t idx : fit->support) drop[idx] = 1;
        std::vector<Eigen::Vector2d> next;
        next.reserve(remaining.size() - fit->support.size());
        for (size_t k = 0; k < remaining.size(); ++k)
            if (!drop[k]) next.push_back(remaining[k]);
        remaining = std::move(next);
    }
    return edges;
}

namespace {

// Nearest local maximum of the gradient magnitude along `normal` from
// `origin`, parabola-refined. Returns the signed offset, or nothing if no
// interior local maximum exists within the search radius.
std::optional<double> nearest_peak_offset(const GradientField& grad,
                                          const Eigen::Vector2d& origin,
                                          const Eigen::Vector2d& normal,
                                          int search_radius) {
    const int m = 2 * search_radius + 1;
    std::vector<double> mag(m);
    for (int o = -search_radius; o <= search_radius; ++o) {
        const Eigen::Vector2d q = origin + static_cast<double>(o) * normal;
        mag[o + search_radius] = grad.magnitude_at(q.x(), q.y());
    }

    std::optional<double> best;
    for (int o = -(search_radius - 1); o <= search_radius - 1; ++o) {
        const double m0 = mag[o + search_radius];
        const double mm = mag[o - 1 + search_radius];
        const double mp = mag[o + 1 + search_radius];
        if (!(m0 > mm && m0 >= mp)) continue;
        const double curvature = mm - 2.0 * m0 + mp;
        double delta = 0.0;
        if (curvature < 0.0) delta = std::clamp((mm - mp) / (2.0 * curvature), -0.5, 0.5);
        const double offset = o + delta;
        if (!best || std::abs(offset) < std::abs(*best)) best = offset;
    }
    return best;
}

} // namespace

EdgeLine refine_line(const EdgeLine& line, const GradientField& grad, int samples,
                     double boundary_fraction, double border_ratio) {
    if (boundary_fraction <= 0.0) return line;
    if (samples < 2) throw std::invalid_argument("refine_line: need at least 2 samples");
    if (boundary_fraction > 1.0)
        throw std::invalid_argument("refine_line: boundary fraction must be in [0,1]");

    const double seg_len = line.length();
    const double border_width = seg_len * border_ratio;
    const double boundary = boundary_fraction * border_width;
    if (boundary <= 0.0) return line;

    const Eigen::Vector2d normal = line.normal();
    const int search_radius = std::max(2, static_cast<int>(std::ceil(boundary)) + 1);

    std::vector<Eigen::Vector2d> refined;
    refined.reserve(samples);
    for (int j = 0; j < samples; ++j) {
        const double t = static_cast<double>(j) / (samples - 1);
        const Eigen::Vector2d sample = line.p0 + t * (line.p1 - line.p0);
        const auto offset = nearest_peak_offset(grad, sample, normal, search_radius);
        if (offset && std::abs(*offset) <= boundary)
            refined.push_back(sample + *offset * normal);
    }

    // Update only when a majority of samples moved within the boundary.
    if (static_cast<int>(refined.size()) * 2 <= samples) return line;

    EdgeLine out = fit_line_tls(refined);
    out.support_count = line.support_count;
    return out;
}

} // namespace octacal
