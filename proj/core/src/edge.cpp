#include "octacal/edge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace octacal {

Eigen::Vector2d Chain::centroid() const {
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    for (const auto& p : points) c += p.pos();
    return points.empty() ? c : Eigen::Vector2d(c / static_cast<double>(points.size()));
}

std::vector<SubpixelPoint> canny_nms(const GradientField& grad, double mag_threshold) {
    if (mag_threshold <= 0.0 || mag_threshold >= 1.0)
        throw std::invalid_argument("canny_nms: mag_threshold must be in (0,1)");

    double max_mag = 0.0;
    for (double m : grad.magnitude) max_mag = std::max(max_mag, m);

    std::vector<SubpixelPoint> out;
    if (max_mag <= 0.0) return out;
    const double thresh = mag_threshold * max_mag;

    for (int y = 0; y < grad.height; ++y) {
        for (int x = 0; x < grad.width; ++x) {
            const size_t i = grad.idx(x, y);
            const double m0 = grad.magnitude[i];
            if (m0 < thresh) continue;
            const double nx = grad.gx[i] / m0;
            const double ny = grad.gy[i] / m0;
            const double m_minus = grad.magnitude_at(x - nx, y - ny);
            const double m_plus = grad.magnitude_at(x + nx, y + ny);
            // Strict on the -n side so a two-pixel plateau keeps one point.
            if (m0 > m_minus && m0 >= m_plus) {
                SubpixelPoint p;
                p.x = x;
                p.y = y;
                p.nx = nx;
                p.ny = ny;
                p.strength = m0;
                out.push_back(p);
            }
        }
    }
    return out;
}

SubpixelPoint devernay_refine(const SubpixelPoint& p, const GradientField& grad) {
    const double m0 = grad.magnitude_at(p.x, p.y);
    const double m_minus = grad.magnitude_at(p.x - p.nx, p.y - p.ny);
    const double m_plus = grad.magnitude_at(p.x + p.nx, p.y + p.ny);

    SubpixelPoint refined = p;
    const double curvature = m_minus - 2.0 * m0 + m_plus;
    if (curvature >= 0.0) {
        refined.degenerate = true;
        return refined;
    }
    double delta = (m_minus - m_plus) / (2.0 * curvature);
    delta = std::clamp(delta, -0.5, 0.5);
    refined.x = p.x + delta * p.nx;
    refined.y = p.y + delta * p.ny;
    return refined;
}

namespace {

// Uniform grid over point indices for radius queries.
class PointGrid {
public:
    PointGrid(const std::vector<SubpixelPoint>& points, double cell)
        : points_(points), cell_(cell) {
        for (size_t i = 0; i < points.size(); ++i)
            cells_[key(points[i].x, points[i].y)].push_back(i);
    }

    template <typename Fn>
    void for_each_near(double x, double y, Fn&& fn) const {
        const long cx = static_cast<long>(std::floor(x / cell_));
        const long cy = static_cast<long>(std::floor(y / cell_));
        for (long dy = -1; dy <= 1; ++dy)
            for (long dx = -1; dx <= 1; ++dx) {
                auto it = cells_.find((cx + dx) * 73856093L ^ (cy + dy) * 19349663L);
                if (it == cells_.end()) continue;
                for (size_t i : it->second) fn(i);
            }
    }

private:
    long key(double x, double y) const {
        const long cx = static_cast<long>(std::floor(x / cell_));
        const long cy = static_cast<long>(std::floor(y / cell_));
        return cx * 73856093L ^ cy * 19349663L;
    }

    const std::vector<SubpixelPoint>& points_;
    double cell_;
    std::unordered_map<long, std::vector<size_t>> cells_;
};

double dist2(const SubpixelPoint& a, const SubpixelPoint& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

bool normals_compatible(const SubpixelPoint& a, const SubpixelPoint& b) {
    return a.nx * b.nx + a.ny * b.ny > 0.0;
}

} // namespace

std::vector<Chain> chain_points(const std::vector<SubpixelPoint>& points, double d_chain) {
    std::vector<Chain> chains;
    if (points.empty()) return chains;

    PointGrid grid(points, std::max(d_chain, 1e-9));
    std::vector<char> claimed(points.size(), 0);
    const double d2max = d_chain * d_chain;

    auto nearest_free = [&](const SubpixelPoint& from) -> long {
        long best = -1;
        double best_d2 = d2max;
        grid.for_each_near(from.x, from.y, [&](size_t j) {
            if (claimed[j]) return;
            if (!normals_compatible(from, points[j])) return;
            const double d2 = dist2(from, points[j]);
            if (d2 <= best_d2 && (best < 0 || d2 < best_d2 ||
                                  (d2 == best_d2 && static_cast<long>(j) < best))) {
                best_d2 = d2;
                best = static_cast<long>(j);
            }
        });
        return best;
    };

    for (size_t seed = 0; seed < points.size(); ++seed) {
        if (claimed[seed]) continue;
        claimed[seed] = 1;
        std::vector<size_t> forward{seed};
        // Grow forward from the seed, then backward from the seed.
        while (true) {
            const long next = nearest_free(points[forward.back()]);
            if (next < 0) break;
            claimed[next] = 1;
            forward.push_back(static_cast<size_t>(next));
        }
        std::vector<size_t> backward;
        while (true) {
            const auto& tail = backward.empty() ? points[seed] : points[backward.back()];
            const long next = nearest_free(tail);
            if (next < 0) break;
            claimed[next] = 1;
            backward.push_back(static_cast<size_t>(next));
        }

        Chain chain;
        chain.points.reserve(forward.size() + backward.size());
        for (auto it = backward.rbegin(); it != backward.rend(); ++it)
            chain.points.push_back(points[*it]);
        for (size_t i : forward) chain.points.push_back(points[i]);
        if (chain.points.size() < 2) continue;

        const auto& head = chain.points.front();
        const auto& tail = chain.points.back();
        chain.closed = chain.points.size() > 2 && dist2(head, tail) <= d2max;
        chains.push_back(std::move(chain));
    }

    std::stable_sort(chains.begin(), chains.end(), [](const Chain& a, const Chain& b) {
        return a.points.size() > b.points.size();
    });
    return chains;
}

const Chain& select_longest_chain(const std::vector<Chain>& chains,
                                  const Eigen::Vector2d& roi_center) {
    if (chains.empty()) throw std::runtime_error("select_longest_chain: no contour chains");
    const Chain* best = &chains.front();
    for (const Chain& c : chains) {
        if (c.points.size() > best->points.size()) {
            best = &c;
        } else if (c.points.size() == best->points.size() && &c != best) {
            const double d_best = (best->centroid() - roi_center).norm();
            const double d_c = (c.centroid() - roi_center).norm();
            if (d_c < d_best) best = &c;
        }
    }
    return *best;
}

} // namespace octacal
