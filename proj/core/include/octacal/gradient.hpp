#pragma once

#include "octacal/image.hpp"

#include <vector>

namespace octacal {

/// Per-pixel image gradient from convolution with sampled
/// Gaussian-derivative kernels. magnitude[p] = hypot(gx[p], gy[p]).
struct GradientField {
    int width = 0;
    int height = 0;
    double sigma = 0.0;
    std::vector<double> gx;
    std::vector<double> gy;
    std::vector<double> magnitude;

    size_t idx(int x, int y) const { return static_cast<size_t>(y) * width + x; }
    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }

    /// Bilinear magnitude lookup at a subpixel position; coordinates are
    /// clamped to the field (consistent with the replicated-border kernels).
    double magnitude_at(double x, double y) const;
};

/// Smoothed derivative of a single-channel image. Kernel radius is
/// ceil(3*sigma); borders are handled by edge replication. The derivative
/// kernel is normalized so a unit linear ramp yields exactly unit slope.
GradientField gaussian_gradient(const Image& img, double sigma);

} // namespace octacal
