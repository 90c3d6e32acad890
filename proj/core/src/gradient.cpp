#include "octacal/gradient.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace octacal {

double GradientField::magnitude_at(double x, double y) const {
    x = std::clamp(x, 0.0, static_cast<double>(width - 1));
    y = std::clamp(y, 0.0, static_cast<double>(height - 1));
    const int x0 = std::min(static_cast<int>(x), width - 2 >= 0 ? width - 2 : 0);
    const int y0 = std::min(static_cast<int>(y), height - 2 >= 0 ? height - 2 : 0);
    const int x1 = std::min(x0 + 1, width - 1);
    const int y1 = std::min(y0 + 1, height - 1);
    const double fx = x - x0;
    const double fy = y - y0;
    const double m00 = magnitude[idx(x0, y0)];
    const double m10 = magnitude[idx(x1, y0)];
    const double m01 = magnitude[idx(x0, y1)];
    const double m11 = magnitude[idx(x1, y1)];
    return (1 - fx) * (1 - fy) * m00 + fx * (1 - fy) * m10 +
           (1 - fx) * fy * m01 + fx * fy * m11;
}

namespace {

// Horizontal pass with replicated borders; `out` may not alias `in`.
void convolve_rows(const std::vector<double>& in, std::vector<double>& out,
                   int width, int height, const std::vector<double>& kernel, int radius) {
    for (int y = 0; y < height; ++y) {
        const double* row = in.data() + static_cast<size_t>(y) * width;
        double* orow = out.data() + static_cast<size_t>(y) * width;
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                const int xx = std::clamp(x - k, 0, width - 1);
                acc += kernel[k + radius] * row[xx];
            }
            orow[x] = acc;
        }
    }
}

void convolve_cols(const std::vector<double>& in, std::vector<double>& out,
                   int width, int height, const std::vector<double>& kernel, int radius) {
    for (int y = 0; y < height; ++y) {
        double* orow = out.data() + static_cast<size_t>(y) * width;
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                const int yy = std::clamp(y - k, 0, height - 1);
                acc += kernel[k + radius] * in[static_cast<size_t>(yy) * width + x];
            }
            orow[x] = acc;
        }
    }
}

} // namespace

GradientField gaussian_gradient(const Image& img, double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("gaussian_gradient: sigma must be positive");
    if (img.channels != 1)
        throw std::invalid_argument("gaussian_gradient: expects a single-channel image");

    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    const int n = 2 * radius + 1;

    // Smoothing kernel: sampled Gaussian, normalized to unit sum.
    std::vector<double> smooth(n);
    double ssum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        smooth[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        ssum += smooth[i + radius];
    }
    for (double& v : smooth) v /= ssum;

    // Derivative kernel: sampled -x*G(x), scaled so a unit ramp responds
    // with exactly unit slope (sum_i i^2 G(i) moment normalization).
    std::vector<double> deriv(n);
    double moment = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double g = std::exp(-0.5 * (i * i) / (sigma * sigma));
        deriv[i + radius] = -static_cast<double>(i) * g;
        moment += static_cast<double>(i) * i * g;
    }
    for (double& v : deriv) v /= moment;

    GradientField field;
    field.width = img.width;
    field.height = img.height;
    field.sigma = sigma;

    const size_t npix = static_cast<size_t>(img.width) * img.height;
    std::vector<double> tmp(npix);
    field.gx.resize(npix);
    field.gy.resize(npix);
    field.magnitude.resize(npix);

    // gx: derivative along rows, smoothing along columns.
    convolve_rows(img.data, tmp, img.width, img.height, deriv, radius);
    convolve_cols(tmp, field.gx, img.width, img.height, smooth, radius);
    // gy: smoothing along rows, derivative along columns.
    convolve_rows(img.data, tmp, img.width, img.height, smooth, radius);
    convolve_cols(tmp, field.gy, img.width, img.height, deriv, radius);

    for (size_t i = 0; i < npix; ++i)
        field.magnitude[i] = std::hypot(field.gx[i], field.gy[i]);
    return field;
}

} // namespace octacal
