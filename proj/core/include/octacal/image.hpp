#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace octacal {

/// Error raised by image decoding and other I/O-facing raster operations.
class ImageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Row-major floating-point image. Samples live in [0,1]; 1 channel
/// (scalar) or 3 channels (RGB or HSV, interleaved).
struct Image {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<double> data;

    Image() = default;
    Image(int w, int h, int c, double fill = 0.0)
        : width(w), height(h), channels(c),
          data(static_cast<size_t>(w) * h * c, fill) {}

    double& at(int x, int y, int c = 0) {
        return data[(static_cast<size_t>(y) * width + x) * channels + c];
    }
    double at(int x, int y, int c = 0) const {
        return data[(static_cast<size_t>(y) * width + x) * channels + c];
    }

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }
    size_t sample_count() const { return data.size(); }
};

/// One boolean per pixel, same dimensions as the source image.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> bits;

    BinaryMask() = default;
    BinaryMask(int w, int h)
        : width(w), height(h), bits(static_cast<size_t>(w) * h, 0) {}

    uint8_t& at(int x, int y) { return bits[static_cast<size_t>(y) * width + x]; }
    uint8_t at(int x, int y) const { return bits[static_cast<size_t>(y) * width + x]; }
    size_t count() const;
};

/// Hue band with wraparound plus saturation/value bounds for red extraction.
/// Hue is an angle fraction in [0,1); the band covers [hue_lo,1) U [0,hue_hi].
struct RedBand {
    double hue_lo = 0.95;
    double hue_hi = 0.05;
    double sat_min = 0.35;
    double val_min = 0.15;
    double val_max = 1.0;

    bool contains(double h, double s, double v) const {
        bool hue_ok = (h >= hue_lo && h < 1.0) || (h >= 0.0 && h <= hue_hi);
        return hue_ok && s >= sat_min && v >= val_min && v <= val_max;
    }
};

/// Decode an 8- or 16-bit PNG (RGB or grayscale) into [0,1] samples.
/// Alpha is discarded; palette images are expanded to RGB.
Image load_png(const std::string& path);

/// Encode a 1- or 3-channel image as an 8-bit PNG.
void save_png(const std::string& path, const Image& img);

/// Standard hexcone RGB -> HSV. H in [0,1) as angle/360, S and V in [0,1].
/// Achromatic pixels get H = 0.
Image rgb_to_hsv(const Image& img);

/// Threshold an HSV image against a wraparound red band.
BinaryMask red_mask(const Image& hsv, const RedBand& band = RedBand{});

/// View a mask as a {0,1} scalar image so gradients land on mask transitions.
Image mask_to_image(const BinaryMask& mask);

/// Channel-mean luminance of a 3-channel image (identity on 1-channel).
Image luminance(const Image& img);

} // namespace octacal
