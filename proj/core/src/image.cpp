#include "octacal/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numeric>

namespace octacal {

size_t BinaryMask::count() const {
    return static_cast<size_t>(std::count(bits.begin(), bits.end(), uint8_t{1}));
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

} // namespace

Image load_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw ImageError("cannot open PNG file: " + path);

    png_byte header[8];
    if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8) != 0)
        throw ImageError("not a PNG file: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw ImageError("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw ImageError("png_create_info_struct failed");
    }
    std::vector<png_bytep> row_ptrs;
    std::vector<png_byte> raw;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ImageError("libpng decode error: " + path);
    }

    png_init_io(png, fp.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    const png_byte color_type = png_get_color_type(png, info);
    const png_byte bit_depth = png_get_bit_depth(png, info);

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    const png_byte out_color = png_get_color_type(png, info);
    const png_byte out_depth = png_get_bit_depth(png, info);
    const int channels = (out_color == PNG_COLOR_TYPE_GRAY) ? 1 : 3;

    if (out_color != PNG_COLOR_TYPE_GRAY && out_color != PNG_COLOR_TYPE_RGB) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ImageError("unsupported PNG color type after expansion: " + path);
    }
    if (out_depth != 8 && out_depth != 16) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ImageError("unsupported PNG bit depth: " + path);
    }

    const size_t row_bytes = png_get_rowbytes(png, info);
    raw.resize(row_bytes * height);
    row_ptrs.resize(height);
    for (int y = 0; y < height; ++y) row_ptrs[y] = raw.data() + row_bytes * y;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    Image img(width, height, channels);
    if (out_depth == 8) {
        for (int y = 0; y < height; ++y) {
            const png_byte* row = raw.data() + row_bytes * y;
            for (int x = 0; x < width * channels; ++x)
                img.data[(static_cast<size_t>(y) * width * channels) + x] = row[x] / 255.0;
        }
    } else {
        // PNG stores 16-bit samples big-endian.
        for (int y = 0; y < height; ++y) {
            const png_byte* row = raw.data() + row_bytes * y;
            for (int x = 0; x < width * channels; ++x) {
                const unsigned v = (static_cast<unsigned>(row[2 * x]) << 8) | row[2 * x + 1];
                img.data[(static_cast<size_t>(y) * width * channels) + x] = v / 65535.0;
            }
        }
    }
    return img;
}

void save_png(const std::string& path, const Image& img) {
    if (img.channels != 1 && img.channels != 3)
        throw ImageError("save_png expects 1 or 3 channels");
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw ImageError("cannot open for writing: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw ImageError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw ImageError("png_create_info_struct failed");
    }
    std::vector<png_byte> raw;
    std::vector<png_bytep> row_ptrs;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw ImageError("libpng encode error: " + path);
    }

    png_init_io(png, fp.get());
    png_set_IHDR(png, info, img.width, img.height, 8,
                 img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    raw.resize(static_cast<size_t>(img.width) * img.height * img.channels);
    for (size_t i = 0; i < raw.size(); ++i) {
        const double v = std::clamp(img.data[i], 0.0, 1.0);
        raw[i] = static_cast<png_byte>(std::lround(v * 255.0));
    }
    row_ptrs.resize(img.height);
    for (int y = 0; y < img.height; ++y)
        row_ptrs[y] = raw.data() + static_cast<size_t>(y) * img.width * img.channels;
    png_write_image(png, row_ptrs.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

Image rgb_to_hsv(const Image& img) {
    if (img.channels != 3) throw ImageError("rgb_to_hsv expects a 3-channel image");
    Image out(img.width, img.height, 3);
    const size_t n = static_cast<size_t>(img.width) * img.height;
    for (size_t i = 0; i < n; ++i) {
        const double r = img.data[3 * i + 0];
        const double g = img.data[3 * i + 1];
        const double b = img.data[3 * i + 2];
        const double maxc = std::max({r, g, b});
        const double minc = std::min({r, g, b});
        const double delta = maxc - minc;

        double h = 0.0;
        if (delta > 0.0) {
            if (maxc == r)
                h = std::fmod((g - b) / delta, 6.0);
            else if (maxc == g)
                h = (b - r) / delta + 2.0;
            else
                h = (r - g) / delta + 4.0;
            h /= 6.0;
            if (h < 0.0) h += 1.0;
        }
        const double s = (maxc > 0.0) ? delta / maxc : 0.0;
        out.data[3 * i + 0] = h;
        out.data[3 * i + 1] = s;
        out.data[3 * i + 2] = maxc;
    }
    return out;
}

BinaryMask red_mask(const Image& hsv, const RedBand& band) {
    if (hsv.channels != 3) throw ImageError("red_mask expects a 3-channel HSV image");
    BinaryMask mask(hsv.width, hsv.height);
    const size_t n = static_cast<size_t>(hsv.width) * hsv.height;
    for (size_t i = 0; i < n; ++i) {
        mask.bits[i] = band.contains(hsv.data[3 * i], hsv.data[3 * i + 1], hsv.data[3 * i + 2])
                           ? 1 : 0;
    }
    return mask;
}

Image mask_to_image(const BinaryMask& mask) {
    Image out(mask.width, mask.height, 1);
    for (size_t i = 0; i < mask.bits.size(); ++i) out.data[i] = mask.bits[i] ? 1.0 : 0.0;
    return out;
}

Image luminance(const Image& img) {
    if (img.channels == 1) return img;
    if (img.channels != 3) throw ImageError("luminance expects 1 or 3 channels");
    Image out(img.width, img.height, 1);
    const size_t n = static_cast<size_t>(img.width) * img.height;
    for (size_t i = 0; i < n; ++i)
        out.data[i] = (img.data[3 * i] + img.data[3 * i + 1] + img.data[3 * i + 2]) / 3.0;
    return out;
}

} // namespace octacal
