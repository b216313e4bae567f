#ifndef WPCVI_IMAGE_HPP
#define WPCVI_IMAGE_HPP

#include "wpcvi/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace wpcvi {

/// 8-bit interleaved RGB raster, row-major from the top-left pixel.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // width * height * 3

    RgbImage() = default;
    RgbImage(int w, int h);

    std::uint8_t* at(int x, int y) { return pixels.data() + 3 * (static_cast<std::size_t>(y) * width + x); }
    const std::uint8_t* at(int x, int y) const {
        return pixels.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }
};

/// Binary PPM (P6, maxval <= 255). Throws ParseError on malformed input.
RgbImage decode_ppm(std::istream& in);
void encode_ppm(std::ostream& out, const RgbImage& image);

RgbImage load_image(const std::filesystem::path& path);
void save_ppm(const std::filesystem::path& path, const RgbImage& image);

/// Area-averaging (box filter) resample to target size; channels in [0, 1].
/// Returns a (target_w * target_h) x 3 matrix in row-major pixel order.
Matrix box_downscale(const RgbImage& image, int target_w, int target_h);

/// Downscales to target_w x target_h and returns one RGB row per pixel.
DataMatrix image_to_points(const RgbImage& image, int target_w = 120, int target_h = 80);

/// Builds an image from per-pixel RGB rows in [0, 1].
RgbImage points_to_image(const Matrix& rgb, int width, int height);

}  // namespace wpcvi

#endif  // WPCVI_IMAGE_HPP
