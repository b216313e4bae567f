#include "wpcvi/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace wpcvi {
namespace {

// Reads the next whitespace-delimited header token, skipping '#' comments.
std::string next_token(std::istream& in) {
    std::string token;
    int ch;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while ((ch = in.get()) != EOF && ch != '\n') {
            }
            continue;
        }
        if (std::isspace(ch)) {
            if (!token.empty()) break;
            continue;
        }
        token.push_back(static_cast<char>(ch));
    }
    return token;
}

int header_int(std::istream& in, const char* what) {
    const std::string token = next_token(in);
    if (token.empty() || !std::all_of(token.begin(), token.end(), [](unsigned char c) { return std::isdigit(c); })) {
        throw ParseError(std::string("PPM: invalid ") + what + " '" + token + "'", 0, 0);
    }
    return std::stoi(token);
}

struct Tap {
    int index;
    double weight;
};

// Source taps (with coverage weights summing to 1) for each output position.
std::vector<std::vector<Tap>> box_taps(int source, int target) {
    std::vector<std::vector<Tap>> taps(static_cast<std::size_t>(target));
    const double scale = static_cast<double>(source) / target;
    for (int o = 0; o < target; ++o) {
        const double lo = o * scale;
        const double hi = (o + 1) * scale;
        for (int s = static_cast<int>(std::floor(lo)); s < std::min(source, static_cast<int>(std::ceil(hi))); ++s) {
            const double cover = std::min(hi, s + 1.0) - std::max(lo, static_cast<double>(s));
            if (cover > 0.0) taps[o].push_back({s, cover / scale});
        }
    }
    return taps;
}

}  // namespace

RgbImage::RgbImage(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3, 0) {
    if (w <= 0 || h <= 0) throw InvalidInput("image dimensions must be positive");
}

RgbImage decode_ppm(std::istream& in) {
    if (next_token(in) != "P6") throw ParseError("not a binary PPM (P6) image", 0, 0);
    const int width = header_int(in, "width");
    const int height = header_int(in, "height");
    const int maxval = header_int(in, "maxval");
    if (width <= 0 || height <= 0) throw ParseError("PPM: zero image dimension", 0, 0);
    if (maxval <= 0 || maxval > 255) throw ParseError("PPM: only 8-bit images are supported", 0, 0);

    RgbImage image(width, height);
    in.read(reinterpret_cast<char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(image.pixels.size())) throw ParseError("PPM: truncated pixel data", 0, 0);
    if (maxval != 255) {
        for (auto& v : image.pixels) v = static_cast<std::uint8_t>(std::lround(v * 255.0 / maxval));
    }
    return image;
}

void encode_ppm(std::ostream& out, const RgbImage& image) {
    out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
}

RgbImage load_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open image " + path.string());
    return decode_ppm(in);
}

void save_ppm(const std::filesystem::path& path, const RgbImage& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write " + path.string());
    encode_ppm(out, image);
}

Matrix box_downscale(const RgbImage& image, int target_w, int target_h) {
    if (target_w <= 0 || target_h <= 0) throw InvalidInput("target size must be positive");
    if (image.width <= 0 || image.height <= 0) throw InvalidInput("image has zero dimension");
    const auto xs = box_taps(image.width, target_w);
    const auto ys = box_taps(image.height, target_h);
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(target_w) * target_h, 3);
    for (int oy = 0; oy < target_h; ++oy) {
        for (int ox = 0; ox < target_w; ++ox) {
            const Eigen::Index row = static_cast<Eigen::Index>(oy) * target_w + ox;
            for (const Tap& ty : ys[oy]) {
                for (const Tap& tx : xs[ox]) {
                    const std::uint8_t* px = image.at(tx.index, ty.index);
                    const double w = ty.weight * tx.weight / 255.0;
                    for (int ch = 0; ch < 3; ++ch) out(row, ch) += w * px[ch];
                }
            }
        }
    }
    return out.cwiseMax(0.0).cwiseMin(1.0);
}

DataMatrix image_to_points(const RgbImage& image, int target_w, int target_h) {
    return DataMatrix(box_downscale(image, target_w, target_h));
}

RgbImage points_to_image(const Matrix& rgb, int width, int height) {
    if (rgb.rows() != static_cast<Eigen::Index>(width) * height || rgb.cols() != 3) {
        throw InvalidInput("pixel matrix does not match image size");
    }
    RgbImage image(width, height);
    for (Eigen::Index i = 0; i < rgb.rows(); ++i) {
        for (int ch = 0; ch < 3; ++ch) {
            const double v = std::clamp(rgb(i, ch), 0.0, 1.0);
            image.pixels[static_cast<std::size_t>(i) * 3 + ch] = static_cast<std::uint8_t>(std::lround(v * 255.0));
        }
    }
    return image;
}

}  // namespace wpcvi
