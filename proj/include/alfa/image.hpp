#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace alfa {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedFormat : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 8-bit luminance raster, row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> luminance;

    uint8_t at(int r, int c) const { return luminance[static_cast<size_t>(r) * width + c]; }
    void set(int r, int c, uint8_t v) { luminance[static_cast<size_t>(r) * width + c] = v; }

    static GrayImage filled(int w, int h, uint8_t v) {
        return {w, h, std::vector<uint8_t>(static_cast<size_t>(w) * h, v)};
    }
};

struct Rgb {
    uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<Rgb> pixels;

    Rgb at(int r, int c) const { return pixels[static_cast<size_t>(r) * width + c]; }
    void set(int r, int c, Rgb v) { pixels[static_cast<size_t>(r) * width + c] = v; }

    static RgbImage filled(int w, int h, Rgb v) {
        return {w, h, std::vector<Rgb>(static_cast<size_t>(w) * h, v)};
    }
};

inline uint8_t luma(Rgb p) {
    double y = 0.299 * p.r + 0.587 * p.g + 0.114 * p.b;
    return static_cast<uint8_t>(std::lround(y));
}

inline GrayImage to_gray(const RgbImage& img) {
    GrayImage g{img.width, img.height, {}};
    g.luminance.reserve(img.pixels.size());
    for (const auto& p : img.pixels) g.luminance.push_back(luma(p));
    return g;
}

namespace detail {

inline int read_pnm_token(std::istream& is) {
    // Skips whitespace and '#' comment lines, then reads one decimal token.
    for (;;) {
        int ch = is.peek();
        if (ch == '#') {
            std::string line;
            std::getline(is, line);
        } else if (std::isspace(ch)) {
            is.get();
        } else {
            break;
        }
    }
    int value = 0;
    if (!(is >> value)) throw IoError("pnm: malformed header token");
    return value;
}

} // namespace detail

// Reads binary PGM (P5) or PPM (P6) with maxval 255; color converted to
// grayscale via luma = round(0.299 R + 0.587 G + 0.114 B).
inline GrayImage read_pnm_gray(std::istream& is) {
    char magic[2] = {0, 0};
    is.read(magic, 2);
    if (!is || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6')) {
        throw UnsupportedFormat("pnm: expected P5 or P6 magic");
    }
    const bool color = magic[1] == '6';
    const int w = detail::read_pnm_token(is);
    const int h = detail::read_pnm_token(is);
    const int maxval = detail::read_pnm_token(is);
    if (w <= 0 || h <= 0) throw IoError("pnm: bad dimensions");
    if (maxval != 255) throw UnsupportedFormat("pnm: maxval must be 255");
    is.get(); // single whitespace byte before raster

    const size_t n = static_cast<size_t>(w) * h;
    std::vector<char> raw(n * (color ? 3 : 1));
    is.read(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (static_cast<size_t>(is.gcount()) != raw.size()) throw IoError("pnm: truncated raster");

    GrayImage img{w, h, {}};
    img.luminance.resize(n);
    if (color) {
        for (size_t i = 0; i < n; ++i) {
            Rgb p{static_cast<uint8_t>(raw[3 * i]), static_cast<uint8_t>(raw[3 * i + 1]),
                  static_cast<uint8_t>(raw[3 * i + 2])};
            img.luminance[i] = luma(p);
        }
    } else {
        for (size_t i = 0; i < n; ++i) img.luminance[i] = static_cast<uint8_t>(raw[i]);
    }
    return img;
}

inline GrayImage load_image(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path);
    return read_pnm_gray(f);
}

inline GrayImage load_image_from_memory(const std::string& bytes) {
    std::istringstream is(bytes);
    return read_pnm_gray(is);
}

inline void write_pgm(std::ostream& os, const GrayImage& img) {
    os << "P5\n" << img.width << " " << img.height << "\n255\n";
    os.write(reinterpret_cast<const char*>(img.luminance.data()),
             static_cast<std::streamsize>(img.luminance.size()));
}

inline void write_ppm(std::ostream& os, const RgbImage& img) {
    os << "P6\n" << img.width << " " << img.height << "\n255\n";
    for (const auto& p : img.pixels) {
        os.put(static_cast<char>(p.r));
        os.put(static_cast<char>(p.g));
        os.put(static_cast<char>(p.b));
    }
}

inline void save_pgm(const std::string& path, const GrayImage& img) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path);
    write_pgm(f, img);
}

inline void save_ppm(const std::string& path, const RgbImage& img) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path);
    write_ppm(f, img);
}

inline std::string ppm_bytes(const RgbImage& img) {
    std::ostringstream os;
    write_ppm(os, img);
    return os.str();
}

inline std::string pgm_bytes(const GrayImage& img) {
    std::ostringstream os;
    write_pgm(os, img);
    return os.str();
}

} // namespace alfa
