#pragma once

#include "alfa/image.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>

namespace alfa {

struct DegenerateImage : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyAfterCrop : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CropBox {
    int top = 0, left = 0, width = 0, height = 0;
    bool operator==(const CropBox&) const = default;
};

struct PreprocessReport {
    bool inverted = false;
    uint8_t otsu_threshold = 0;
    double white_ratio = 0.0;         // fraction of pixels >= threshold, pre-inversion
    double white_ratio_cropped = 0.0; // same measurement on the cropped result
    CropBox crop_box;
};

inline std::array<size_t, 256> histogram(const GrayImage& img) {
    std::array<size_t, 256> h{};
    for (uint8_t v : img.luminance) ++h[v];
    return h;
}

// Between-class variance maximization over the 256-bin histogram. Pixels >= t
// count as white. Ties resolve to the lowest threshold; a single-bin
// histogram degenerates to that bin value.
inline uint8_t otsu_threshold(const GrayImage& img) {
    if (img.luminance.empty()) throw DegenerateImage("otsu: empty image");
    const auto h = histogram(img);

    int lo = 0, hi = 255;
    while (h[lo] == 0) ++lo;
    while (h[hi] == 0) --hi;
    if (lo == hi) return static_cast<uint8_t>(lo);

    const double total = static_cast<double>(img.luminance.size());
    double sum_all = 0.0;
    for (int v = 0; v < 256; ++v) sum_all += static_cast<double>(v) * h[v];

    double best_var = -1.0;
    int best_t = lo + 1;
    double w0 = 0.0, sum0 = 0.0;
    for (int t = 1; t <= 255; ++t) {
        // dark class = {v < t}, white class = {v >= t}
        w0 += static_cast<double>(h[t - 1]);
        sum0 += static_cast<double>(t - 1) * h[t - 1];
        const double w1 = total - w0;
        if (w0 == 0.0 || w1 == 0.0) continue;
        const double mu0 = sum0 / w0;
        const double mu1 = (sum_all - sum0) / w1;
        const double var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (var > best_var) {
            best_var = var;
            best_t = t;
        }
    }
    return static_cast<uint8_t>(best_t);
}

inline double white_ratio_at(const GrayImage& img, uint8_t threshold) {
    size_t white = 0;
    for (uint8_t v : img.luminance) white += (v >= threshold) ? 1 : 0;
    return static_cast<double>(white) / static_cast<double>(img.luminance.size());
}

inline GrayImage negate(const GrayImage& img) {
    GrayImage out = img;
    for (auto& v : out.luminance) v = static_cast<uint8_t>(255 - v);
    return out;
}

// Binary inversion when the Otsu-binarized white ratio is strictly below 51%.
inline std::pair<GrayImage, PreprocessReport> inversion_normalize(const GrayImage& img) {
    PreprocessReport rep;
    rep.otsu_threshold = otsu_threshold(img);
    rep.white_ratio = white_ratio_at(img, rep.otsu_threshold);
    rep.inverted = rep.white_ratio < 0.51;
    rep.crop_box = {0, 0, img.width, img.height};
    return {rep.inverted ? negate(img) : img, rep};
}

namespace detail {

// A border row/column qualifies as background only when every pixel is >= 250.
constexpr uint8_t kBackgroundLuma = 250;

inline bool row_is_background(const GrayImage& img, int r, int c0, int c1) {
    for (int c = c0; c <= c1; ++c)
        if (img.at(r, c) < kBackgroundLuma) return false;
    return true;
}

inline bool col_is_background(const GrayImage& img, int c, int r0, int r1) {
    for (int r = r0; r <= r1; ++r)
        if (img.at(r, c) < kBackgroundLuma) return false;
    return true;
}

} // namespace detail

inline std::pair<GrayImage, CropBox> crop_white_background(const GrayImage& img) {
    int top = 0, bottom = img.height - 1, left = 0, right = img.width - 1;
    while (top <= bottom && detail::row_is_background(img, top, 0, img.width - 1)) ++top;
    if (top > bottom) throw EmptyAfterCrop("crop: image is entirely background");
    while (bottom > top && detail::row_is_background(img, bottom, 0, img.width - 1)) --bottom;
    while (left <= right && detail::col_is_background(img, left, top, bottom)) ++left;
    while (right > left && detail::col_is_background(img, right, top, bottom)) --right;

    CropBox box{top, left, right - left + 1, bottom - top + 1};
    if (box.width == img.width && box.height == img.height) return {img, box};

    GrayImage out{box.width, box.height, {}};
    out.luminance.resize(static_cast<size_t>(box.width) * box.height);
    for (int r = 0; r < box.height; ++r)
        for (int c = 0; c < box.width; ++c) out.set(r, c, img.at(top + r, left + c));
    return {out, box};
}

// Full preprocessing: the 51% inversion rule is evaluated on the as-loaded
// raster (quiet zones deliberately included; tightly cropped symbols hover
// near 50% white and would flip erratically), then the white background is
// trimmed from the normalized image.
inline std::pair<GrayImage, PreprocessReport> preprocess(const GrayImage& img) {
    auto [normalized, rep] = inversion_normalize(img);
    auto [cropped, box] = crop_white_background(normalized);
    rep.crop_box = box;
    rep.white_ratio_cropped = white_ratio_at(cropped, otsu_threshold(cropped));
    return {cropped, rep};
}

} // namespace alfa
