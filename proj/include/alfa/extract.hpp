#pragma once

#include "alfa/grid.hpp"
#include "alfa/image.hpp"
#include "alfa/protocol.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace alfa {

// Per-module mean intensity cutoffs: a module is dark when its mean is
// strictly below the threshold. 238 is the fallback for tiny-module styles.
constexpr uint8_t kIntensityThreshold = 189;
constexpr uint8_t kSmallModuleThreshold = 238;
constexpr double kLightFractionCutoff = 0.65;

struct ImageTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnidentifiableError : std::runtime_error {
    UnidentifiableError() : std::runtime_error("cannot identify fancy QR code") {}
};

struct FormatInfo {
    EccLevel ecc = EccLevel::L;
    int mask = 0;
    bool copy1_valid = false;
    bool copy2_valid = false;
    bool copies_disagree = false;
};

struct ExtractionResult {
    BinaryGrid grid;
    FormatInfo format;
    uint8_t threshold_used = kIntensityThreshold;
    double module_size = 0.0; // pixels per module, fractional
    double light_fraction_first_pass = 0.0;
};

namespace detail {

// Summed-area table so the 40-version scan stays O(side^2) per version.
struct IntegralImage {
    int width = 0;
    int height = 0;
    std::vector<uint64_t> sums; // (w+1) x (h+1)

    explicit IntegralImage(const GrayImage& img) : width(img.width), height(img.height) {
        sums.assign(static_cast<size_t>(width + 1) * (height + 1), 0);
        for (int r = 0; r < height; ++r) {
            uint64_t row_sum = 0;
            for (int c = 0; c < width; ++c) {
                row_sum += img.at(r, c);
                at(r + 1, c + 1) = at(r, c + 1) + row_sum;
            }
        }
    }

    uint64_t& at(int r, int c) { return sums[static_cast<size_t>(r) * (width + 1) + c]; }
    uint64_t at(int r, int c) const { return sums[static_cast<size_t>(r) * (width + 1) + c]; }

    // Mean over pixel rows [r0,r1) x cols [c0,c1).
    double block_mean(int r0, int c0, int r1, int c1) const {
        const uint64_t total = at(r1, c1) - at(r0, c1) - at(r1, c0) + at(r0, c0);
        return static_cast<double>(total) / (static_cast<double>(r1 - r0) * (c1 - c0));
    }
};

inline BinaryGrid sample_grid_impl(const IntegralImage& integral, int version, uint8_t threshold) {
    const int m = side_modules(version);
    const int side_px = std::min(integral.width, integral.height);
    const double s = static_cast<double>(side_px) / m;
    if (s < 1.0) {
        throw ImageTooSmall("module size below one pixel for version " + std::to_string(version));
    }
    const int off_r = (integral.height - side_px) / 2;
    const int off_c = (integral.width - side_px) / 2;

    BinaryGrid grid(version);
    for (int r = 0; r < m; ++r) {
        int r0 = off_r + static_cast<int>(std::floor(r * s));
        int r1 = off_r + static_cast<int>(std::floor((r + 1) * s));
        r1 = std::min(r1, integral.height);
        if (r1 <= r0) r1 = r0 + 1;
        for (int c = 0; c < m; ++c) {
            int c0 = off_c + static_cast<int>(std::floor(c * s));
            int c1 = off_c + static_cast<int>(std::floor((c + 1) * s));
            c1 = std::min(c1, integral.width);
            if (c1 <= c0) c1 = c0 + 1;
            grid.set(r, c, integral.block_mean(r0, c0, r1, c1) < threshold);
        }
    }
    return grid;
}

} // namespace detail

// Cell (r,c) is dark iff the mean luminance of its pixel block is < threshold.
inline BinaryGrid sample_grid(const GrayImage& img, int version, uint8_t threshold) {
    detail::IntegralImage integral(img);
    return detail::sample_grid_impl(integral, version, threshold);
}

// Both 15-bit format copies, accumulated MSB-first along the standard layout.
inline std::pair<uint16_t, uint16_t> read_format_bits(const BinaryGrid& grid) {
    uint16_t w1 = 0, w2 = 0;
    for (const auto& cell : format_copy1_cells(grid.side())) {
        w1 = static_cast<uint16_t>((w1 << 1) | grid.at(cell.row, cell.col));
    }
    for (const auto& cell : format_copy2_cells(grid.side())) {
        w2 = static_cast<uint16_t>((w2 << 1) | grid.at(cell.row, cell.col));
    }
    return {w1, w2};
}

// Exact membership test against the 32-entry table. Copy 1 wins when both
// are valid but decode differently; the disagreement is flagged.
inline std::optional<FormatInfo> verify_format(uint16_t copy1, uint16_t copy2) {
    auto m1 = lookup_format(copy1);
    auto m2 = lookup_format(copy2);
    if (!m1 && !m2) return std::nullopt;

    FormatInfo info;
    info.copy1_valid = m1.has_value();
    info.copy2_valid = m2.has_value();
    const FormatSequence& chosen = m1 ? *m1 : *m2;
    info.ecc = chosen.ecc;
    info.mask = chosen.mask;
    if (m1 && m2 && (m1->ecc != m2->ecc || m1->mask != m2->mask)) info.copies_disagree = true;
    return info;
}

// Version scan 1..40, lowest verifying version wins. Each candidate is
// sampled at 189 first; when the light fraction exceeds 65% the grid is
// resampled at 238 before format verification.
inline ExtractionResult extract(const GrayImage& img) {
    if (img.width < 1 || img.height < 1) throw UnidentifiableError();
    const int longer = std::max(img.width, img.height);
    if (std::abs(img.width - img.height) > 0.02 * longer) throw UnidentifiableError();

    detail::IntegralImage integral(img);
    const int side_px = std::min(img.width, img.height);

    for (int v = kMinVersion; v <= kMaxVersion; ++v) {
        const int m = side_modules(v);
        if (side_px < m) break; // modules would be under one pixel from here on

        BinaryGrid grid = detail::sample_grid_impl(integral, v, kIntensityThreshold);
        const double cells = static_cast<double>(m) * m;
        const double light_fraction = (cells - grid.count_dark()) / cells;

        uint8_t threshold = kIntensityThreshold;
        if (light_fraction > kLightFractionCutoff) {
            grid = detail::sample_grid_impl(integral, v, kSmallModuleThreshold);
            threshold = kSmallModuleThreshold;
        }

        auto [w1, w2] = read_format_bits(grid);
        if (auto format = verify_format(w1, w2)) {
            ExtractionResult res{std::move(grid), *format, threshold,
                                 static_cast<double>(side_px) / m, light_fraction};
            return res;
        }
    }
    throw UnidentifiableError();
}

} // namespace alfa
