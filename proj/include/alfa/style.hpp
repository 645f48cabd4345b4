#pragma once

#include "alfa/grid.hpp"
#include "alfa/image.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace alfa {

enum class ModuleShape { Square, Circle, Rounded, Diamond };

inline const char* shape_name(ModuleShape s) {
    switch (s) {
        case ModuleShape::Square: return "square";
        case ModuleShape::Circle: return "circle";
        case ModuleShape::Rounded: return "rounded";
        case ModuleShape::Diamond: return "diamond";
    }
    return "?";
}

struct InvalidStyle : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StyleSpec {
    ModuleShape module_shape = ModuleShape::Square;
    std::vector<Rgb> fg_palette = {Rgb{0, 0, 0}};
    Rgb bg_color = Rgb{255, 255, 255};
    double module_scale = 1.0;  // drawn extent within the cell, (0,1]
    double logo_fraction = 0.0; // [0,0.3] of the symbol side, opaque center square
    bool inverted = false;
    int pixels_per_module = 8;
    int quiet_zone_modules = 4;

    void validate() const {
        if (fg_palette.empty()) throw InvalidStyle("palette must be non-empty");
        if (!(module_scale > 0.0 && module_scale <= 1.0)) {
            throw InvalidStyle("module_scale must be in (0,1]");
        }
        if (logo_fraction < 0.0 || logo_fraction > 0.3) {
            throw InvalidStyle("logo_fraction must be in [0,0.3]");
        }
        if (pixels_per_module < 2) throw InvalidStyle("pixels_per_module must be >= 2");
        if (quiet_zone_modules < 0) throw InvalidStyle("quiet_zone_modules must be >= 0");
    }
};

constexpr Rgb kLogoColor{40, 40, 40};

namespace detail {

// Shape predicates over pixel-center offsets from the cell center.
inline bool shape_covers(ModuleShape shape, double dx, double dy, double extent) {
    const double half = extent / 2.0;
    switch (shape) {
        case ModuleShape::Square:
            return std::abs(dx) <= half && std::abs(dy) <= half;
        case ModuleShape::Circle:
            return dx * dx + dy * dy <= half * half;
        case ModuleShape::Diamond:
            return std::abs(dx) + std::abs(dy) <= half;
        case ModuleShape::Rounded: {
            if (std::abs(dx) > half || std::abs(dy) > half) return false;
            const double radius = half / 2.0;
            const double cx = half - radius, cy = half - radius;
            if (std::abs(dx) <= cx || std::abs(dy) <= cy) return true;
            const double ox = std::abs(dx) - cx, oy = std::abs(dy) - cy;
            return ox * ox + oy * oy <= radius * radius;
        }
    }
    return false;
}

} // namespace detail

// Draws every dark module as the styled shape, cycling the palette by cell
// index; the optional logo is an opaque centered square, and inversion flips
// the whole raster pixelwise at the end.
inline RgbImage render(const BinaryGrid& grid, const StyleSpec& style) {
    style.validate();
    const int m = grid.side();
    const int ppm = style.pixels_per_module;
    const int q = style.quiet_zone_modules;
    const int size = (m + 2 * q) * ppm;

    RgbImage img = RgbImage::filled(size, size, style.bg_color);
    const double extent = style.module_scale * ppm;

    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) {
            if (!grid.at(r, c)) continue;
            const Rgb color =
                style.fg_palette[(static_cast<size_t>(r) * m + c) % style.fg_palette.size()];
            const int y0 = (q + r) * ppm, x0 = (q + c) * ppm;
            const double center = ppm / 2.0;
            for (int y = 0; y < ppm; ++y) {
                for (int x = 0; x < ppm; ++x) {
                    const double dy = y + 0.5 - center, dx = x + 0.5 - center;
                    if (detail::shape_covers(style.module_shape, dx, dy, extent)) {
                        img.set(y0 + y, x0 + x, color);
                    }
                }
            }
        }
    }

    if (style.logo_fraction > 0.0) {
        const int symbol_px = m * ppm;
        const int logo_px = static_cast<int>(std::lround(style.logo_fraction * symbol_px));
        const int start = q * ppm + (symbol_px - logo_px) / 2;
        for (int y = start; y < start + logo_px; ++y)
            for (int x = start; x < start + logo_px; ++x) img.set(y, x, kLogoColor);
    }

    if (style.inverted) {
        for (auto& p : img.pixels) {
            p = Rgb{static_cast<uint8_t>(255 - p.r), static_cast<uint8_t>(255 - p.g),
                    static_cast<uint8_t>(255 - p.b)};
        }
    }
    return img;
}

// Plain black-white reproduction of a binary grid.
inline RgbImage render_plain(const BinaryGrid& grid, int pixels_per_module = 8,
                             int quiet_zone_modules = 4) {
    StyleSpec plain;
    plain.pixels_per_module = pixels_per_module;
    plain.quiet_zone_modules = quiet_zone_modules;
    return render(grid, plain);
}

} // namespace alfa
