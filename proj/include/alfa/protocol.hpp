#pragma once

#include "alfa/grid.hpp"
#include "alfa/qr_types.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace alfa {

// ---------------------------------------------------------------------------
// Format information: 15-bit word = BCH(15,5)-encoded (ecc bits || mask bits),
// XORed with a fixed mask word. Two copies are placed around the finders.
// ---------------------------------------------------------------------------

constexpr uint16_t kFormatXorMask = 0x5412;
constexpr uint16_t kFormatBchGenerator = 0x537; // x^10+x^8+x^5+x^4+x^2+x+1

struct FormatSequence {
    uint16_t bits = 0; // masked 15-bit word as written into the symbol
    EccLevel ecc = EccLevel::L;
    int mask = 0;
};

namespace detail {

inline uint16_t bch_remainder(uint32_t value, uint32_t generator, int gen_degree, int shift) {
    uint32_t rem = value << shift;
    for (int bit = shift + gen_degree - 1; bit >= gen_degree; --bit) {
        if (rem & (1u << bit)) rem ^= generator << (bit - gen_degree);
    }
    return static_cast<uint16_t>(rem);
}

} // namespace detail

inline uint16_t format_word(EccLevel ecc, int mask) {
    if (mask < 0 || mask > 7) throw std::invalid_argument("mask id out of [0,7]");
    uint32_t data = static_cast<uint32_t>(ecc_indicator_bits(ecc)) << 3 | static_cast<uint32_t>(mask);
    uint16_t rem = detail::bch_remainder(data, kFormatBchGenerator, 10, 10);
    return static_cast<uint16_t>(((data << 10) | rem) ^ kFormatXorMask);
}

// All 32 sequences in deterministic order: ecc major (L,M,Q,H), mask minor.
inline const std::vector<FormatSequence>& format_sequences() {
    static const std::vector<FormatSequence> table = [] {
        std::vector<FormatSequence> t;
        t.reserve(32);
        for (int e = 0; e < 4; ++e) {
            auto ecc = static_cast<EccLevel>(e);
            for (int m = 0; m < 8; ++m) t.push_back({format_word(ecc, m), ecc, m});
        }
        // Self-check: BCH(15,5) pairwise distance is 7; XOR mask preserves it.
        for (size_t i = 0; i < t.size(); ++i) {
            for (size_t j = i + 1; j < t.size(); ++j) {
                int d = __builtin_popcount(t[i].bits ^ t[j].bits);
                if (d < 7) throw std::logic_error("format table failed distance-7 self-check");
            }
        }
        return t;
    }();
    return table;
}

inline std::optional<FormatSequence> lookup_format(uint16_t word) {
    for (const auto& fs : format_sequences()) {
        if (fs.bits == (word & 0x7FFF)) return fs;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Version information (versions >= 7): 18-bit word, 6 data bits + 12 BCH bits.
// ---------------------------------------------------------------------------

constexpr uint32_t kVersionBchGenerator = 0x1F25; // x^12+x^11+x^10+x^9+x^8+x^5+x^2+1

inline uint32_t version_info_word(int version) {
    if (version < 7 || version > kMaxVersion) throw std::invalid_argument("version info needs v in [7,40]");
    uint16_t rem = detail::bch_remainder(static_cast<uint32_t>(version), kVersionBchGenerator, 12, 12);
    return (static_cast<uint32_t>(version) << 12) | rem;
}

// ---------------------------------------------------------------------------
// Alignment patterns. Stored as the published 40-row coordinate table; the
// cartesian product minus finder-overlapping positions gives the 5x5 centers.
// ---------------------------------------------------------------------------

inline const std::vector<int>& alignment_coords(int version) {
    static const std::array<std::vector<int>, 41> table = {{
        {},                              // index 0 unused
        {},                              // v1
        {6, 18},                         // v2
        {6, 22},                         // v3
        {6, 26},                         // v4
        {6, 30},                         // v5
        {6, 34},                         // v6
        {6, 22, 38},                     // v7
        {6, 24, 42},                     // v8
        {6, 26, 46},                     // v9
        {6, 28, 50},                     // v10
        {6, 30, 54},                     // v11
        {6, 32, 58},                     // v12
        {6, 34, 62},                     // v13
        {6, 26, 46, 66},                 // v14
        {6, 26, 48, 70},                 // v15
        {6, 26, 50, 74},                 // v16
        {6, 30, 54, 78},                 // v17
        {6, 30, 56, 82},                 // v18
        {6, 30, 58, 86},                 // v19
        {6, 34, 62, 90},                 // v20
        {6, 28, 50, 72, 94},             // v21
        {6, 26, 50, 74, 98},             // v22
        {6, 30, 54, 78, 102},            // v23
        {6, 28, 54, 80, 106},            // v24
        {6, 32, 58, 84, 110},            // v25
        {6, 30, 58, 86, 114},            // v26
        {6, 34, 62, 90, 118},            // v27
        {6, 26, 50, 74, 98, 122},        // v28
        {6, 30, 54, 78, 102, 126},       // v29
        {6, 26, 52, 78, 104, 130},       // v30
        {6, 30, 56, 82, 108, 134},       // v31
        {6, 34, 60, 86, 112, 138},       // v32
        {6, 30, 58, 86, 114, 142},       // v33
        {6, 34, 62, 90, 118, 146},       // v34
        {6, 30, 54, 78, 102, 126, 150},  // v35
        {6, 24, 50, 76, 102, 128, 154},  // v36
        {6, 28, 54, 80, 106, 132, 158},  // v37
        {6, 32, 58, 84, 110, 136, 162},  // v38
        {6, 26, 54, 82, 110, 138, 166},  // v39
        {6, 30, 58, 86, 114, 142, 170},  // v40
    }};
    if (version < kMinVersion || version > kMaxVersion) {
        throw std::invalid_argument("version out of range [1,40]");
    }
    return table[static_cast<size_t>(version)];
}

struct Coord {
    int row = 0;
    int col = 0;
    bool operator==(const Coord&) const = default;
};

namespace detail {

// Finder-plus-separator corner regions occupy an 8x8 block at three corners.
inline bool overlaps_finder_region(int r, int c, int side) {
    auto hits = [&](int r0, int c0) {
        return r + 2 >= r0 && r - 2 <= r0 + 7 && c + 2 >= c0 && c - 2 <= c0 + 7;
    };
    return hits(0, 0) || hits(0, side - 8) || hits(side - 8, 0);
}

} // namespace detail

// Centers of placed 5x5 alignment patterns; empty for version 1, sorted
// row-major. Positions whose pattern would overlap a finder region are
// excluded, which drops exactly the three corner combinations.
inline std::vector<Coord> alignment_centers(int version) {
    const auto& coords = alignment_coords(version);
    const int side = side_modules(version);
    std::vector<Coord> out;
    for (int r : coords) {
        for (int c : coords) {
            if (!detail::overlaps_finder_region(r, c, side)) out.push_back({r, c});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Canonical function-pattern geometry, shared by the extractor, the FAST
// recovery and the encoder.
// ---------------------------------------------------------------------------

// 7x7 finder: dark ring, light 5x5 ring, dark 3x3 center.
inline bool finder_cell(int i, int j) {
    if (i == 0 || i == 6 || j == 0 || j == 6) return true;
    return i >= 2 && i <= 4 && j >= 2 && j <= 4;
}

// 5x5 alignment: dark ring, light 3x3 ring, dark center. di,dj in [-2,2].
inline bool alignment_cell(int di, int dj) {
    if (di == -2 || di == 2 || dj == -2 || dj == 2) return true;
    return di == 0 && dj == 0;
}

// Timing track runs along row 6 and column 6 between the separators.
inline bool timing_cell_dark(int coord) { return coord % 2 == 0; }

inline std::array<Coord, 3> finder_origins(int side) {
    return {Coord{0, 0}, Coord{0, side - 7}, Coord{side - 7, 0}};
}

// True where a module belongs to a function or reserved region: finder,
// separator, timing, alignment, format, version info, dark module.
inline BoolGrid function_pattern_mask(int version) {
    const int m = side_modules(version);
    BoolGrid mask(m);

    for (const auto& o : finder_origins(m)) {
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j) mask.set(o.row + i, o.col + j, true);
    }
    // Separators: one-module light strips framing each finder.
    for (int k = 0; k < 8; ++k) {
        mask.set(7, k, true);
        mask.set(k, 7, true);
        mask.set(7, m - 1 - k, true);
        mask.set(k, m - 8, true);
        mask.set(m - 8, k, true);
        mask.set(m - 1 - k, 7, true);
    }
    // Timing tracks.
    for (int k = 8; k <= m - 9; ++k) {
        mask.set(6, k, true);
        mask.set(k, 6, true);
    }
    // Alignment patterns.
    for (const auto& ctr : alignment_centers(version)) {
        for (int di = -2; di <= 2; ++di)
            for (int dj = -2; dj <= 2; ++dj) mask.set(ctr.row + di, ctr.col + dj, true);
    }
    // Format areas (both copies) and the dark module at (4v+9, 8).
    for (int k = 0; k <= 8; ++k) {
        mask.set(8, k, true);
        mask.set(k, 8, true);
    }
    for (int k = 0; k < 8; ++k) {
        mask.set(8, m - 1 - k, true);
        mask.set(m - 1 - k, 8, true);
    }
    mask.set(m - 8, 8, true);
    // Version information blocks, v >= 7.
    if (version >= 7) {
        for (int b = 0; b < 18; ++b) {
            mask.set(b / 3, m - 11 + b % 3, true);
            mask.set(m - 11 + b % 3, b / 3, true);
        }
    }
    return mask;
}

// Cell order of the two 15-bit format copies, least placement index first;
// accumulating MSB-first over this order yields the table word.
inline std::array<Coord, 15> format_copy1_cells(int /*side*/) {
    return {Coord{8, 0}, {8, 1}, {8, 2}, {8, 3}, {8, 4}, {8, 5}, {8, 7}, {8, 8},
            {7, 8}, {5, 8}, {4, 8}, {3, 8}, {2, 8}, {1, 8}, {0, 8}};
}

inline std::array<Coord, 15> format_copy2_cells(int side) {
    std::array<Coord, 15> cells{};
    int k = 0;
    for (int r = side - 1; r >= side - 7; --r) cells[k++] = {r, 8};
    for (int c = side - 8; c <= side - 1; ++c) cells[k++] = {8, c};
    return cells;
}

} // namespace alfa
