#pragma once

#include "alfa/features.hpp"
#include "alfa/grid.hpp"
#include "alfa/protocol.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace alfa {

struct PayloadTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedVersion : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// GF(256) arithmetic with primitive polynomial x^8+x^4+x^3+x^2+1 (0x11D).
// ---------------------------------------------------------------------------

namespace gf256 {

struct Tables {
    std::array<uint8_t, 512> exp{};
    std::array<int, 256> log{};

    Tables() {
        int x = 1;
        for (int i = 0; i < 255; ++i) {
            exp[i] = static_cast<uint8_t>(x);
            log[x] = i;
            x <<= 1;
            if (x & 0x100) x ^= 0x11D;
        }
        for (int i = 255; i < 512; ++i) exp[i] = exp[i - 255];
        log[0] = -1;
    }
};

inline const Tables& tables() {
    static const Tables t;
    return t;
}

inline uint8_t mul(uint8_t a, uint8_t b) {
    if (a == 0 || b == 0) return 0;
    const auto& t = tables();
    return t.exp[t.log[a] + t.log[b]];
}

inline uint8_t pow_alpha(int e) { return tables().exp[((e % 255) + 255) % 255]; }

} // namespace gf256

// Reed-Solomon generator polynomial (x-a^0)(x-a^1)...(x-a^(n-1)), returned
// with the leading coefficient first.
inline std::vector<uint8_t> rs_generator(int degree) {
    std::vector<uint8_t> g{1};
    for (int d = 0; d < degree; ++d) {
        std::vector<uint8_t> next(g.size() + 1, 0);
        const uint8_t root = gf256::pow_alpha(d);
        for (size_t i = 0; i < g.size(); ++i) {
            next[i] ^= g[i];
            next[i + 1] ^= gf256::mul(g[i], root);
        }
        g = std::move(next);
    }
    return g;
}

inline std::vector<uint8_t> rs_ec_codewords(const std::vector<uint8_t>& data, int ec_len) {
    const auto gen = rs_generator(ec_len);
    std::vector<uint8_t> rem(data);
    rem.resize(data.size() + static_cast<size_t>(ec_len), 0);
    for (size_t i = 0; i < data.size(); ++i) {
        const uint8_t factor = rem[i];
        if (factor == 0) continue;
        for (size_t j = 1; j < gen.size(); ++j) {
            rem[i + j] ^= gf256::mul(gen[j], factor);
        }
    }
    return {rem.begin() + static_cast<long>(data.size()), rem.end()};
}

// ---------------------------------------------------------------------------
// Block structure for versions 1..10, all four ECC levels.
// ---------------------------------------------------------------------------

struct BlockSpec {
    int ec_per_block = 0;
    int group1_blocks = 0;
    int group1_data = 0;
    int group2_blocks = 0;
    int group2_data = 0;

    int total_data() const { return group1_blocks * group1_data + group2_blocks * group2_data; }
    int total_blocks() const { return group1_blocks + group2_blocks; }
};

inline const BlockSpec& block_spec(int version, EccLevel ecc) {
    // Indexed [version-1][ecc as L,M,Q,H].
    static const BlockSpec table[10][4] = {
        {{7, 1, 19, 0, 0}, {10, 1, 16, 0, 0}, {13, 1, 13, 0, 0}, {17, 1, 9, 0, 0}},      // v1
        {{10, 1, 34, 0, 0}, {16, 1, 28, 0, 0}, {22, 1, 22, 0, 0}, {28, 1, 16, 0, 0}},    // v2
        {{15, 1, 55, 0, 0}, {26, 1, 44, 0, 0}, {18, 2, 17, 0, 0}, {22, 2, 13, 0, 0}},    // v3
        {{20, 1, 80, 0, 0}, {18, 2, 32, 0, 0}, {26, 2, 24, 0, 0}, {16, 4, 9, 0, 0}},     // v4
        {{26, 1, 108, 0, 0}, {24, 2, 43, 0, 0}, {18, 2, 15, 2, 16}, {22, 2, 11, 2, 12}}, // v5
        {{18, 2, 68, 0, 0}, {16, 4, 27, 0, 0}, {24, 4, 19, 0, 0}, {28, 4, 15, 0, 0}},    // v6
        {{20, 2, 78, 0, 0}, {18, 4, 31, 0, 0}, {18, 2, 14, 4, 15}, {26, 4, 13, 1, 14}},  // v7
        {{24, 2, 97, 0, 0}, {22, 2, 38, 2, 39}, {22, 4, 18, 2, 19}, {26, 4, 14, 2, 15}}, // v8
        {{30, 2, 116, 0, 0}, {22, 3, 36, 2, 37}, {20, 4, 16, 4, 17}, {24, 4, 12, 4, 13}},// v9
        {{18, 2, 68, 2, 69}, {26, 4, 43, 1, 44}, {24, 6, 19, 2, 20}, {28, 6, 15, 2, 16}},// v10
    };
    if (version < 1 || version > kMaxEncodeVersion) {
        throw UnsupportedVersion("encoder supports versions 1..10, got " + std::to_string(version));
    }
    return table[version - 1][static_cast<int>(ecc)];
}

// Unused remainder bits after the final codeword, by version.
inline int remainder_bits(int version) { return (version >= 2 && version <= 6) ? 7 : 0; }

// Byte-mode payload capacity. The character count field is 8 bits for
// versions 1..9 and 16 bits for version 10.
inline int byte_mode_capacity(int version, EccLevel ecc) {
    const auto& spec = block_spec(version, ecc);
    const int header_bits = 4 + (version <= 9 ? 8 : 16);
    return (spec.total_data() * 8 - header_bits) / 8;
}

namespace detail {

class BitWriter {
public:
    void append(uint32_t value, int bits) {
        for (int b = bits - 1; b >= 0; --b) bits_.push_back((value >> b) & 1);
    }
    size_t size() const { return bits_.size(); }
    const std::vector<uint8_t>& bits() const { return bits_; }

    std::vector<uint8_t> to_bytes() const {
        std::vector<uint8_t> out((bits_.size() + 7) / 8, 0);
        for (size_t i = 0; i < bits_.size(); ++i) {
            if (bits_[i]) out[i / 8] |= static_cast<uint8_t>(0x80 >> (i % 8));
        }
        return out;
    }

private:
    std::vector<uint8_t> bits_;
};

// Data codewords: byte-mode header, payload, terminator, byte padding.
inline std::vector<uint8_t> build_data_codewords(const std::string& payload, int version,
                                                 EccLevel ecc) {
    const auto& spec = block_spec(version, ecc);
    const int capacity_bits = spec.total_data() * 8;

    BitWriter bw;
    bw.append(0b0100, 4); // byte mode
    bw.append(static_cast<uint32_t>(payload.size()), version <= 9 ? 8 : 16);
    for (unsigned char ch : payload) bw.append(ch, 8);

    const int terminator = std::min<int>(4, capacity_bits - static_cast<int>(bw.size()));
    bw.append(0, terminator);

    auto bytes = bw.to_bytes();
    const uint8_t pads[2] = {0xEC, 0x11};
    int k = 0;
    while (static_cast<int>(bytes.size()) < spec.total_data()) bytes.push_back(pads[k++ % 2]);
    return bytes;
}

// Splits data into RS blocks, computes EC codewords and interleaves both.
inline std::vector<uint8_t> assemble_codewords(const std::vector<uint8_t>& data, int version,
                                               EccLevel ecc) {
    const auto& spec = block_spec(version, ecc);
    std::vector<std::vector<uint8_t>> data_blocks, ec_blocks;
    size_t pos = 0;
    for (int b = 0; b < spec.total_blocks(); ++b) {
        const int len = b < spec.group1_blocks ? spec.group1_data : spec.group2_data;
        std::vector<uint8_t> block(data.begin() + static_cast<long>(pos),
                                   data.begin() + static_cast<long>(pos + len));
        pos += static_cast<size_t>(len);
        ec_blocks.push_back(rs_ec_codewords(block, spec.ec_per_block));
        data_blocks.push_back(std::move(block));
    }

    std::vector<uint8_t> out;
    const int max_data = std::max(spec.group1_data, spec.group2_data);
    for (int i = 0; i < max_data; ++i) {
        for (const auto& block : data_blocks) {
            if (i < static_cast<int>(block.size())) out.push_back(block[i]);
        }
    }
    for (int i = 0; i < spec.ec_per_block; ++i) {
        for (const auto& block : ec_blocks) out.push_back(block[i]);
    }
    return out;
}

inline bool mask_predicate(int mask, int r, int c) {
    switch (mask) {
        case 0: return (r + c) % 2 == 0;
        case 1: return r % 2 == 0;
        case 2: return c % 3 == 0;
        case 3: return (r + c) % 3 == 0;
        case 4: return (r / 2 + c / 3) % 2 == 0;
        case 5: return (r * c) % 2 + (r * c) % 3 == 0;
        case 6: return ((r * c) % 2 + (r * c) % 3) % 2 == 0;
        case 7: return ((r + c) % 2 + (r * c) % 3) % 2 == 0;
    }
    throw std::invalid_argument("mask id out of [0,7]");
}

inline void place_function_patterns(BinaryGrid& grid) {
    const int m = grid.side();
    for (const auto& o : finder_origins(m)) {
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j) grid.set(o.row + i, o.col + j, finder_cell(i, j));
    }
    // Separators stay light (grid starts zeroed); timing tracks:
    for (int k = 8; k <= m - 9; ++k) {
        grid.set(6, k, timing_cell_dark(k));
        grid.set(k, 6, timing_cell_dark(k));
    }
    for (const auto& ctr : alignment_centers(grid.version())) {
        for (int di = -2; di <= 2; ++di)
            for (int dj = -2; dj <= 2; ++dj)
                grid.set(ctr.row + di, ctr.col + dj, alignment_cell(di, dj));
    }
    grid.set(m - 8, 8, 1); // dark module
    if (grid.version() >= 7) {
        const uint32_t word = version_info_word(grid.version());
        for (int b = 0; b < 18; ++b) {
            const bool bit = (word >> b) & 1;
            grid.set(b / 3, m - 11 + b % 3, bit);
            grid.set(m - 11 + b % 3, b / 3, bit);
        }
    }
}

inline void place_format_bits(BinaryGrid& grid, EccLevel ecc, int mask) {
    const uint16_t word = format_word(ecc, mask);
    const auto c1 = format_copy1_cells(grid.side());
    const auto c2 = format_copy2_cells(grid.side());
    for (int k = 0; k < 15; ++k) {
        const bool bit = (word >> (14 - k)) & 1;
        grid.set(c1[k].row, c1[k].col, bit);
        grid.set(c2[k].row, c2[k].col, bit);
    }
}

// Zigzag placement: two-column pairs from the right edge, alternating upward
// and downward, skipping the timing column entirely.
inline void place_codeword_bits(BinaryGrid& grid, const BoolGrid& fmask,
                                const std::vector<uint8_t>& codewords) {
    const int m = grid.side();
    size_t bit_index = 0;
    const size_t total_bits = codewords.size() * 8;
    bool upward = true;

    for (int col = m - 1; col > 0; col -= 2) {
        if (col == 6) --col;
        for (int step = 0; step < m; ++step) {
            const int r = upward ? m - 1 - step : step;
            for (int dc = 0; dc < 2; ++dc) {
                const int c = col - dc;
                if (fmask.at(r, c)) continue;
                bool bit = false;
                if (bit_index < total_bits) {
                    bit = (codewords[bit_index / 8] >> (7 - bit_index % 8)) & 1;
                }
                grid.set(r, c, bit);
                ++bit_index;
            }
        }
        upward = !upward;
    }
}

} // namespace detail

struct EncodeResult {
    BinaryGrid grid;
    int version = 0;
    EccLevel ecc = EccLevel::L;
    int mask = 0;
};

constexpr int kAutoVersion = 0;

// Standards-conformant byte-mode encoding. The mask is chosen by minimal
// total penalty over the finished symbol, ties to the lowest mask id.
inline EncodeResult encode(const std::string& payload, EccLevel ecc, int version = kAutoVersion) {
    if (version == kAutoVersion) {
        version = -1;
        for (int v = 1; v <= kMaxEncodeVersion; ++v) {
            if (static_cast<int>(payload.size()) <= byte_mode_capacity(v, ecc)) {
                version = v;
                break;
            }
        }
        if (version < 0) {
            throw PayloadTooLarge("payload of " + std::to_string(payload.size()) +
                                  " bytes exceeds version-10 capacity at ECC level " +
                                  std::string(1, ecc_name(ecc)));
        }
    } else if (version < 1 || version > kMaxEncodeVersion) {
        throw UnsupportedVersion("encoder supports versions 1..10, got " + std::to_string(version));
    } else if (static_cast<int>(payload.size()) > byte_mode_capacity(version, ecc)) {
        throw PayloadTooLarge("payload does not fit version " + std::to_string(version) +
                              " at ECC level " + std::string(1, ecc_name(ecc)));
    }

    const auto data = detail::build_data_codewords(payload, version, ecc);
    const auto codewords = detail::assemble_codewords(data, version, ecc);

    BinaryGrid base(version);
    detail::place_function_patterns(base);
    const BoolGrid fmask = function_pattern_mask(version);
    detail::place_codeword_bits(base, fmask, codewords);

    int best_mask = 0;
    long best_penalty = -1;
    BinaryGrid best_grid;
    for (int mask = 0; mask < 8; ++mask) {
        BinaryGrid candidate = base;
        const int m = candidate.side();
        for (int r = 0; r < m; ++r) {
            for (int c = 0; c < m; ++c) {
                if (!fmask.at(r, c) && detail::mask_predicate(mask, r, c)) {
                    candidate.set(r, c, !candidate.at(r, c));
                }
            }
        }
        detail::place_format_bits(candidate, ecc, mask);
        const long penalty = penalty_scores(candidate).total();
        if (best_penalty < 0 || penalty < best_penalty) {
            best_penalty = penalty;
            best_mask = mask;
            best_grid = std::move(candidate);
        }
    }
    return {std::move(best_grid), version, ecc, best_mask};
}

// Debug path for fidelity experiments: instead of taking image_side / m
// analytically, build a reference symbol of the candidate version, measure
// its module pitch on the timing track, and rescale to the target image.
// For tightly cropped square renders both routes agree.
inline double estimate_module_size_reference(int version, int image_side_px) {
    constexpr int ref_ppm = 8;
    const std::string probe(static_cast<size_t>(std::max(1, byte_mode_capacity(version, EccLevel::L) / 2)), 'a');
    const EncodeResult ref = encode(probe, EccLevel::L, version);
    const int m = ref.grid.side();

    // rasterize just the timing row and measure the dark/light run pitch
    std::vector<uint8_t> row(static_cast<size_t>(m) * ref_ppm);
    for (int c = 0; c < m; ++c) {
        for (int x = 0; x < ref_ppm; ++x) {
            row[static_cast<size_t>(c) * ref_ppm + x] = ref.grid.at(6, c) ? 0 : 255;
        }
    }
    std::vector<int> runs;
    int run = 1;
    for (size_t i = 1; i < row.size(); ++i) {
        if (row[i] == row[i - 1]) {
            ++run;
        } else {
            runs.push_back(run);
            run = 1;
        }
    }
    runs.push_back(run);
    // timing-track interior runs are single modules; the symbol edges hold
    // finder rings, so use the median interior run as the measured pitch
    std::vector<int> interior(runs.begin() + 1, runs.end() - 1);
    std::sort(interior.begin(), interior.end());
    const double measured_ppm = interior.empty()
                                    ? static_cast<double>(ref_ppm)
                                    : static_cast<double>(interior[interior.size() / 2]);
    const double reference_side = static_cast<double>(m) * ref_ppm;
    return measured_ppm * (static_cast<double>(image_side_px) / reference_side);
}

} // namespace alfa
