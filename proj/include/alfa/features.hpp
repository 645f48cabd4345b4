#pragma once

#include "alfa/extract.hpp"
#include "alfa/fast.hpp"
#include "alfa/grid.hpp"
#include "alfa/preprocess.hpp"
#include "alfa/protocol.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

namespace alfa {

constexpr int kFeatureCount = 24;
using FeatureVector = std::array<double, kFeatureCount>;

// Frozen dictionary; serialized headers and model feature_names must match.
//   f1  version                 f13 data_dark_ratio
//   f2  side_modules            f14 penalty_n1_rows
//   f3  ecc_level (L=0..H=3)    f15 penalty_n1_cols
//   f4  mask_id                 f16 penalty_n2
//   f5  format_copies_valid     f17 penalty_n3
//   f6  inverted_flag           f18 penalty_n4
//   f7  high_threshold_flag     f19 row_transition_rate
//   f8  finder_fixes            f20 col_transition_rate
//   f9  alignment_fixes         f21 longest_dark_run
//   f10 separator_fixes         f22 longest_light_run
//   f11 timing_fixes            f23 block_entropy
//   f12 dark_ratio              f24 center_dark_ratio
inline const std::array<std::string, kFeatureCount>& feature_names() {
    static const std::array<std::string, kFeatureCount> names = [] {
        std::array<std::string, kFeatureCount> n;
        for (int i = 0; i < kFeatureCount; ++i) n[i] = "f" + std::to_string(i + 1);
        return n;
    }();
    return names;
}

struct PenaltyScores {
    int n1_rows = 0;
    int n1_cols = 0;
    int n2 = 0;
    int n3 = 0;
    int n4 = 0;

    int total() const { return n1_rows + n1_cols + n2 + n3 + n4; }
    bool operator==(const PenaltyScores&) const = default;
};

namespace detail {

// N1 contribution of one line: each maximal same-color run of length L >= 5
// scores 3 + (L - 5).
template <typename CellAt>
inline int n1_line(int len, CellAt cell) {
    int score = 0;
    int run = 1;
    for (int k = 1; k <= len; ++k) {
        if (k < len && cell(k) == cell(k - 1)) {
            ++run;
        } else {
            if (run >= 5) score += 3 + run - 5;
            run = 1;
        }
    }
    return score;
}

// N3: 1011101 with four light modules on one side; each side counts.
template <typename CellAt>
inline int n3_line(int len, CellAt cell) {
    static constexpr uint8_t core[7] = {1, 0, 1, 1, 1, 0, 1};
    int hits = 0;
    for (int k = 0; k + 7 <= len; ++k) {
        bool match = true;
        for (int j = 0; j < 7; ++j) {
            if (cell(k + j) != core[j]) {
                match = false;
                break;
            }
        }
        if (!match) continue;
        if (k >= 4) {
            bool light = true;
            for (int j = k - 4; j < k; ++j) light = light && cell(j) == 0;
            if (light) ++hits;
        }
        if (k + 11 <= len) {
            bool light = true;
            for (int j = k + 7; j < k + 11; ++j) light = light && cell(j) == 0;
            if (light) ++hits;
        }
    }
    return hits;
}

} // namespace detail

// Standard mask-evaluation conditions N1..N4, reused as statistical features.
inline PenaltyScores penalty_scores(const BinaryGrid& grid) {
    const int m = grid.side();
    PenaltyScores p;

    for (int r = 0; r < m; ++r) {
        p.n1_rows += detail::n1_line(m, [&](int c) { return grid.at(r, c); });
        p.n3 += 40 * detail::n3_line(m, [&](int c) { return grid.at(r, c); });
    }
    for (int c = 0; c < m; ++c) {
        p.n1_cols += detail::n1_line(m, [&](int r) { return grid.at(r, c); });
        p.n3 += 40 * detail::n3_line(m, [&](int r) { return grid.at(r, c); });
    }
    for (int r = 0; r + 1 < m; ++r) {
        for (int c = 0; c + 1 < m; ++c) {
            uint8_t v = grid.at(r, c);
            if (grid.at(r, c + 1) == v && grid.at(r + 1, c) == v && grid.at(r + 1, c + 1) == v) {
                p.n2 += 3;
            }
        }
    }
    const double dark_pct = 100.0 * static_cast<double>(grid.count_dark()) / (static_cast<double>(m) * m);
    p.n4 = 10 * static_cast<int>(std::floor(std::abs(dark_pct - 50.0) / 5.0));
    return p;
}

enum class GridSource { Raw, Fast };

namespace detail {

inline int longest_run(const BinaryGrid& grid, uint8_t color) {
    const int m = grid.side();
    int best = 0;
    auto scan = [&](auto cell) {
        int run = 0;
        for (int k = 0; k < m; ++k) {
            run = (cell(k) == color) ? run + 1 : 0;
            best = std::max(best, run);
        }
    };
    for (int r = 0; r < m; ++r) scan([&](int c) { return grid.at(r, c); });
    for (int c = 0; c < m; ++c) scan([&](int r) { return grid.at(r, c); });
    return best;
}

inline double transition_rate_rows(const BinaryGrid& grid) {
    const int m = grid.side();
    int transitions = 0;
    for (int r = 0; r < m; ++r)
        for (int c = 0; c + 1 < m; ++c) transitions += grid.at(r, c) != grid.at(r, c + 1) ? 1 : 0;
    return static_cast<double>(transitions) / (static_cast<double>(m) * (m - 1));
}

inline double transition_rate_cols(const BinaryGrid& grid) {
    const int m = grid.side();
    int transitions = 0;
    for (int c = 0; c < m; ++c)
        for (int r = 0; r + 1 < m; ++r) transitions += grid.at(r, c) != grid.at(r + 1, c) ? 1 : 0;
    return static_cast<double>(transitions) / (static_cast<double>(m) * (m - 1));
}

// Shannon entropy (bits) of the 16 possible 2x2 block patterns.
inline double block_entropy(const BinaryGrid& grid) {
    const int m = grid.side();
    std::array<int, 16> counts{};
    int total = 0;
    for (int r = 0; r + 1 < m; ++r) {
        for (int c = 0; c + 1 < m; ++c) {
            int pattern = grid.at(r, c) << 3 | grid.at(r, c + 1) << 2 |
                          grid.at(r + 1, c) << 1 | grid.at(r + 1, c + 1);
            ++counts[pattern];
            ++total;
        }
    }
    double h = 0.0;
    for (int count : counts) {
        if (count == 0) continue;
        const double pr = static_cast<double>(count) / total;
        h -= pr * std::log2(pr);
    }
    return h;
}

inline double center_dark_ratio(const BinaryGrid& grid) {
    const int m = grid.side();
    const int w = (m + 4) / 5; // ceil(m/5)
    const int start = (m - w) / 2;
    int dark = 0;
    for (int r = start; r < start + w; ++r)
        for (int c = start; c < start + w; ++c) dark += grid.at(r, c);
    return static_cast<double>(dark) / (static_cast<double>(w) * w);
}

} // namespace detail

// The 24-feature vector. Protocol-level features come from the extraction and
// recovery records; statistics are computed on the raw or FAST-recovered grid
// per grid_source.
inline FeatureVector extract_features(const ExtractionResult& res, const PreprocessReport& pre,
                                      const RecoveryReport& rec, GridSource grid_source) {
    const BinaryGrid* grid = &res.grid;
    BinaryGrid recovered;
    if (grid_source == GridSource::Fast) {
        recovered = fast(res.grid).first;
        grid = &recovered;
    }

    const int m = grid->side();
    const double cells = static_cast<double>(m) * m;
    const BoolGrid fmask = function_pattern_mask(grid->version());

    int data_cells = 0, data_dark = 0;
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) {
            if (fmask.at(r, c)) continue;
            ++data_cells;
            data_dark += grid->at(r, c);
        }
    }

    const PenaltyScores pen = penalty_scores(*grid);

    FeatureVector f{};
    f[0] = grid->version();
    f[1] = m;
    f[2] = static_cast<double>(res.format.ecc);
    f[3] = res.format.mask;
    f[4] = (res.format.copy1_valid ? 1 : 0) + (res.format.copy2_valid ? 1 : 0);
    f[5] = pre.inverted ? 1.0 : 0.0;
    f[6] = res.threshold_used == kSmallModuleThreshold ? 1.0 : 0.0;
    f[7] = rec.finder_fixes;
    f[8] = rec.alignment_fixes;
    f[9] = rec.separator_fixes;
    f[10] = rec.timing_fixes;
    f[11] = static_cast<double>(grid->count_dark()) / cells;
    f[12] = data_cells > 0 ? static_cast<double>(data_dark) / data_cells : 0.0;
    f[13] = pen.n1_rows;
    f[14] = pen.n1_cols;
    f[15] = pen.n2;
    f[16] = pen.n3;
    f[17] = pen.n4;
    f[18] = detail::transition_rate_rows(*grid);
    f[19] = detail::transition_rate_cols(*grid);
    f[20] = detail::longest_run(*grid, 1);
    f[21] = detail::longest_run(*grid, 0);
    f[22] = detail::block_entropy(*grid);
    f[23] = detail::center_dark_ratio(*grid);
    return f;
}

// Shortest round-trip decimal form; keeps CSV and JSON artifacts stable.
inline std::string format_number(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

struct LabeledFeatures {
    FeatureVector features{};
    int label = 0;
};

// CSV schema: header f1..f24,label, one row per specimen, LF line endings.
inline std::string features_to_csv(const std::vector<LabeledFeatures>& rows) {
    std::ostringstream os;
    for (int i = 0; i < kFeatureCount; ++i) os << feature_names()[i] << ",";
    os << "label\n";
    for (const auto& row : rows) {
        for (double v : row.features) os << format_number(v) << ",";
        os << row.label << "\n";
    }
    return os.str();
}

inline std::vector<LabeledFeatures> features_from_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("features csv: empty file");
    std::vector<LabeledFeatures> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        LabeledFeatures row;
        size_t start = 0;
        for (int i = 0; i <= kFeatureCount; ++i) {
            size_t end = line.find(',', start);
            std::string cell = line.substr(start, end == std::string::npos ? end : end - start);
            if (i < kFeatureCount) {
                double v = 0.0;
                auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
                if (ec != std::errc{}) throw std::runtime_error("features csv: bad number " + cell);
                (void)ptr;
                row.features[i] = v;
            } else {
                row.label = cell == "1" ? 1 : 0;
            }
            if (end == std::string::npos) break;
            start = end + 1;
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace alfa
