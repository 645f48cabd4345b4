#pragma once

#include "alfa/grid.hpp"
#include "alfa/protocol.hpp"

#include <tuple>
#include <utility>

namespace alfa {

// Correction counts from overwriting Finder, Alignment, Separator and Timing
// regions with their standard patterns.
struct RecoveryReport {
    int finder_fixes = 0;
    int alignment_fixes = 0;
    int separator_fixes = 0;
    int timing_fixes = 0;
    int total_function_modules = 0;

    int total_fixes() const {
        return finder_fixes + alignment_fixes + separator_fixes + timing_fixes;
    }
    bool operator==(const RecoveryReport&) const = default;
};

namespace detail {

inline int force_cell(BinaryGrid& g, int r, int c, bool dark) {
    if (g.at(r, c) == (dark ? 1 : 0)) return 0;
    g.set(r, c, dark);
    return 1;
}

} // namespace detail

inline std::pair<BinaryGrid, int> recover_finders(BinaryGrid grid) {
    int fixes = 0;
    for (const auto& o : finder_origins(grid.side())) {
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j)
                fixes += detail::force_cell(grid, o.row + i, o.col + j, finder_cell(i, j));
    }
    return {std::move(grid), fixes};
}

inline std::pair<BinaryGrid, int> recover_separators(BinaryGrid grid) {
    const int m = grid.side();
    int fixes = 0;
    for (int k = 0; k < 8; ++k) {
        fixes += detail::force_cell(grid, 7, k, false);         // top-left, horizontal
        fixes += detail::force_cell(grid, 7, m - 1 - k, false); // top-right, horizontal
        fixes += detail::force_cell(grid, m - 8, k, false);     // bottom-left, horizontal
    }
    for (int k = 0; k < 7; ++k) {
        fixes += detail::force_cell(grid, k, 7, false);         // top-left, vertical
        fixes += detail::force_cell(grid, k, m - 8, false);     // top-right, vertical
        fixes += detail::force_cell(grid, m - 1 - k, 7, false); // bottom-left, vertical
    }
    return {std::move(grid), fixes};
}

inline std::pair<BinaryGrid, int> recover_timing(BinaryGrid grid) {
    const int m = grid.side();
    int fixes = 0;
    for (int k = 8; k <= m - 9; ++k) {
        fixes += detail::force_cell(grid, 6, k, timing_cell_dark(k));
        fixes += detail::force_cell(grid, k, 6, timing_cell_dark(k));
    }
    return {std::move(grid), fixes};
}

inline std::pair<BinaryGrid, int> recover_alignments(BinaryGrid grid) {
    int fixes = 0;
    for (const auto& ctr : alignment_centers(grid.version())) {
        for (int di = -2; di <= 2; ++di)
            for (int dj = -2; dj <= 2; ++dj)
                fixes += detail::force_cell(grid, ctr.row + di, ctr.col + dj,
                                            alignment_cell(di, dj));
    }
    return {std::move(grid), fixes};
}

// Union of the four recovered region types. Alignment patterns on the timing
// track share cells, so this is counted on a marked grid, not summed.
inline int fast_region_module_count(int version) {
    const int m = side_modules(version);
    BoolGrid marked(m);
    for (const auto& o : finder_origins(m)) {
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j) marked.set(o.row + i, o.col + j, true);
    }
    for (int k = 0; k < 8; ++k) {
        marked.set(7, k, true);
        marked.set(7, m - 1 - k, true);
        marked.set(m - 8, k, true);
    }
    for (int k = 0; k < 7; ++k) {
        marked.set(k, 7, true);
        marked.set(k, m - 8, true);
        marked.set(m - 1 - k, 7, true);
    }
    for (int k = 8; k <= m - 9; ++k) {
        marked.set(6, k, true);
        marked.set(k, 6, true);
    }
    for (const auto& ctr : alignment_centers(version)) {
        for (int di = -2; di <= 2; ++di)
            for (int dj = -2; dj <= 2; ++dj) marked.set(ctr.row + di, ctr.col + dj, true);
    }
    int n = 0;
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) n += marked.at(r, c) ? 1 : 0;
    return n;
}

// Applies the four recoveries in F, A, S, T order. Format bits, version info
// and the dark module are left exactly as read.
inline std::pair<BinaryGrid, RecoveryReport> fast(BinaryGrid grid) {
    RecoveryReport rep;

    std::tie(grid, rep.finder_fixes) = recover_finders(std::move(grid));
    std::tie(grid, rep.alignment_fixes) = recover_alignments(std::move(grid));
    std::tie(grid, rep.separator_fixes) = recover_separators(std::move(grid));
    std::tie(grid, rep.timing_fixes) = recover_timing(std::move(grid));

    rep.total_function_modules = fast_region_module_count(grid.version());
    return {std::move(grid), rep};
}

} // namespace alfa
