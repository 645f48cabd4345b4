#pragma once

#include "alfa/qr_types.hpp"

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace alfa {

// m x m matrix of module labels, 1 = dark, 0 = light.
class BinaryGrid {
public:
    BinaryGrid() = default;

    explicit BinaryGrid(int version, uint8_t fill = 0)
        : version_(version), side_(side_modules(version)),
          cells_(static_cast<size_t>(side_) * side_, fill) {}

    int version() const { return version_; }
    int side() const { return side_; }

    uint8_t at(int r, int c) const { return cells_[idx(r, c)]; }
    void set(int r, int c, uint8_t v) { cells_[idx(r, c)] = v ? 1 : 0; }

    const std::vector<uint8_t>& cells() const { return cells_; }

    bool operator==(const BinaryGrid& o) const {
        return version_ == o.version_ && cells_ == o.cells_;
    }
    bool operator!=(const BinaryGrid& o) const { return !(*this == o); }

    size_t count_dark() const {
        size_t n = 0;
        for (uint8_t v : cells_) n += v;
        return n;
    }

private:
    size_t idx(int r, int c) const {
        if (r < 0 || c < 0 || r >= side_ || c >= side_) {
            throw std::out_of_range("grid index (" + std::to_string(r) + "," +
                                    std::to_string(c) + ") side " + std::to_string(side_));
        }
        return static_cast<size_t>(r) * side_ + c;
    }

    int version_ = 0;
    int side_ = 0;
    std::vector<uint8_t> cells_;
};

// Boolean mask with BinaryGrid geometry; true marks function/reserved modules.
class BoolGrid {
public:
    BoolGrid() = default;
    explicit BoolGrid(int side) : side_(side), cells_(static_cast<size_t>(side) * side, 0) {}

    int side() const { return side_; }
    bool at(int r, int c) const { return cells_[static_cast<size_t>(r) * side_ + c] != 0; }
    void set(int r, int c, bool v) { cells_[static_cast<size_t>(r) * side_ + c] = v ? 1 : 0; }

private:
    int side_ = 0;
    std::vector<uint8_t> cells_;
};

// Grid text format: first line "version <v>", then m lines of m '0'/'1' chars.
inline void write_grid_text(std::ostream& os, const BinaryGrid& g) {
    os << "version " << g.version() << "\n";
    for (int r = 0; r < g.side(); ++r) {
        for (int c = 0; c < g.side(); ++c) os.put(g.at(r, c) ? '1' : '0');
        os.put('\n');
    }
}

inline std::string grid_to_text(const BinaryGrid& g) {
    std::ostringstream os;
    write_grid_text(os, g);
    return os.str();
}

inline BinaryGrid read_grid_text(std::istream& is) {
    std::string tag;
    int v = 0;
    if (!(is >> tag >> v) || tag != "version") {
        throw std::runtime_error("grid text: missing 'version <v>' header");
    }
    BinaryGrid g(v);
    std::string line;
    std::getline(is, line); // rest of header line
    for (int r = 0; r < g.side(); ++r) {
        if (!std::getline(is, line) || static_cast<int>(line.size()) < g.side()) {
            throw std::runtime_error("grid text: truncated at row " + std::to_string(r));
        }
        for (int c = 0; c < g.side(); ++c) {
            char ch = line[c];
            if (ch != '0' && ch != '1') {
                throw std::runtime_error("grid text: bad cell char");
            }
            g.set(r, c, ch == '1');
        }
    }
    return g;
}

inline BinaryGrid grid_from_text(const std::string& s) {
    std::istringstream is(s);
    return read_grid_text(is);
}

} // namespace alfa
