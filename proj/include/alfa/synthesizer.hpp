#pragma once

#include "alfa/encoder.hpp"
#include "alfa/image.hpp"
#include "alfa/style.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace alfa {

// Styled raster plus the exact ground truth it was drawn from.
struct QrSpecimen {
    RgbImage image;
    BinaryGrid truth_grid;
    int version = 0;
    EccLevel ecc = EccLevel::L;
    int mask = 0;
    std::string payload;
    StyleSpec style;
};

// Center logos lean on the high recovery capacity; anything below H would
// not survive the occlusion in a real scanner.
inline QrSpecimen make_specimen(const std::string& payload, EccLevel ecc, const StyleSpec& style,
                                int version = kAutoVersion) {
    style.validate();
    if (style.logo_fraction > 0.0 && ecc != EccLevel::H) {
        throw InvalidStyle("logo styles require ECC level H");
    }
    EncodeResult enc = encode(payload, ecc, version);
    QrSpecimen sp;
    sp.image = render(enc.grid, style);
    sp.truth_grid = std::move(enc.grid);
    sp.version = enc.version;
    sp.ecc = enc.ecc;
    sp.mask = enc.mask;
    sp.payload = payload;
    sp.style = style;
    return sp;
}

struct UrlEntry {
    std::string url;
    int label = 0; // 1 = phishing, 0 = legitimate
};

inline uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline std::string hex64(uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

// Deterministic synthetic URL corpus: phishing entries are long multi-token
// lures, legitimate entries short canonical addresses. The tag namespaces
// the domains, so corpora built with different tags are disjoint.
inline std::vector<UrlEntry> make_url_corpus(int count, uint64_t seed, const std::string& tag) {
    static const char* words[] = {"acorn", "bridge", "cedar",  "delta", "ember",  "forge",
                                  "grove", "harbor", "indigo", "jasper", "kite",  "lumen",
                                  "maple", "nectar", "onyx",   "pine",  "quartz", "river",
                                  "slate", "tundra", "umber",  "vale",  "willow", "zephyr"};
    static const char* lures[] = {"secure-login", "verify-account", "update-billing",
                                  "confirm-identity", "reset-password", "wallet-access"};
    static const char* tlds[] = {".com", ".org", ".net", ".io"};
    constexpr size_t n_words = sizeof(words) / sizeof(words[0]);

    std::mt19937_64 rng(seed);
    auto pick = [&](auto& arr, size_t n) { return arr[rng() % n]; };
    auto hex_token = [&](int len) {
        static const char* digits = "0123456789abcdef";
        std::string t;
        for (int i = 0; i < len; ++i) t += digits[rng() % 16];
        return t;
    };

    std::vector<UrlEntry> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        if (i % 2 == 0) { // phishing
            std::string url = "http://";
            url += pick(lures, 6);
            url += "-";
            url += pick(words, n_words);
            url += ".";
            url += pick(words, n_words);
            url += tag;
            url += ".xyz/portal?sid=";
            url += hex_token(10 + static_cast<int>(rng() % 24));
            url += "&user=";
            url += hex_token(6 + static_cast<int>(rng() % 10));
            out.push_back({url, 1});
        } else { // legitimate
            std::string url = "https://";
            url += pick(words, n_words);
            url += tag;
            url += pick(tlds, 4);
            url += "/";
            url += pick(words, n_words);
            out.push_back({url, 0});
        }
    }
    return out;
}

enum class CorpusPairing { Cross, RoundRobin };

struct ManifestRow {
    std::string path;
    std::string grid_path;
    std::string url_hash;
    int label = 0;
    int version = 0;
    char ecc = 'L';
    int mask = 0;
    int style_id = 0;
    std::string encode_error;
};

struct CorpusResult {
    std::vector<ManifestRow> rows;
    std::string manifest_path;
};

inline std::string manifest_to_csv(const std::vector<ManifestRow>& rows) {
    std::ostringstream os;
    os << "path,grid_path,url_hash,label,version,ecc,mask,style_id,encode_error\n";
    for (const auto& r : rows) {
        os << r.path << "," << r.grid_path << "," << r.url_hash << "," << r.label << ","
           << r.version << "," << r.ecc << "," << r.mask << "," << r.style_id << ","
           << r.encode_error << "\n";
    }
    return os.str();
}

// Writes one specimen per (url, style) pair (Cross) or per url with styles
// assigned round-robin. Encode failures are recorded per item, not fatal.
inline CorpusResult make_corpus(const std::filesystem::path& dir, const std::vector<UrlEntry>& urls,
                                const std::vector<StyleSpec>& styles, EccLevel ecc, uint64_t seed,
                                CorpusPairing pairing = CorpusPairing::Cross) {
    if (styles.empty() || urls.empty()) {
        CorpusResult empty;
        empty.manifest_path = (dir / "manifest.csv").string();
        std::filesystem::create_directories(dir);
        std::ofstream(empty.manifest_path, std::ios::binary) << manifest_to_csv({});
        return empty;
    }
    std::filesystem::create_directories(dir);

    CorpusResult result;
    auto emit = [&](size_t url_idx, size_t style_idx) {
        const auto& entry = urls[url_idx];
        const auto& style = styles[style_idx];
        char stem[64];
        std::snprintf(stem, sizeof(stem), "specimen_%04zu_s%02zu", url_idx, style_idx);

        ManifestRow row;
        row.url_hash = hex64(fnv1a64(entry.url));
        row.label = entry.label;
        row.style_id = static_cast<int>(style_idx);
        try {
            QrSpecimen sp = make_specimen(entry.url, ecc, style);
            row.path = std::string(stem) + ".ppm";
            row.grid_path = std::string(stem) + ".grid";
            row.version = sp.version;
            row.ecc = ecc_name(sp.ecc);
            row.mask = sp.mask;
            save_ppm((dir / row.path).string(), sp.image);
            std::ofstream gf(dir / row.grid_path, std::ios::binary);
            write_grid_text(gf, sp.truth_grid);
        } catch (const std::exception& e) {
            row.encode_error = e.what();
        }
        result.rows.push_back(std::move(row));
    };

    if (pairing == CorpusPairing::Cross) {
        for (size_t u = 0; u < urls.size(); ++u)
            for (size_t s = 0; s < styles.size(); ++s) emit(u, s);
    } else {
        for (size_t u = 0; u < urls.size(); ++u) emit(u, u % styles.size());
    }

    result.manifest_path = (dir / "manifest.csv").string();
    std::ofstream mf(result.manifest_path, std::ios::binary);
    mf << manifest_to_csv(result.rows);
    (void)seed; // reserved: styles and urls fully determine the corpus today
    return result;
}

inline std::vector<ManifestRow> read_manifest(const std::filesystem::path& manifest_path) {
    std::ifstream f(manifest_path);
    if (!f) throw IoError("cannot open " + manifest_path.string());
    std::vector<ManifestRow> rows;
    std::string line;
    std::getline(f, line); // header
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        while (fields.size() < 9) fields.emplace_back();
        ManifestRow r;
        r.path = fields[0];
        r.grid_path = fields[1];
        r.url_hash = fields[2];
        r.label = std::stoi(fields[3]);
        r.version = fields[4].empty() ? 0 : std::stoi(fields[4]);
        r.ecc = fields[5].empty() ? 'L' : fields[5][0];
        r.mask = fields[6].empty() ? 0 : std::stoi(fields[6]);
        r.style_id = std::stoi(fields[7]);
        r.encode_error = fields[8];
        rows.push_back(std::move(r));
    }
    return rows;
}

// Style presets used by the CLI and the synthetic experiments.
inline std::vector<StyleSpec> style_presets(const std::string& name) {
    StyleSpec plain;

    StyleSpec circles = plain;
    circles.module_shape = ModuleShape::Circle;

    StyleSpec rounded = plain;
    rounded.module_shape = ModuleShape::Rounded;

    StyleSpec diamonds = plain;
    diamonds.module_shape = ModuleShape::Diamond;

    StyleSpec dots = plain;
    dots.module_shape = ModuleShape::Circle;
    dots.module_scale = 0.5;
    dots.pixels_per_module = 16;

    StyleSpec colorful = plain;
    colorful.fg_palette = {Rgb{16, 32, 96}, Rgb{96, 16, 32}, Rgb{16, 96, 48}, Rgb{64, 16, 96}};

    StyleSpec logo = plain;
    logo.logo_fraction = 0.2;

    StyleSpec inverted = plain;
    inverted.inverted = true;

    StyleSpec washed = plain; // light palette entries defeat both thresholds
    washed.fg_palette = {Rgb{0, 0, 0}, Rgb{0, 0, 0}, Rgb{0, 0, 0}, Rgb{246, 246, 246}};

    StyleSpec ghost = plain; // unscannable on purpose
    ghost.fg_palette = {Rgb{252, 252, 252}};

    if (name == "plain") return {plain};
    if (name == "shapes") return {circles, rounded, diamonds};
    if (name == "mixed") return {plain, circles, rounded, diamonds, dots, colorful, logo, inverted, washed, ghost};
    if (name == "benign") return {plain, circles, rounded, diamonds, dots, colorful, logo, inverted};
    throw std::invalid_argument("unknown style preset: " + name +
                                " (expected plain|shapes|mixed|benign)");
}

} // namespace alfa
