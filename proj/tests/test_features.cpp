#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "alfa/features.hpp"
#include "alfa/pipeline.hpp"
#include "alfa/style.hpp"
#include "support/corpus_util.hpp"

#include <sstream>

using namespace alfa;

namespace {

BinaryGrid uniform_grid(int version, uint8_t value) { return BinaryGrid(version, value); }

BinaryGrid checkerboard(int version) {
    BinaryGrid g(version);
    for (int r = 0; r < g.side(); ++r)
        for (int c = 0; c < g.side(); ++c) g.set(r, c, (r + c) % 2 == 0);
    return g;
}

} // namespace

TEST_CASE("penalty scores: checkerboard scores zero everywhere") {
    const PenaltyScores p = penalty_scores(checkerboard(1));
    CHECK(p.n1_rows == 0);
    CHECK(p.n1_cols == 0);
    CHECK(p.n2 == 0);
    CHECK(p.n3 == 0);
    CHECK(p.n4 == 0); // 221/441 dark keeps |dark% - 50| under 5
}

TEST_CASE("penalty scores: all-dark 21x21") {
    const PenaltyScores p = penalty_scores(uniform_grid(1, 1));
    CHECK(p.n1_rows == 21 * (3 + 21 - 5)); // = 399, one run of 21 per row
    CHECK(p.n1_cols == 399);
    CHECK(p.n2 == 3 * 20 * 20); // every interior 2x2 block is uniform
    CHECK(p.n3 == 0);
    CHECK(p.n4 == 100); // |100-50|/5 = 10, times 10
}

TEST_CASE("penalty N3: finder-like runs flanked by light modules") {
    // one row: 10111010000 at the start, rest light
    BinaryGrid g(1, 0);
    const uint8_t pattern[11] = {1, 0, 1, 1, 1, 0, 1, 0, 0, 0, 0};
    for (int c = 0; c < 11; ++c) g.set(10, c, pattern[c]);
    const PenaltyScores p = penalty_scores(g);
    // row 10 matches once with light right flank; columns contribute nothing
    // because single dark cells cannot form the core
    CHECK(p.n3 == 40);

    // both flanks light -> two pattern hits -> 80 for that row
    BinaryGrid g2(1, 0);
    const uint8_t both[15] = {0, 0, 0, 0, 1, 0, 1, 1, 1, 0, 1, 0, 0, 0, 0};
    for (int c = 0; c < 15; ++c) g2.set(10, c, both[c]);
    CHECK(penalty_scores(g2).n3 == 80);
}

TEST_CASE("penalty N1 counts runs of both colors per axis") {
    BinaryGrid g(1, 0);
    for (int c = 0; c < 7; ++c) g.set(0, c, 1); // run of 7 dark in row 0
    const PenaltyScores p = penalty_scores(g);
    // row 0: dark run of 7 (5) + light run of 14 (12); rows 1..20: light run of 21 (19)
    CHECK(p.n1_rows == 5 + 12 + 20 * 19);
    // columns 0..6: light run of 20 (18); columns 7..20: light run of 21 (19)
    CHECK(p.n1_cols == 7 * 18 + 14 * 19);
}

namespace {

// Assemble a synthetic ExtractionResult so statistics can be tested on
// hand-built grids.
ExtractionResult fake_result(BinaryGrid grid) {
    ExtractionResult res;
    res.grid = std::move(grid);
    res.format.ecc = EccLevel::M;
    res.format.mask = 0;
    res.format.copy1_valid = true;
    res.format.copy2_valid = true;
    res.threshold_used = kIntensityThreshold;
    return res;
}

} // namespace

TEST_CASE("feature statistics on degenerate grids") {
    PreprocessReport pre;
    RecoveryReport rec;

    FeatureVector dark = extract_features(fake_result(uniform_grid(1, 1)), pre, rec, GridSource::Raw);
    CHECK(dark[11] == doctest::Approx(1.0)); // f12 dark_ratio
    CHECK(dark[18] == doctest::Approx(0.0)); // f19 row transitions
    CHECK(dark[20] == doctest::Approx(21));  // f21 longest dark run
    CHECK(dark[21] == doctest::Approx(0));   // f22 longest light run
    CHECK(dark[22] == doctest::Approx(0.0)); // f23 entropy of a single pattern
    CHECK(dark[23] == doctest::Approx(1.0)); // f24 center window all dark

    FeatureVector check = extract_features(fake_result(checkerboard(1)), pre, rec, GridSource::Raw);
    CHECK(check[11] == doctest::Approx(221.0 / 441.0));
    CHECK(check[15] == doctest::Approx(0.0)); // f16 penalty n2
    CHECK(check[20] == doctest::Approx(1));   // f21
    CHECK(check[18] == doctest::Approx(1.0)); // every horizontal pair flips
    CHECK(check[22] == doctest::Approx(1.0)); // two block patterns, equal mass
}

TEST_CASE("feature vector: protocol fields mirror the extraction record") {
    EncodeResult enc = encode(testutil::payload_for(2, EccLevel::H), EccLevel::H);
    ExtractionResult res = fake_result(enc.grid);
    res.format.ecc = EccLevel::H;
    res.format.mask = enc.mask;
    res.threshold_used = kSmallModuleThreshold;

    PreprocessReport pre;
    pre.inverted = true;
    RecoveryReport rec;
    rec.finder_fixes = 4;
    rec.alignment_fixes = 3;
    rec.separator_fixes = 2;
    rec.timing_fixes = 1;

    const FeatureVector f = extract_features(res, pre, rec, GridSource::Fast);
    CHECK(f[0] == 2);
    CHECK(f[1] == 25);
    CHECK(f[2] == 3); // H
    CHECK(f[3] == enc.mask);
    CHECK(f[4] == 2);
    CHECK(f[5] == 1);
    CHECK(f[6] == 1);
    CHECK(f[7] == 4);
    CHECK(f[8] == 3);
    CHECK(f[9] == 2);
    CHECK(f[10] == 1);
}

TEST_CASE("plain specimens: raw and fast sources agree") {
    EncodeResult enc = encode(testutil::payload_for(3, EccLevel::M), EccLevel::M);
    ExtractionResult res = fake_result(enc.grid);
    res.format.ecc = EccLevel::M;
    res.format.mask = enc.mask;
    PreprocessReport pre;
    auto [recovered, rec] = fast(enc.grid);
    REQUIRE(rec.total_fixes() == 0);

    const FeatureVector raw = extract_features(res, pre, rec, GridSource::Raw);
    const FeatureVector fst = extract_features(res, pre, rec, GridSource::Fast);
    for (int i = 0; i < kFeatureCount; ++i) CHECK(raw[i] == fst[i]);
}

TEST_CASE("f13 excludes exactly the function-pattern cells") {
    EncodeResult enc = encode("data region", EccLevel::M);
    ExtractionResult res = fake_result(enc.grid);
    PreprocessReport pre;
    RecoveryReport rec;
    const FeatureVector base = extract_features(res, pre, rec, GridSource::Raw);

    // flipping a finder cell moves f12 but not f13
    BinaryGrid finder_flip = enc.grid;
    finder_flip.set(3, 3, !finder_flip.at(3, 3));
    const FeatureVector f2 = extract_features(fake_result(finder_flip), pre, rec, GridSource::Raw);
    CHECK(f2[11] != base[11]);
    CHECK(f2[12] == base[12]);

    // flipping a data cell moves both
    BinaryGrid data_flip = enc.grid;
    data_flip.set(12, 12, !data_flip.at(12, 12));
    REQUIRE_FALSE(function_pattern_mask(1).at(12, 12));
    const FeatureVector f3 = extract_features(fake_result(data_flip), pre, rec, GridSource::Raw);
    CHECK(f3[12] != base[12]);
}

TEST_CASE("feature names and csv header are frozen") {
    const auto& names = feature_names();
    CHECK(names[0] == "f1");
    CHECK(names[23] == "f24");

    std::vector<LabeledFeatures> rows(2);
    rows[0].features[0] = 1.5;
    rows[0].label = 1;
    rows[1].features[23] = 0.25;
    const std::string csv = features_to_csv(rows);
    CHECK(csv.rfind("f1,f2,f3,f4,f5,f6,f7,f8,f9,f10,f11,f12,f13,f14,f15,f16,f17,f18,f19,f20,f21,"
                    "f22,f23,f24,label\n", 0) == 0);
    CHECK(csv.find("\r") == std::string::npos); // LF endings only

    std::istringstream is(csv);
    const auto parsed = features_from_csv(is);
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0].features == rows[0].features);
    CHECK(parsed[0].label == 1);
    CHECK(parsed[1].features == rows[1].features);
    CHECK(parsed[1].label == 0);
}

TEST_CASE("csv numbers round-trip exactly") {
    std::vector<LabeledFeatures> rows(1);
    for (int i = 0; i < kFeatureCount; ++i) rows[0].features[i] = 1.0 / (i + 3);
    std::istringstream is(features_to_csv(rows));
    const auto parsed = features_from_csv(is);
    REQUIRE(parsed.size() == 1);
    for (int i = 0; i < kFeatureCount; ++i) CHECK(parsed[0].features[i] == rows[0].features[i]);
}
