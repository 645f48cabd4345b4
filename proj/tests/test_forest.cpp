#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "alfa/forest.hpp"

#include <cstdio>
#include <filesystem>
#include <random>

using namespace alfa;

namespace {

// Linearly separable toy set: f12 < 0.4 iff legitimate.
std::vector<TrainRow> separable_rows(int n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<TrainRow> rows;
    for (int i = 0; i < n; ++i) {
        TrainRow row;
        row.label = i % 2;
        const double base = row.label ? 0.55 : 0.25;
        row.features[11] = base + static_cast<double>(rng() % 100) / 1000.0;
        row.features[0] = 1 + static_cast<double>(rng() % 5);
        row.features[22] = static_cast<double>(rng() % 1000) / 250.0;
        rows.push_back(row);
    }
    return rows;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

} // namespace

TEST_CASE("train input validation") {
    std::vector<TrainRow> ten(10);
    for (auto& r : ten) r.label = 1;
    CHECK_THROWS_AS(train(ten, 5, 3, 1), SingleClassData);

    std::vector<TrainRow> one(1);
    CHECK_THROWS_AS(train(one, 5, 3, 1), InsufficientData);
}

TEST_CASE("separable toy set reaches training accuracy 1.0") {
    const auto rows = separable_rows(40, 99);
    const ForestModel model = train(rows, 5, 2, 7);
    int correct = 0;
    for (const auto& row : rows) {
        correct += predict(model, row.features).phishing == (row.label == 1) ? 1 : 0;
    }
    CHECK(correct == 40);
}

TEST_CASE("training is deterministic: same seed, same bytes") {
    const auto rows = separable_rows(60, 4);
    const ForestModel a = train(rows, 12, 4, 42);
    const ForestModel b = train(rows, 12, 4, 42);
    CHECK(model_to_json(a) == model_to_json(b));

    const ForestModel c = train(rows, 12, 4, 43);
    CHECK(model_to_json(a) != model_to_json(c));
}

TEST_CASE("predict contracts") {
    // single leaf with phishing fraction 1.0
    ForestModel leaf_model;
    leaf_model.n_trees = 1;
    leaf_model.trees.push_back(std::make_unique<TreeNode>());
    leaf_model.trees.back()->phishing_fraction = 1.0;
    FeatureVector fv{};
    const Prediction p = predict(leaf_model, fv);
    CHECK(p.phishing);
    CHECK(p.score == 1.0);

    // two leaves 1.0 and 0.0 average to 0.5; threshold is inclusive
    ForestModel two;
    two.n_trees = 2;
    two.trees.push_back(std::make_unique<TreeNode>());
    two.trees.back()->phishing_fraction = 1.0;
    two.trees.push_back(std::make_unique<TreeNode>());
    two.trees.back()->phishing_fraction = 0.0;
    const Prediction p2 = predict(two, fv);
    CHECK(p2.score == 0.5);
    CHECK(p2.phishing);

    std::vector<double> wrong_size(23, 0.0);
    CHECK_THROWS_AS(predict(two, wrong_size), DimensionMismatch);
}

TEST_CASE("scores stay in [0,1] for arbitrary inputs") {
    const auto rows = separable_rows(50, 8);
    const ForestModel model = train(rows, 15, 5, 21);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        FeatureVector fv{};
        for (auto& v : fv) v = static_cast<double>(rng() % 2000) / 7.0 - 30.0;
        const Prediction p = predict(model, fv);
        CHECK(p.score >= 0.0);
        CHECK(p.score <= 1.0);
        CHECK(p.phishing == (p.score >= model.decision_threshold));
    }
}

TEST_CASE("evaluate reproduces confusion-count arithmetic") {
    // hand-written stump on f1: >= 1.5 scores phishing
    const std::string doc = R"({
        "schema": "alfa-forest/1",
        "n_trees": 1,
        "max_depth": 1,
        "seed": 0,
        "decision_threshold": 0.5,
        "feature_names": [],
        "trees": [{"feature": 0, "threshold": 1.5,
                   "left": {"leaf": 0.0}, "right": {"leaf": 1.0}}]
    })";
    const ForestModel model = model_from_json(doc);

    auto fv_with_f1 = [](double v) {
        FeatureVector fv{};
        fv[0] = v;
        return fv;
    };
    std::vector<EvalRow> rows;
    for (int i = 0; i < 44; ++i) rows.push_back({fv_with_f1(2), 1}); // tp
    for (int i = 0; i < 3; ++i) rows.push_back({fv_with_f1(1), 1});  // fn
    for (int i = 0; i < 3; ++i) rows.push_back({std::nullopt, 1});   // unsuccessful
    for (int i = 0; i < 27; ++i) rows.push_back({fv_with_f1(2), 0}); // fp
    for (int i = 0; i < 22; ++i) rows.push_back({fv_with_f1(1), 0}); // tn
    rows.push_back({std::nullopt, 0});

    const EvalMetrics m = evaluate(model, rows);
    CHECK(m.tp == 44);
    CHECK(m.fn == 3);
    CHECK(m.fp == 27);
    CHECK(m.tn == 22);
    CHECK(m.unsuccessful_phishing == 3);
    CHECK(m.unsuccessful_legitimate == 1);
    CHECK(m.fnr == doctest::Approx(3.0 / 47.0));
    CHECK(m.fpr == doctest::Approx(27.0 / 49.0));

    // brute-force recount agrees
    int fn = 0, tp = 0;
    for (const auto& row : rows) {
        if (!row.features || row.label != 1) continue;
        (predict(model, *row.features).phishing ? tp : fn) += 1;
    }
    CHECK(m.fnr == doctest::Approx(static_cast<double>(fn) / (fn + tp)));
}

TEST_CASE("evaluate: all-correct means zero rates") {
    const auto rows = separable_rows(30, 17);
    const ForestModel model = train(rows, 9, 3, 3);
    std::vector<EvalRow> eval_rows;
    for (const auto& r : rows) eval_rows.push_back({r.features, r.label});
    const EvalMetrics m = evaluate(model, eval_rows);
    CHECK(m.fnr == 0.0);
    CHECK(m.fpr == 0.0);
}

TEST_CASE("save/load round trip preserves predictions byte-for-byte") {
    const auto rows = separable_rows(80, 31);
    const ForestModel model = train(rows, 20, 5, 1234);
    const auto path = temp_file("alfa_forest_test_model.json");
    save_model(model, path.string());
    const ForestModel loaded = load_model(path.string());

    CHECK(model_to_json(model) == model_to_json(loaded));
    std::mt19937_64 rng(77);
    for (int i = 0; i < 100; ++i) {
        FeatureVector fv{};
        for (auto& v : fv) v = static_cast<double>(rng() % 10000) / 53.0;
        const Prediction a = predict(model, fv);
        const Prediction b = predict(loaded, fv);
        CHECK(a.score == b.score);
        CHECK(a.phishing == b.phishing);
    }
    std::filesystem::remove(path);
}

TEST_CASE("load rejects foreign documents") {
    CHECK_THROWS_AS(model_from_json("{\"schema\":\"other/9\",\"trees\":[]}"), SchemaMismatch);
    CHECK_THROWS_AS(model_from_json("not json at all"), SchemaMismatch);
    CHECK_THROWS_AS(model_from_json("{\"schema\":\"alfa-forest/1\",\"n_trees\":1,\"trees\":[]}"),
                    SchemaMismatch);
    CHECK_THROWS_AS(load_model("/nonexistent/alfa.json"), IoError);

    // feature_names, when present, must match the frozen dictionary
    CHECK_THROWS_AS(model_from_json(R"({"schema":"alfa-forest/1","n_trees":1,
        "feature_names":["x1"],"trees":[{"leaf":0.5}]})"),
                    SchemaMismatch);
}

TEST_CASE("hand-written single-leaf document is usable") {
    const ForestModel model = model_from_json(
        R"({"schema":"alfa-forest/1","n_trees":1,"trees":[{"leaf":0.9}]})");
    FeatureVector fv{};
    const Prediction p = predict(model, fv);
    CHECK(p.phishing);
    CHECK(p.score == doctest::Approx(0.9));
}
