#pragma once

#include "alfa/features.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace alfa {

constexpr const char* kModelSchema = "alfa-forest/1";

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsufficientData : ModelError {
    using ModelError::ModelError;
};
struct SingleClassData : ModelError {
    using ModelError::ModelError;
};
struct DimensionMismatch : ModelError {
    using ModelError::ModelError;
};
struct SchemaMismatch : ModelError {
    using ModelError::ModelError;
};

// Split node or leaf; leaves carry the phishing fraction of their samples.
struct TreeNode {
    int feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    std::unique_ptr<TreeNode> left;
    std::unique_ptr<TreeNode> right;
    double phishing_fraction = 0.0;

    bool is_leaf() const { return feature < 0; }
};

struct TrainRow {
    FeatureVector features{};
    int label = 0; // 1 = phishing, 0 = legitimate
};

struct ForestModel {
    std::vector<std::unique_ptr<TreeNode>> trees;
    int n_trees = 0;
    int max_depth = 0;
    uint64_t seed = 0;
    double decision_threshold = 0.5;
};

struct Prediction {
    bool phishing = false;
    double score = 0.0;
};

namespace detail {

inline double gini(int n_phish, int n_total) {
    if (n_total == 0) return 0.0;
    const double p = static_cast<double>(n_phish) / n_total;
    return 1.0 - p * p - (1.0 - p) * (1.0 - p);
}

struct SplitChoice {
    double impurity = std::numeric_limits<double>::infinity();
    int feature = -1;
    double threshold = 0.0;
};

inline std::unique_ptr<TreeNode> build_tree(const std::vector<TrainRow>& rows,
                                            const std::vector<size_t>& indices, int depth,
                                            int max_depth) {
    int n_phish = 0;
    for (size_t i : indices) n_phish += rows[i].label;
    const int n = static_cast<int>(indices.size());

    auto make_leaf = [&] {
        auto node = std::make_unique<TreeNode>();
        node->phishing_fraction = n > 0 ? static_cast<double>(n_phish) / n : 0.0;
        return node;
    };
    if (n < 2 || n_phish == 0 || n_phish == n || depth >= max_depth) return make_leaf();

    // Greedy Gini split over all features, midpoint thresholds between sorted
    // distinct values; ties resolve to the lowest feature then threshold.
    SplitChoice best;
    std::vector<std::pair<double, int>> column(indices.size());
    for (int f = 0; f < kFeatureCount; ++f) {
        for (size_t k = 0; k < indices.size(); ++k) {
            column[k] = {rows[indices[k]].features[f], rows[indices[k]].label};
        }
        std::sort(column.begin(), column.end());
        int left_n = 0, left_phish = 0;
        for (size_t k = 0; k + 1 < column.size(); ++k) {
            ++left_n;
            left_phish += column[k].second;
            if (column[k].first == column[k + 1].first) continue;
            const double thr = (column[k].first + column[k + 1].first) / 2.0;
            const int right_n = n - left_n;
            const double impurity = (left_n * gini(left_phish, left_n) +
                                     right_n * gini(n_phish - left_phish, right_n)) /
                                    n;
            if (impurity < best.impurity) best = {impurity, f, thr};
        }
    }
    if (best.feature < 0) return make_leaf(); // all features constant

    std::vector<size_t> left_idx, right_idx;
    for (size_t i : indices) {
        (rows[i].features[best.feature] < best.threshold ? left_idx : right_idx).push_back(i);
    }
    auto node = std::make_unique<TreeNode>();
    node->feature = best.feature;
    node->threshold = best.threshold;
    node->phishing_fraction = static_cast<double>(n_phish) / n;
    node->left = build_tree(rows, left_idx, depth + 1, max_depth);
    node->right = build_tree(rows, right_idx, depth + 1, max_depth);
    return node;
}

} // namespace detail

// Bagged forest: each tree fits a seeded bootstrap sample. Raw engine draws
// with modulo reduction keep the result identical across standard libraries.
inline ForestModel train(const std::vector<TrainRow>& rows, int n_trees, int max_depth,
                         uint64_t seed) {
    if (rows.size() < 2) throw InsufficientData("need at least 2 training rows");
    bool has_phish = false, has_legit = false;
    for (const auto& r : rows) (r.label ? has_phish : has_legit) = true;
    if (!has_phish || !has_legit) throw SingleClassData("training data has a single class");
    if (n_trees < 1) throw ModelError("n_trees must be >= 1");

    ForestModel model;
    model.n_trees = n_trees;
    model.max_depth = max_depth;
    model.seed = seed;
    model.trees.reserve(static_cast<size_t>(n_trees));

    for (int t = 0; t < n_trees; ++t) {
        std::mt19937_64 rng(seed + 0x9E3779B97F4A7C15ULL * static_cast<uint64_t>(t + 1));
        std::vector<size_t> bootstrap(rows.size());
        for (auto& idx : bootstrap) idx = static_cast<size_t>(rng() % rows.size());
        std::sort(bootstrap.begin(), bootstrap.end());
        model.trees.push_back(detail::build_tree(rows, bootstrap, 0, max_depth));
    }
    return model;
}

inline Prediction predict(const ForestModel& model, const FeatureVector& fv) {
    double sum = 0.0;
    for (const auto& tree : model.trees) {
        const TreeNode* node = tree.get();
        while (!node->is_leaf()) {
            node = fv[node->feature] < node->threshold ? node->left.get() : node->right.get();
        }
        sum += node->phishing_fraction;
    }
    const double score = sum / static_cast<double>(model.trees.size());
    return {score >= model.decision_threshold, score};
}

inline Prediction predict(const ForestModel& model, const std::vector<double>& values) {
    if (values.size() != kFeatureCount) {
        throw DimensionMismatch("feature vector must have 24 entries, got " +
                                std::to_string(values.size()));
    }
    FeatureVector fv{};
    std::copy(values.begin(), values.end(), fv.begin());
    return predict(model, fv);
}

// Labeled evaluation rows; a missing feature vector marks an unsuccessful
// extraction, counted separately and excluded from the rate denominators.
struct EvalRow {
    std::optional<FeatureVector> features;
    int label = 0;
};

struct EvalMetrics {
    int tp = 0, fp = 0, tn = 0, fn = 0;
    int unsuccessful_phishing = 0;
    int unsuccessful_legitimate = 0;
    double fnr = 0.0;
    double fpr = 0.0;

    int unsuccessful() const { return unsuccessful_phishing + unsuccessful_legitimate; }
};

inline EvalMetrics evaluate(const ForestModel& model, const std::vector<EvalRow>& rows) {
    EvalMetrics m;
    for (const auto& row : rows) {
        if (!row.features) {
            ++(row.label ? m.unsuccessful_phishing : m.unsuccessful_legitimate);
            continue;
        }
        const bool phishing = predict(model, *row.features).phishing;
        if (row.label == 1) {
            ++(phishing ? m.tp : m.fn);
        } else {
            ++(phishing ? m.fp : m.tn);
        }
    }
    m.fnr = (m.fn + m.tp) > 0 ? static_cast<double>(m.fn) / (m.fn + m.tp) : 0.0;
    m.fpr = (m.fp + m.tn) > 0 ? static_cast<double>(m.fp) / (m.fp + m.tn) : 0.0;
    return m;
}

namespace detail {

inline nlohmann::json node_to_json(const TreeNode& node) {
    if (node.is_leaf()) return nlohmann::json{{"leaf", node.phishing_fraction}};
    return nlohmann::json{{"feature", node.feature},
                          {"threshold", node.threshold},
                          {"left", node_to_json(*node.left)},
                          {"right", node_to_json(*node.right)}};
}

inline std::unique_ptr<TreeNode> node_from_json(const nlohmann::json& j) {
    auto node = std::make_unique<TreeNode>();
    if (j.contains("leaf")) {
        node->phishing_fraction = j.at("leaf").get<double>();
        return node;
    }
    node->feature = j.at("feature").get<int>();
    if (node->feature < 0 || node->feature >= kFeatureCount) {
        throw SchemaMismatch("node feature index out of range");
    }
    node->threshold = j.at("threshold").get<double>();
    node->left = node_from_json(j.at("left"));
    node->right = node_from_json(j.at("right"));
    return node;
}

} // namespace detail

inline std::string model_to_json(const ForestModel& model) {
    nlohmann::json j;
    j["schema"] = kModelSchema;
    j["n_trees"] = model.n_trees;
    j["max_depth"] = model.max_depth;
    j["seed"] = model.seed;
    j["decision_threshold"] = model.decision_threshold;
    j["feature_names"] = feature_names();
    nlohmann::json trees = nlohmann::json::array();
    for (const auto& t : model.trees) trees.push_back(detail::node_to_json(*t));
    j["trees"] = std::move(trees);
    return j.dump(2) + "\n";
}

inline ForestModel model_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaMismatch(std::string("model is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("schema") || j.at("schema") != kModelSchema) {
        throw SchemaMismatch("expected schema tag " + std::string(kModelSchema));
    }
    try {
        ForestModel model;
        model.n_trees = j.at("n_trees").get<int>();
        model.max_depth = j.value("max_depth", 0);
        model.seed = j.value("seed", uint64_t{0});
        model.decision_threshold = j.value("decision_threshold", 0.5);
        if (j.contains("feature_names") && !j.at("feature_names").empty()) {
            const auto names = j.at("feature_names").get<std::vector<std::string>>();
            if (names.size() != kFeatureCount) {
                throw SchemaMismatch("feature_names must list all 24 features");
            }
            for (int i = 0; i < kFeatureCount; ++i) {
                if (names[static_cast<size_t>(i)] != feature_names()[static_cast<size_t>(i)]) {
                    throw SchemaMismatch("feature_names do not match the frozen dictionary");
                }
            }
        }
        for (const auto& t : j.at("trees")) model.trees.push_back(detail::node_from_json(t));
        if (model.trees.empty()) throw SchemaMismatch("model has no trees");
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaMismatch(std::string("malformed model document: ") + e.what());
    }
}

inline void save_model(const ForestModel& model, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path);
    f << model_to_json(model);
}

inline ForestModel load_model(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return model_from_json(text);
}

} // namespace alfa
