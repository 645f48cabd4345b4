#pragma once

#include "alfa/extract.hpp"
#include "alfa/fast.hpp"
#include "alfa/features.hpp"
#include "alfa/forest.hpp"
#include "alfa/image.hpp"
#include "alfa/preprocess.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace alfa {

// One full structural pass over an image: preprocess, extract, recover.
struct PipelineOutcome {
    PreprocessReport pre;
    ExtractionResult extraction;
    RecoveryReport recovery;   // zeroed when FAST is disabled
    BinaryGrid analysis_grid;  // recovered grid, or the raw grid without FAST
    FeatureVector features{};
    GridSource grid_source = GridSource::Fast;
};

inline PipelineOutcome run_pipeline(const GrayImage& img, bool apply_fast = true) {
    PipelineOutcome out;
    try {
        auto [prepared, rep] = preprocess(img);
        out.pre = rep;
        out.extraction = extract(prepared);
    } catch (const EmptyAfterCrop&) {
        throw UnidentifiableError(); // blank page: nothing to identify
    } catch (const DegenerateImage&) {
        throw UnidentifiableError();
    }

    if (apply_fast) {
        auto [recovered, report] = fast(out.extraction.grid);
        out.recovery = report;
        out.analysis_grid = std::move(recovered);
        out.grid_source = GridSource::Fast;
    } else {
        out.recovery = RecoveryReport{};
        out.analysis_grid = out.extraction.grid;
        out.grid_source = GridSource::Raw;
    }
    out.features = extract_features(out.extraction, out.pre, out.recovery, out.grid_source);
    return out;
}

struct ClassifyResponse {
    std::string error; // exclusive with the fields below
    std::string label;
    double score = 0.0;
    int version = 0;
    char ecc = 'L';
    int mask = 0;
    int threshold_used = 0;
    bool inverted = false;
    RecoveryReport fast_report;
    FeatureVector features{};

    bool ok() const { return error.empty(); }
};

inline ClassifyResponse classify_image(const GrayImage& img, const ForestModel& model,
                                       bool apply_fast = true) {
    ClassifyResponse resp;
    try {
        PipelineOutcome out = run_pipeline(img, apply_fast);
        Prediction pred = predict(model, out.features);
        resp.label = pred.phishing ? "phishing" : "legitimate";
        resp.score = pred.score;
        resp.version = out.extraction.grid.version();
        resp.ecc = ecc_name(out.extraction.format.ecc);
        resp.mask = out.extraction.format.mask;
        resp.threshold_used = out.extraction.threshold_used;
        resp.inverted = out.pre.inverted;
        resp.fast_report = out.recovery;
        resp.features = out.features;
    } catch (const UnidentifiableError& e) {
        resp.error = e.what();
    }
    return resp;
}

inline nlohmann::json to_json(const ClassifyResponse& resp) {
    if (!resp.ok()) return nlohmann::json{{"error", resp.error}};
    nlohmann::json j;
    j["label"] = resp.label;
    j["score"] = resp.score;
    j["version"] = resp.version;
    j["ecc"] = std::string(1, resp.ecc);
    j["mask"] = resp.mask;
    j["threshold_used"] = resp.threshold_used;
    j["inverted"] = resp.inverted;
    j["fast_report"] = {{"finder_fixes", resp.fast_report.finder_fixes},
                        {"alignment_fixes", resp.fast_report.alignment_fixes},
                        {"separator_fixes", resp.fast_report.separator_fixes},
                        {"timing_fixes", resp.fast_report.timing_fixes}};
    j["features"] = resp.features;
    return j;
}

} // namespace alfa
