// alfa: structural phishing classification for stylized QR codes.
//
// Subcommands cover the full workflow: synth -> featurize -> train -> eval,
// plus per-image inspect/classify/recover and an HTTP inference endpoint.

#include "alfa/encoder.hpp"
#include "alfa/pipeline.hpp"
#include "alfa/server.hpp"
#include "alfa/synthesizer.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitUnidentifiable = 2;
constexpr int kExitModel = 3;

alfa::ForestModel load_model_or_exit(const std::string& path) {
    try {
        return alfa::load_model(path);
    } catch (const std::exception& e) {
        std::cerr << "model error: " << e.what() << "\n";
        std::exit(kExitModel);
    }
}

alfa::GrayImage load_image_or_exit(const std::string& path) {
    try {
        return alfa::load_image(path);
    } catch (const std::exception& e) {
        std::cerr << "io error: " << e.what() << "\n";
        std::exit(kExitIo);
    }
}

void print_report_kv(std::ostream& os, const alfa::RecoveryReport& rep) {
    os << "finder_fixes=" << rep.finder_fixes << "\n"
       << "alignment_fixes=" << rep.alignment_fixes << "\n"
       << "separator_fixes=" << rep.separator_fixes << "\n"
       << "timing_fixes=" << rep.timing_fixes << "\n"
       << "total_fixes=" << rep.total_fixes() << "\n"
       << "total_function_modules=" << rep.total_function_modules << "\n";
}

int cmd_inspect(const std::string& image_path, bool no_fast, bool module_size_check,
                const std::string& grid_out, const std::string& render_out) {
    alfa::GrayImage img = load_image_or_exit(image_path);
    alfa::PipelineOutcome out;
    try {
        out = alfa::run_pipeline(img, !no_fast);
    } catch (const alfa::UnidentifiableError& e) {
        std::cerr << e.what() << "\n";
        return kExitUnidentifiable;
    }

    std::cout << "version=" << out.extraction.grid.version() << "\n"
              << "side_modules=" << out.extraction.grid.side() << "\n"
              << "ecc=" << alfa::ecc_name(out.extraction.format.ecc) << "\n"
              << "mask=" << out.extraction.format.mask << "\n"
              << "copy1_valid=" << (out.extraction.format.copy1_valid ? 1 : 0) << "\n"
              << "copy2_valid=" << (out.extraction.format.copy2_valid ? 1 : 0) << "\n"
              << "threshold_used=" << int(out.extraction.threshold_used) << "\n"
              << "module_size=" << alfa::format_number(out.extraction.module_size) << "\n"
              << "light_fraction_first_pass="
              << alfa::format_number(out.extraction.light_fraction_first_pass) << "\n"
              << "inverted=" << (out.pre.inverted ? 1 : 0) << "\n"
              << "white_ratio=" << alfa::format_number(out.pre.white_ratio) << "\n"
              << "fast=" << (no_fast ? 0 : 1) << "\n";
    print_report_kv(std::cout, out.recovery);

    if (module_size_check) {
        // fidelity cross-check of the analytic module size against the
        // reference-symbol estimation route
        const int v = out.extraction.grid.version();
        if (v <= alfa::kMaxEncodeVersion) {
            const int side_px = static_cast<int>(
                std::lround(out.extraction.module_size * out.extraction.grid.side()));
            std::cout << "module_size_reference="
                      << alfa::format_number(alfa::estimate_module_size_reference(v, side_px))
                      << "\n";
        } else {
            std::cout << "module_size_reference=unavailable (version > 10)\n";
        }
    }

    try {
        if (!grid_out.empty()) {
            std::ofstream f(grid_out, std::ios::binary);
            if (!f) throw alfa::IoError("cannot write " + grid_out);
            alfa::write_grid_text(f, out.analysis_grid);
        }
        if (!render_out.empty()) {
            alfa::save_ppm(render_out, alfa::render_plain(out.analysis_grid));
        }
    } catch (const std::exception& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

int cmd_classify(const std::string& image_path, const std::string& model_path, bool json,
                 bool no_fast) {
    alfa::ForestModel model = load_model_or_exit(model_path);
    alfa::GrayImage img = load_image_or_exit(image_path);
    alfa::ClassifyResponse resp = alfa::classify_image(img, model, !no_fast);

    if (json) {
        std::cout << alfa::to_json(resp).dump() << "\n";
    } else if (resp.ok()) {
        std::cout << "label=" << resp.label << "\n"
                  << "score=" << alfa::format_number(resp.score) << "\n"
                  << "version=" << resp.version << "\n"
                  << "ecc=" << resp.ecc << "\n"
                  << "mask=" << resp.mask << "\n"
                  << "threshold_used=" << resp.threshold_used << "\n"
                  << "inverted=" << (resp.inverted ? 1 : 0) << "\n";
        print_report_kv(std::cout, resp.fast_report);
    } else {
        std::cout << resp.error << "\n";
    }
    return resp.ok() ? kExitOk : kExitUnidentifiable;
}

int cmd_recover(const std::string& grid_path, const std::string& out_path) {
    alfa::BinaryGrid before;
    try {
        std::ifstream f(grid_path);
        if (!f) throw alfa::IoError("cannot open " + grid_path);
        before = alfa::read_grid_text(f);
    } catch (const std::exception& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    }

    auto [after, report] = alfa::fast(before);
    std::cout << "before:\n";
    alfa::write_grid_text(std::cout, before);
    std::cout << "after:\n";
    alfa::write_grid_text(std::cout, after);
    print_report_kv(std::cout, report);

    if (!out_path.empty()) {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) {
            std::cerr << "io error: cannot write " << out_path << "\n";
            return kExitIo;
        }
        alfa::write_grid_text(f, after);
    }
    return kExitOk;
}

int cmd_synth(const std::string& out_dir, int count, uint64_t seed, const std::string& tag,
              const std::string& urls_path, const std::string& styles_preset, char ecc_ch,
              const std::string& pairing_name) {
    std::vector<alfa::UrlEntry> urls;
    try {
        if (!urls_path.empty()) {
            std::ifstream f(urls_path);
            if (!f) throw alfa::IoError("cannot open " + urls_path);
            std::string line;
            while (std::getline(f, line)) {
                if (line.empty()) continue;
                const size_t comma = line.rfind(',');
                if (comma == std::string::npos) throw alfa::IoError("urls csv: expected url,label");
                urls.push_back({line.substr(0, comma), line.substr(comma + 1) == "1" ? 1 : 0});
            }
        } else {
            urls = alfa::make_url_corpus(count, seed, tag);
        }
        const auto styles = alfa::style_presets(styles_preset);
        const auto pairing = pairing_name == "cross" ? alfa::CorpusPairing::Cross
                                                     : alfa::CorpusPairing::RoundRobin;
        const auto result = alfa::make_corpus(out_dir, urls, styles, alfa::ecc_from_name(ecc_ch),
                                              seed, pairing);
        int failures = 0;
        for (const auto& row : result.rows) failures += row.encode_error.empty() ? 0 : 1;
        std::cout << "specimens=" << result.rows.size() << "\n"
                  << "encode_failures=" << failures << "\n"
                  << "manifest=" << result.manifest_path << "\n";
    } catch (const std::exception& e) {
        std::cerr << "synth error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

struct CorpusPass {
    std::vector<alfa::LabeledFeatures> features;
    std::vector<alfa::EvalRow> eval_rows;
    int unsuccessful = 0;
};

CorpusPass run_corpus(const fs::path& corpus_dir, alfa::GridSource grid_source) {
    CorpusPass pass;
    const auto rows = alfa::read_manifest(corpus_dir / "manifest.csv");
    for (const auto& row : rows) {
        alfa::EvalRow er;
        er.label = row.label;
        if (row.encode_error.empty()) {
            try {
                alfa::GrayImage img = alfa::load_image((corpus_dir / row.path).string());
                alfa::PipelineOutcome out =
                    alfa::run_pipeline(img, grid_source == alfa::GridSource::Fast);
                pass.features.push_back({out.features, row.label});
                er.features = out.features;
            } catch (const alfa::UnidentifiableError&) {
                ++pass.unsuccessful;
            }
        } else {
            ++pass.unsuccessful;
        }
        pass.eval_rows.push_back(std::move(er));
    }
    return pass;
}

int cmd_featurize(const std::string& corpus_dir, const std::string& out_csv,
                  const std::string& grid_source_name) {
    try {
        const auto source = grid_source_name == "raw" ? alfa::GridSource::Raw
                                                      : alfa::GridSource::Fast;
        CorpusPass pass = run_corpus(corpus_dir, source);
        std::ofstream f(out_csv, std::ios::binary);
        if (!f) throw alfa::IoError("cannot write " + out_csv);
        f << alfa::features_to_csv(pass.features);
        std::cout << "rows=" << pass.features.size() << "\n"
                  << "unsuccessful=" << pass.unsuccessful << "\n";
    } catch (const std::exception& e) {
        std::cerr << "featurize error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

int cmd_train(const std::string& features_csv, const std::string& out_model, int trees, int depth,
              uint64_t seed, double threshold) {
    std::vector<alfa::LabeledFeatures> rows;
    try {
        std::ifstream f(features_csv);
        if (!f) throw alfa::IoError("cannot open " + features_csv);
        rows = alfa::features_from_csv(f);
    } catch (const std::exception& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    }
    try {
        std::vector<alfa::TrainRow> train_rows;
        train_rows.reserve(rows.size());
        for (const auto& r : rows) train_rows.push_back({r.features, r.label});
        alfa::ForestModel model = alfa::train(train_rows, trees, depth, seed);
        model.decision_threshold = threshold;
        alfa::save_model(model, out_model);
        std::cout << "trees=" << trees << "\n"
                  << "rows=" << rows.size() << "\n"
                  << "model=" << out_model << "\n";
    } catch (const std::exception& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return kExitModel;
    }
    return kExitOk;
}

std::string classification_report(const alfa::EvalMetrics& m) {
    char buf[512];
    std::string out;
    out += "Category     Total  Correct Predictions  Wrong Predictions  Unsuccessful Scans\n";
    std::snprintf(buf, sizeof(buf), "Phishing     %-6d %-20d %-18d %d\n",
                  m.tp + m.fn + m.unsuccessful_phishing, m.tp, m.fn, m.unsuccessful_phishing);
    out += buf;
    std::snprintf(buf, sizeof(buf), "Legitimate   %-6d %-20d %-18d %d\n",
                  m.tn + m.fp + m.unsuccessful_legitimate, m.tn, m.fp, m.unsuccessful_legitimate);
    out += buf;
    std::snprintf(buf, sizeof(buf), "FNR: %.4f (%d/%d)\n", m.fnr, m.fn, m.fn + m.tp);
    out += buf;
    std::snprintf(buf, sizeof(buf), "FPR: %.4f (%d/%d)\n", m.fpr, m.fp, m.fp + m.tn);
    out += buf;
    return out;
}

int cmd_eval(const std::string& corpus_dir, const std::string& model_path,
             const std::string& grid_source_name) {
    alfa::ForestModel model = load_model_or_exit(model_path);
    try {
        const auto source = grid_source_name == "raw" ? alfa::GridSource::Raw
                                                      : alfa::GridSource::Fast;
        CorpusPass pass = run_corpus(corpus_dir, source);
        const alfa::EvalMetrics metrics = alfa::evaluate(model, pass.eval_rows);
        std::cout << "(" << (source == alfa::GridSource::Fast ? "With" : "Without")
                  << " FAST Method)\n"
                  << classification_report(metrics);
    } catch (const std::exception& e) {
        std::cerr << "eval error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

int cmd_serve(const std::string& model_path, const std::string& host, int port) {
    alfa::ForestModel model = load_model_or_exit(model_path);
    httplib::Server server;
    alfa::configure_server(server, model);
    std::cout << "listening on " << host << ":" << port << "\n";
    if (!server.listen(host, port)) {
        std::cerr << "io error: cannot bind " << host << ":" << port << "\n";
        return kExitIo;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ALFA: structural phishing classifier for fancy QR codes"};
    app.require_subcommand(1);

    // inspect
    std::string image_path, grid_out, render_out, model_path;
    bool no_fast = false, json_out = false;
    bool module_size_check = false;
    auto* inspect = app.add_subcommand("inspect", "extract and report the binary grid structure");
    inspect->add_option("image", image_path, "PGM/PPM image")->required();
    inspect->add_flag("--no-fast", no_fast, "skip FAST recovery");
    inspect->add_flag("--module-size-check", module_size_check,
                      "also estimate the module size from a reference symbol");
    inspect->add_option("--grid-out", grid_out, "write the grid text dump here");
    inspect->add_option("--render-out", render_out, "write a plain black-white PPM of the grid");

    // classify
    auto* classify = app.add_subcommand("classify", "predict phishing vs legitimate for one image");
    classify->add_option("image", image_path, "PGM/PPM image")->required();
    classify->add_option("--model", model_path, "model JSON path")->required();
    classify->add_flag("--json", json_out, "emit the ClassifyResponse as JSON");
    classify->add_flag("--no-fast", no_fast, "skip FAST recovery");

    // recover
    std::string grid_path, out_path;
    auto* recover = app.add_subcommand("recover", "apply FAST to a grid text dump");
    recover->add_option("grid", grid_path, "grid text file")->required();
    recover->add_option("--out", out_path, "write the recovered grid here");

    // synth
    std::string out_dir, urls_path, styles_preset = "mixed", tag = "a", pairing = "roundrobin";
    int count = 100;
    uint64_t seed = 1;
    char ecc_ch = 'H';
    auto* synth = app.add_subcommand("synth", "generate a labeled specimen corpus");
    synth->add_option("--out", out_dir, "output directory")->required();
    synth->add_option("--count", count, "number of generated URLs (half phishing)");
    synth->add_option("--seed", seed, "deterministic seed");
    synth->add_option("--tag", tag, "URL namespace tag, keeps corpora disjoint");
    synth->add_option("--urls", urls_path, "CSV of url,label instead of generated URLs");
    synth->add_option("--styles", styles_preset, "style preset: plain|shapes|benign|mixed");
    synth->add_option("--ecc", ecc_ch, "ECC level L|M|Q|H");
    synth->add_option("--pairing", pairing, "cross|roundrobin");

    // featurize
    std::string corpus_dir, out_csv, grid_source = "fast";
    auto* featurize = app.add_subcommand("featurize", "extract feature CSV from a corpus");
    featurize->add_option("--corpus", corpus_dir, "corpus directory with manifest.csv")->required();
    featurize->add_option("--out", out_csv, "output CSV path")->required();
    featurize->add_option("--grid-source", grid_source, "raw|fast statistics grid");

    // train
    std::string features_csv, out_model;
    int trees = 100, depth = 6;
    double threshold = 0.5;
    auto* train = app.add_subcommand("train", "train the forest classifier from a feature CSV");
    train->add_option("--features", features_csv, "feature CSV")->required();
    train->add_option("--out", out_model, "output model JSON")->required();
    train->add_option("--trees", trees, "number of trees");
    train->add_option("--depth", depth, "maximum tree depth");
    train->add_option("--seed", seed, "training seed");
    train->add_option("--threshold", threshold, "decision threshold on the phishing score");

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate a model over a corpus");
    eval->add_option("--corpus", corpus_dir, "corpus directory with manifest.csv")->required();
    eval->add_option("--model", model_path, "model JSON path")->required();
    eval->add_option("--grid-source", grid_source, "raw|fast statistics grid");

    // serve
    std::string host = "127.0.0.1";
    int port = 8080;
    auto* serve = app.add_subcommand("serve", "run the HTTP inference endpoint");
    serve->add_option("--model", model_path, "model JSON path")->required();
    serve->add_option("--port", port, "listen port");
    serve->add_option("--host", host, "bind address");

    CLI11_PARSE(app, argc, argv);

    if (inspect->parsed()) {
        return cmd_inspect(image_path, no_fast, module_size_check, grid_out, render_out);
    }
    if (classify->parsed()) return cmd_classify(image_path, model_path, json_out, no_fast);
    if (recover->parsed()) return cmd_recover(grid_path, out_path);
    if (synth->parsed()) {
        return cmd_synth(out_dir, count, seed, tag, urls_path, styles_preset, ecc_ch, pairing);
    }
    if (featurize->parsed()) return cmd_featurize(corpus_dir, out_csv, grid_source);
    if (train->parsed()) return cmd_train(features_csv, out_model, trees, depth, seed, threshold);
    if (eval->parsed()) return cmd_eval(corpus_dir, model_path, grid_source);
    if (serve->parsed()) return cmd_serve(model_path, host, port);
    return kExitOk;
}
