// CLI integration checks, driven through the real binary (path in argv[1]).
// Plain pass/fail reporting so failures show the command that broke.

#include "alfa/pipeline.hpp"
#include "alfa/synthesizer.hpp"
#include "support/corpus_util.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

using namespace alfa;
namespace fs = std::filesystem;

namespace {

std::string g_cli;
int g_failures = 0;

struct CliResult {
    int exit_code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {};
    CliResult r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

void expect(bool ok, const std::string& what) {
    if (!ok) {
        std::cout << "FAIL: " << what << "\n";
        ++g_failures;
    }
}

std::string kv(const std::string& out, const std::string& key) {
    std::istringstream is(out);
    std::string line;
    while (std::getline(is, line)) {
        if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
    }
    return "";
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <path-to-alfa-cli>\n");
        return 2;
    }
    g_cli = argv[1];
    const fs::path work = fs::temp_directory_path() / "alfa_cli_test";
    fs::remove_all(work);
    fs::create_directories(work);

    // --- inspect on a plain specimen reports the encode metadata ------------
    const std::string payload = testutil::payload_for(3, EccLevel::Q);
    EncodeResult enc = encode(payload, EccLevel::Q);
    const fs::path plain_img = work / "plain.ppm";
    save_ppm(plain_img.string(), render_plain(enc.grid));
    {
        CliResult r = run_cli("inspect " + plain_img.string());
        expect(r.exit_code == 0, "inspect exits 0 on a plain specimen");
        expect(kv(r.out, "version") == "3", "inspect reports version 3");
        expect(kv(r.out, "ecc") == "Q", "inspect reports ecc Q");
        expect(kv(r.out, "mask") == std::to_string(enc.mask), "inspect reports the mask");
        expect(kv(r.out, "total_fixes") == "0", "plain specimen needs no fixes");
    }

    // --- inspect --no-fast vs default on a fancy specimen -------------------
    // washed palette: every fourth module is nearly white, so function
    // regions lose cells while format copy 2 still verifies
    {
        const std::string fancy_payload = "https://w.test/q7r2q7r2q7r2";
        EncodeResult fancy = encode(fancy_payload, EccLevel::H);
        expect(fancy.version == 4, "washed specimen encodes at version 4");
        StyleSpec washed = style_presets("mixed")[8];
        const fs::path fancy_img = work / "washed.ppm";
        save_ppm(fancy_img.string(), render(fancy.grid, washed));

        CliResult with_fast = run_cli("inspect " + fancy_img.string());
        expect(with_fast.exit_code == 0, "washed specimen is still identifiable");
        expect(kv(with_fast.out, "copy1_valid") == "0", "washed copy 1 is corrupted");
        expect(kv(with_fast.out, "copy2_valid") == "1", "washed copy 2 verifies");
        const int fixes = std::stoi(kv(with_fast.out, "total_fixes"));
        expect(fixes > 0, "FAST reports fixes on the washed specimen");

        CliResult no_fast = run_cli("inspect " + fancy_img.string() + " --no-fast");
        expect(no_fast.exit_code == 0, "--no-fast inspect succeeds");
        expect(kv(no_fast.out, "total_fixes") == "0", "--no-fast reports zero fixes");
        expect(kv(no_fast.out, "fast") == "0", "--no-fast flags recovery off");
    }

    // --- inspect artifacts: grid dump and black-white re-render -------------
    {
        const fs::path grid_out = work / "dump.grid";
        const fs::path render_out = work / "rerender.ppm";
        CliResult r = run_cli("inspect " + plain_img.string() + " --grid-out " +
                              grid_out.string() + " --render-out " + render_out.string());
        expect(r.exit_code == 0, "inspect writes artifacts");

        std::ifstream gf(grid_out);
        BinaryGrid dumped = read_grid_text(gf);
        expect(dumped == enc.grid, "grid dump equals the encoded grid");

        GrayImage re = load_image(render_out.string());
        auto [prepared, rep] = preprocess(re);
        expect(extract(prepared).grid == enc.grid, "re-render extracts to the same grid");
    }

    // --- unidentifiable input: exit 2 and the exact message -----------------
    {
        GrayImage noise = GrayImage::filled(64, 64, 130);
        for (size_t i = 0; i < noise.luminance.size(); i += 3) noise.luminance[i] = 150;
        const fs::path noise_img = work / "noise.pgm";
        save_pgm(noise_img.string(), noise);
        CliResult r = run_cli("inspect " + noise_img.string());
        expect(r.exit_code == 2, "inspect exits 2 on unidentifiable input");
        expect(r.out.find("cannot identify fancy QR code") != std::string::npos,
               "inspect prints the exact error string");
    }

    // --- classify: model errors exit 3, io errors exit 1 --------------------
    {
        CliResult r = run_cli("classify " + plain_img.string() + " --model " +
                              (work / "missing.json").string());
        expect(r.exit_code == 3, "missing model exits 3");

        std::ofstream bad(work / "bad.json");
        bad << "{\"schema\":\"other/1\"}";
        bad.close();
        CliResult r2 = run_cli("classify " + plain_img.string() + " --model " +
                               (work / "bad.json").string());
        expect(r2.exit_code == 3, "schema mismatch exits 3");
    }

    // --- end-to-end: train a tiny model through the CLI, then classify ------
    {
        const std::string corpus = (work / "corpus").string();
        CliResult synth = run_cli("synth --out " + corpus +
                                  " --count 40 --seed 5 --tag cli --styles plain --ecc M");
        expect(synth.exit_code == 0, "synth succeeds");

        const std::string csv = (work / "features.csv").string();
        CliResult feats = run_cli("featurize --corpus " + corpus + " --out " + csv);
        expect(feats.exit_code == 0, "featurize succeeds");

        const std::string model = (work / "model.json").string();
        CliResult tr = run_cli("train --features " + csv + " --out " + model +
                               " --trees 20 --depth 4 --seed 9");
        expect(tr.exit_code == 0, "train succeeds");

        CliResult c1 = run_cli("classify " + plain_img.string() + " --model " + model + " --json");
        CliResult c2 = run_cli("classify " + plain_img.string() + " --model " + model + " --json");
        expect(c1.exit_code == 0, "classify exits 0");
        expect(c1.out == c2.out, "classify output is byte-identical across runs");
        expect(c1.out.find("\"label\"") != std::string::npos, "classify emits a label");

        CliResult missing_img = run_cli("classify " + (work / "nope.ppm").string() +
                                        " --model " + model);
        expect(missing_img.exit_code == 1, "missing image exits 1");

        CliResult ev = run_cli("eval --corpus " + corpus + " --model " + model);
        expect(ev.exit_code == 0, "eval succeeds");
        expect(ev.out.find("Unsuccessful Scans") != std::string::npos, "eval prints the table");
    }

    // --- recover: before/after grids with key=value report ------------------
    {
        BinaryGrid dirty = enc.grid;
        for (int j = 0; j < 7; ++j) dirty.set(0, j, 0); // wipe a finder row
        const fs::path dirty_grid = work / "dirty.grid";
        std::ofstream f(dirty_grid);
        write_grid_text(f, dirty);
        f.close();

        const fs::path fixed_grid = work / "fixed.grid";
        CliResult r = run_cli("recover " + dirty_grid.string() + " --out " + fixed_grid.string());
        expect(r.exit_code == 0, "recover exits 0");
        expect(r.out.find("before:") != std::string::npos, "recover prints the before grid");
        expect(r.out.find("after:") != std::string::npos, "recover prints the after grid");
        expect(kv(r.out, "finder_fixes") == "7", "recover counts the wiped finder row");

        std::ifstream ff(fixed_grid);
        expect(read_grid_text(ff) == enc.grid, "recovered grid equals the clean symbol");
    }

    fs::remove_all(work);
    if (g_failures == 0) {
        std::cout << "test_cli: all checks passed\n";
        return 0;
    }
    std::cout << "test_cli: " << g_failures << " checks failed\n";
    return 1;
}
