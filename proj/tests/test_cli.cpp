// End-to-end tests of the command-line front end, run in-process.
//
// Covers the synth -> fit -> score -> eval pipeline, ablation sweeps,
// deterministic artifacts, and the exit-code contract
// (0 ok / 1 usage / 2 data / 3 numerical).

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "wdisc/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("wdisc_cli_test_" + std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

/// Runs the CLI in-process with captured stdout/stderr.
RunResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    std::streambuf* old_out = std::cout.rdbuf(out.rdbuf());
    std::streambuf* old_err = std::cerr.rdbuf(err.rdbuf());
    RunResult r;
    try {
        r.code = wdisc::cli::run(args);
    } catch (...) {
        std::cout.rdbuf(old_out);
        std::cerr.rdbuf(old_err);
        throw;
    }
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t count = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size()))
        ++count;
    return count;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) lines.push_back(line);
    return lines;
}

/// Small residual-shift benchmark spec; fast to generate and fit.
const char* kSpecJson = R"({
  "schema": 1,
  "d": 10,
  "c": 3,
  "n_per_class": 200,
  "class_mean_scale": 5.0,
  "within_noise": 1.0,
  "seed": 11,
  "n_ood": 300,
  "ood_kind": "mean_shift",
  "shift_magnitude": 8.0,
  "shift_subspace": "residual"
})";

/// Generates a benchmark under dir/bench and returns the manifest path.
std::string make_benchmark(const TempDir& dir) {
    const std::string spec = dir.file("spec.json");
    std::ofstream(spec) << kSpecJson;
    const std::string bench = dir.file("bench");
    const RunResult r = run_cli({"synth", spec, bench});
    REQUIRE(r.code == 0);
    return bench + "/manifest.json";
}

}  // namespace

TEST_CASE("pipeline: synth -> fit -> score -> eval produces a complete report") {
    TempDir dir;
    const std::string manifest = make_benchmark(dir);

    // synth laid down the expected files.
    CHECK(fs::exists(dir.file("bench/train.fmat")));
    CHECK(fs::exists(dir.file("bench/train.lvec")));
    CHECK(fs::exists(dir.file("bench/id_test.fmat")));
    CHECK(fs::exists(dir.file("bench/ood_shift_residual.fmat")));
    CHECK(fs::exists(dir.file("bench/spec.json")));

    const RunResult fit = run_cli({"fit", manifest});
    REQUIRE(fit.code == 0);
    CHECK(fs::exists(dir.file("bench/out/models/wlda.model")));
    CHECK(fs::exists(dir.file("bench/out/models/maha.model")));
    CHECK(fs::exists(dir.file("bench/out/models/knn.model")));
    CHECK(fs::exists(dir.file("bench/out/models/pca.model")));

    const RunResult score = run_cli({"score", manifest});
    REQUIRE(score.code == 0);
    // Six default scorers x two datasets, binary plus CSV each.
    for (const char* scorer : {"wdiscood", "wd", "wdr", "maha", "knn", "pr"}) {
        CHECK(fs::exists(dir.file("bench/out/scores/" + std::string(scorer) +
                                  "_id_test.fmat")));
        CHECK(fs::exists(dir.file("bench/out/scores/" + std::string(scorer) +
                                  "_shift_residual.fmat")));
        CHECK(fs::exists(dir.file("bench/out/scores/" + std::string(scorer) +
                                  "_shift_residual.csv")));
    }

    const RunResult eval = run_cli({"eval", manifest});
    REQUIRE(eval.code == 0);
    const std::string report = read_file(dir.file("bench/out/report.json"));
    // One entry per (scorer, ood_set): 6 x 1.
    CHECK(count_occurrences(report, "\"ood_set\"") == 6);
    for (const char* scorer : {"wdiscood", "wd", "wdr", "maha", "knn", "pr"})
        CHECK(report.find('"' + std::string(scorer) + '"') != std::string::npos);

    const std::string md = read_file(dir.file("bench/out/report.md"));
    CHECK(md.find("| Scorer |") == 0);
    CHECK(count_occurrences(md, "\n| wdiscood |") == 1);
    CHECK(md.find("shift_residual") != std::string::npos);

    // The eval stdout summarizes per-scorer averages.
    CHECK(eval.out.find("avg AUROC") != std::string::npos);

    // Residual-targeted shift at 8 sigma: the generated manifest pins the
    // discriminant count to the generator's reference model, so the shift
    // must be visible to the residual score (and to the fusion), while the
    // discriminative score alone stays near chance.
    const auto scorer_auroc = [&](const std::string& name) {
        const std::size_t at = report.find("\"scorer\": \"" + name + "\"");
        REQUIRE(at != std::string::npos);
        const std::size_t auroc_at = report.find("\"auroc\":", at);
        return std::stod(report.substr(auroc_at + 8));
    };
    CHECK(scorer_auroc("wdiscood") > 0.9);
    CHECK(scorer_auroc("wdr") > 0.9);
    CHECK(scorer_auroc("wd") < 0.75);
}

TEST_CASE("pipeline is deterministic: identical spec gives identical reports") {
    TempDir dir_a;
    TempDir dir_b;
    for (const TempDir* dir : {&dir_a, &dir_b}) {
        const std::string manifest = make_benchmark(*dir);
        REQUIRE(run_cli({"fit", manifest}).code == 0);
        REQUIRE(run_cli({"score", manifest}).code == 0);
        REQUIRE(run_cli({"eval", manifest}).code == 0);
    }
    CHECK(read_file(dir_a.file("bench/out/report.json")) ==
          read_file(dir_b.file("bench/out/report.json")));
    CHECK(read_file(dir_a.file("bench/out/report.md")) ==
          read_file(dir_b.file("bench/out/report.md")));
    // Score files are bit-identical too.
    CHECK(read_file(dir_a.file("bench/out/scores/wdiscood_shift_residual.fmat")) ==
          read_file(dir_b.file("bench/out/scores/wdiscood_shift_residual.fmat")));
}

TEST_CASE("overrides change the fitted model") {
    TempDir dir;
    const std::string manifest = make_benchmark(dir);
    REQUIRE(run_cli({"fit", manifest, "--n-disc", "2", "--alpha", "3.5"}).code == 0);
    REQUIRE(run_cli({"score", manifest, "--scorers", "wdiscood,wd"}).code == 0);
    CHECK(fs::exists(dir.file("bench/out/scores/wdiscood_id_test.fmat")));
    CHECK(fs::exists(dir.file("bench/out/scores/wd_id_test.fmat")));
    // Unrequested scorers were not produced.
    CHECK_FALSE(fs::exists(dir.file("bench/out/scores/knn_id_test.fmat")));

    const RunResult eval = run_cli({"eval", manifest, "--scorers", "wdiscood,wd"});
    REQUIRE(eval.code == 0);
    const std::string report = read_file(dir.file("bench/out/report.json"));
    CHECK(count_occurrences(report, "\"ood_set\"") == 2);
}

TEST_CASE("ablate: alpha sweep emits one row per value per ood set") {
    TempDir dir;
    const std::string manifest = make_benchmark(dir);
    const RunResult r = run_cli(
        {"ablate", manifest, "--sweep", "alpha=0.01,0.1,0.5,1,2,5,10,100"});
    REQUIRE(r.code == 0);
    const std::string csv = read_file(dir.file("bench/out/ablate_alpha.csv"));
    const auto lines = lines_of(csv);
    REQUIRE(lines.size() == 9);  // header + 8 values x 1 ood set
    CHECK(lines[0] == "param,value,ood_set,auroc,fpr95");
    for (std::size_t i = 1; i < lines.size(); ++i)
        CHECK(lines[i].rfind("alpha,", 0) == 0);
    CHECK(lines[1].find("alpha,0.01,shift_residual,") == 0);
    CHECK(lines[8].find("alpha,100,shift_residual,") == 0);
}

TEST_CASE("ablate: n_disc and n_fit sweeps run and bound-check") {
    TempDir dir;
    const std::string manifest = make_benchmark(dir);

    const RunResult nd = run_cli({"ablate", manifest, "--sweep", "n-disc=1,2,5"});
    REQUIRE(nd.code == 0);
    CHECK(lines_of(read_file(dir.file("bench/out/ablate_n_disc.csv"))).size() == 4);

    const RunResult nf = run_cli({"ablate", manifest, "--sweep", "n_fit=60,300"});
    REQUIRE(nf.code == 0);
    CHECK(lines_of(read_file(dir.file("bench/out/ablate_n_fit.csv"))).size() == 3);

    // n_disc beyond the feature dimension is a usage error.
    const RunResult bad = run_cli({"ablate", manifest, "--sweep", "n_disc=64"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("n_disc") != std::string::npos);
}

TEST_CASE("score: dimension mismatch names the offending file, exit code 2") {
    TempDir dir;
    const std::string manifest = make_benchmark(dir);
    REQUIRE(run_cli({"fit", manifest}).code == 0);

    // Replace the OOD features with a file of the wrong width.
    const std::string ood = dir.file("bench/ood_shift_residual.fmat");
    {
        std::ofstream trunc(ood, std::ios::binary);  // re-written below
    }
    // A 2-column FMAT written through the public API.
    const RunResult synth_small = [&] {
        std::ofstream(dir.file("small_spec.json")) << R"({
          "schema": 1, "d": 2, "c": 2, "n_per_class": 5,
          "class_mean_scale": 3.0, "within_noise": 1.0,
          "seed": 1, "n_ood": 5, "ood_kind": "uniform_box",
          "box_half_width": 2.0})";
        return run_cli({"synth", dir.file("small_spec.json"), dir.file("small")});
    }();
    REQUIRE(synth_small.code == 0);
    fs::copy_file(dir.file("small/id_test.fmat"), ood,
                  fs::copy_options::overwrite_existing);

    const RunResult r = run_cli({"score", manifest});
    CHECK(r.code == 2);
    CHECK(r.err.find("ood_shift_residual.fmat") != std::string::npos);
    CHECK(r.err.find("DimMismatch") != std::string::npos);
}

TEST_CASE("eval before score is a data error") {
    TempDir dir;
    const std::string manifest = make_benchmark(dir);
    const RunResult r = run_cli({"eval", manifest});
    CHECK(r.code == 2);
    CHECK(r.err.find("scores") != std::string::npos);
}

TEST_CASE("usage errors exit with code 1") {
    TempDir dir;
    CHECK(run_cli({}).code == 1);                       // no subcommand
    CHECK(run_cli({"frobnicate"}).code == 1);           // unknown subcommand
    CHECK(run_cli({"fit"}).code == 1);                  // missing manifest arg
    CHECK(run_cli({"fit", "m.json", "--bogus"}).code == 1);

    const std::string manifest = make_benchmark(dir);
    CHECK(run_cli({"ablate", manifest}).code == 1);  // missing --sweep
    CHECK(run_cli({"ablate", manifest, "--sweep", "gamma=1"}).code == 1);
    CHECK(run_cli({"ablate", manifest, "--sweep", "alpha="}).code == 1);
    CHECK(run_cli({"ablate", manifest, "--sweep", "n_disc=1.5"}).code == 1);
}

TEST_CASE("missing manifest is a data error") {
    const RunResult r = run_cli({"fit", "/nonexistent/manifest.json"});
    CHECK(r.code == 2);
}

TEST_CASE("help prints usage and exits zero") {
    const RunResult r = run_cli({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("fit") != std::string::npos);
    CHECK(r.out.find("synth") != std::string::npos);
}
