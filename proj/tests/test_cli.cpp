// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end subcommand tests. The binary path arrives via the CLHA_BIN
// environment variable set by CMake.
#include <sys/wait.h>

#include <cstdlib>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "test_util.hpp"

namespace {

using clha::testutil::TempDir;
using clha::testutil::read_file;
using clha::testutil::write_file;
using nlohmann::json;

struct CmdResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

CmdResult run_cli(const TempDir& dir, const std::string& args) {
    const char* bin = std::getenv("CLHA_BIN");
    if (bin == nullptr) throw std::runtime_error("CLHA_BIN is not set");
    const std::string out_path = dir.file("cli_stdout.txt");
    const std::string err_path = dir.file("cli_stderr.txt");
    const std::string cmd =
        std::string("\"") + bin + "\" " + args + " >" + out_path + " 2>" + err_path;
    const int rc = std::system(cmd.c_str());
    CmdResult result;
    result.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    result.out = read_file(out_path);
    result.err = read_file(err_path);
    return result;
}

long count_lines(const std::string& text) {
    long n = 0;
    for (char c : text) n += c == '\n';
    return n;
}

std::string train_config(const TempDir& dir, const json& overrides) {
    json cfg = {{"vocab_size", 16}, {"context_window", 2}, {"epochs", 2},
                {"learning_rate", 1e-2}, {"batch_size", 16}, {"seed", 5},
                {"optimizer", "adam"}, {"objective", "sft"}};
    cfg.update(overrides);
    const std::string path = dir.file("config_" + std::to_string(rand()) + ".json");
    write_file(path, cfg.dump());
    return path;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("gen writes the requested number of records") {
    TempDir dir;
    const std::string out = dir.file("data.jsonl");
    auto r = run_cli(dir, "gen --out " + out + " --records 100 --seed 3");
    CHECK(r.exit_code == 0);
    CHECK(count_lines(read_file(out)) == 100);
    auto manifest = json::parse(read_file(out + ".manifest.json"));
    CHECK(manifest.at("command") == "gen");
    CHECK(manifest.at("config").at("records") == 100);
}

TEST_CASE("gen rejects an out-of-range noise fraction with exit code 2") {
    TempDir dir;
    auto r = run_cli(dir, "gen --out " + dir.file("x.jsonl") + " --records 10 --noise 1.5");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("noise") != std::string::npos);
}

TEST_CASE("gen is byte-reproducible for a fixed seed") {
    TempDir dir;
    const std::string a = dir.file("a.jsonl");
    const std::string b = dir.file("b.jsonl");
    const std::string flags = " --records 60 --noise 0.25 --seed 11";
    CHECK(run_cli(dir, "gen --out " + a + flags).exit_code == 0);
    CHECK(run_cli(dir, "gen --out " + b + flags).exit_code == 0);
    CHECK(read_file(a) == read_file(b));
    auto ma = json::parse(read_file(a + ".manifest.json"));
    auto mb = json::parse(read_file(b + ".manifest.json"));
    CHECK(ma.at("seed") == mb.at("seed"));
}

TEST_CASE("rescore audits injected noise exactly and honors epsilon") {
    TempDir dir;
    const std::string data = dir.file("data.jsonl");
    const std::string oracle = dir.file("oracle.json");
    auto g = run_cli(dir, "gen --out " + data + " --records 40 --noise 0.3 --seed 6" +
                              " --emit-oracle " + oracle);
    REQUIRE(g.exit_code == 0);

    auto r = run_cli(dir, "rescore --data " + data + " --oracle " + oracle + " --epsilon 0.05" +
                              " --out " + dir.file("rescored.jsonl") + " --report " +
                              dir.file("report.json"));
    REQUIRE(r.exit_code == 0);
    auto report = json::parse(r.out);
    CHECK(report.at("records") == 40);
    CHECK(report.at("noisy_count") == 12);
    CHECK(report.at("noisy_indices").size() == 12);
    auto on_disk = json::parse(read_file(dir.file("report.json")));
    CHECK(on_disk == report);

    auto zero = run_cli(dir, "rescore --data " + data + " --oracle " + oracle +
                                 " --epsilon 0 --out " + dir.file("z.jsonl"));
    REQUIRE(zero.exit_code == 0);
    CHECK(json::parse(zero.out).at("gated_pairs_total") == 0);

    auto all = run_cli(dir, "rescore --data " + data + " --oracle " + oracle +
                                " --epsilon inf --out " + dir.file("i.jsonl"));
    REQUIRE(all.exit_code == 0);
    CHECK(json::parse(all.out).at("gated_pairs_total") == 40);

    auto neither = run_cli(dir, "rescore --data " + data + " --out " + dir.file("n.jsonl"));
    CHECK(neither.exit_code == 2);
    CHECK(neither.err.find("exactly one") != std::string::npos);
}

TEST_CASE("train reduces the sft loss across epochs and is reproducible") {
    TempDir dir;
    const std::string data = dir.file("data.jsonl");
    REQUIRE(run_cli(dir, "gen --out " + data + " --records 48 --seed 21").exit_code == 0);
    const std::string cfg = train_config(dir, {{"epochs", 3}});
    const std::string ckpt_a = dir.file("a.json");
    const std::string ckpt_b = dir.file("b.json");
    auto ra = run_cli(dir, "train --data " + data + " --config " + cfg + " --out " + ckpt_a);
    REQUIRE(ra.exit_code == 0);
    auto rb = run_cli(dir, "train --data " + data + " --config " + cfg + " --out " + ckpt_b);
    REQUIRE(rb.exit_code == 0);

    CHECK(read_file(ckpt_a) == read_file(ckpt_b));
    CHECK(read_file(ckpt_a + ".history.jsonl") == read_file(ckpt_b + ".history.jsonl"));

    std::vector<double> epoch_sum(3, 0.0);
    std::vector<int> epoch_n(3, 0);
    std::istringstream hist(read_file(ckpt_a + ".history.jsonl"));
    std::string line;
    while (std::getline(hist, line)) {
        auto j = json::parse(line);
        epoch_sum.at(j.at("epoch")) += j.at("total").get<double>();
        epoch_n.at(j.at("epoch")) += 1;
    }
    REQUIRE(epoch_n[0] > 0);
    REQUIRE(epoch_n[2] > 0);
    CHECK(epoch_sum[2] / epoch_n[2] < epoch_sum[0] / epoch_n[0]);
}

TEST_CASE("train records the hinge orientation flag in the manifest") {
    TempDir dir;
    const std::string data = dir.file("data.jsonl");
    const std::string oracle = dir.file("oracle.json");
    REQUIRE(run_cli(dir, "gen --out " + data + " --records 16 --seed 2 --emit-oracle " +
                             oracle).exit_code == 0);
    const std::string cfg = train_config(dir, {{"objective", "clha"}, {"oracle", oracle},
                                               {"epochs", 1}});
    const std::string ckpt = dir.file("m.json");
    auto r = run_cli(dir, "train --data " + data + " --config " + cfg + " --out " + ckpt +
                              " --eq4-as-printed");
    REQUIRE(r.exit_code == 0);
    auto manifest = json::parse(read_file(ckpt + ".manifest.json"));
    CHECK(manifest.at("config").at("eq4_as_printed") == true);
    CHECK(manifest.at("config").at("objective") == "clha");
}

TEST_CASE("train rejects an unknown objective with exit code 2") {
    TempDir dir;
    const std::string data = dir.file("data.jsonl");
    REQUIRE(run_cli(dir, "gen --out " + data + " --records 8 --seed 2").exit_code == 0);
    const std::string cfg = train_config(dir, json::object());
    auto r = run_cli(dir, "train --data " + data + " --config " + cfg + " --out " +
                              dir.file("m.json") + " --objective bogus");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("config error") != std::string::npos);
}

TEST_CASE("eval scores a checkpoint and bleu hits 1 on self references") {
    TempDir dir;
    const std::string data = dir.file("data.jsonl");
    const std::string oracle = dir.file("oracle.json");
    REQUIRE(run_cli(dir, "gen --out " + data + " --records 8 --seed 4 --emit-oracle " +
                             oracle).exit_code == 0);
    const std::string cfg = train_config(dir, {{"epochs", 0}});
    const std::string ckpt = dir.file("m.json");
    REQUIRE(run_cli(dir, "train --data " + data + " --config " + cfg + " --out " + ckpt)
                .exit_code == 0);

    json prompts = {{"vocab_size", 16},
                    {"tokenizer", "identity"},
                    {"prompts", {"0 1 2", "5 6", "7"}},
                    {"references", json::array()}};
    const std::string prompts_path = dir.file("prompts.json");
    write_file(prompts_path, prompts.dump());

    const std::string audit = dir.file("audit.jsonl");
    auto first = run_cli(dir, "eval --model " + ckpt + " --prompts " + prompts_path +
                                  " --oracle " + oracle + " --out " + audit + " --seed 9");
    REQUIRE(first.exit_code == 0);
    auto summary = json::parse(first.out);
    CHECK(summary.contains("mean_reward"));
    CHECK_FALSE(summary.contains("bleu"));

    json refs = json::array();
    std::istringstream lines(read_file(audit));
    std::string line;
    while (std::getline(lines, line)) {
        refs.push_back(json::array({json::parse(line).at("sample")}));
    }
    prompts["references"] = refs;
    write_file(prompts_path, prompts.dump());
    auto second = run_cli(dir, "eval --model " + ckpt + " --prompts " + prompts_path +
                                   " --oracle " + oracle + " --out " + audit + " --seed 9");
    REQUIRE(second.exit_code == 0);
    CHECK(json::parse(second.out).at("bleu") == 1.0);
}

TEST_CASE("compare ties a checkpoint against itself") {
    TempDir dir;
    const std::string data = dir.file("data.jsonl");
    const std::string oracle = dir.file("oracle.json");
    REQUIRE(run_cli(dir, "gen --out " + data + " --records 10 --seed 4 --emit-oracle " +
                             oracle).exit_code == 0);
    const std::string cfg = train_config(dir, {{"epochs", 0}});
    const std::string ckpt = dir.file("m.json");
    REQUIRE(run_cli(dir, "train --data " + data + " --config " + cfg + " --out " + ckpt)
                .exit_code == 0);
    const std::string prompts_path = dir.file("prompts.json");
    REQUIRE(run_cli(dir, "prompts --data " + data + " --out " + prompts_path + " --take 10")
                .exit_code == 0);
    auto r = run_cli(dir, "compare --model-a " + ckpt + " --model-b " + ckpt + " --prompts " +
                              prompts_path + " --oracle " + oracle + " --out " +
                              dir.file("cmp.jsonl") + " --seed 3");
    REQUIRE(r.exit_code == 0);
    auto counts = json::parse(r.out);
    CHECK(counts.at("wins") == 0);
    CHECK(counts.at("losses") == 0);
    CHECK(counts.at("ties") == 10);
}

TEST_CASE("eval reports a vocab mismatch naming both sizes") {
    TempDir dir;
    const std::string data = dir.file("data.jsonl");
    const std::string oracle = dir.file("oracle.json");
    REQUIRE(run_cli(dir, "gen --out " + data + " --records 8 --seed 4 --emit-oracle " +
                             oracle).exit_code == 0);
    const std::string cfg = train_config(dir, {{"epochs", 0}});
    const std::string ckpt = dir.file("m.json");
    REQUIRE(run_cli(dir, "train --data " + data + " --config " + cfg + " --out " + ckpt)
                .exit_code == 0);
    json prompts = {{"vocab_size", 8},
                    {"tokenizer", "identity"},
                    {"prompts", {"0 1"}},
                    {"references", json::array()}};
    const std::string prompts_path = dir.file("prompts.json");
    write_file(prompts_path, prompts.dump());
    auto r = run_cli(dir, "eval --model " + ckpt + " --prompts " + prompts_path + " --oracle " +
                              oracle + " --out " + dir.file("audit.jsonl"));
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("16") != std::string::npos);
    CHECK(r.err.find("8") != std::string::npos);
}

TEST_SUITE_END();
