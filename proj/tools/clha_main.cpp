// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
//
// Single-binary CLI: data generation, reward training, rescoring audits,
// alignment training across the ablation grid, and evaluation/comparison.
// Exit codes: 0 success, 2 usage/config error, 1 runtime failure.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>

#include "CLI11.hpp"
#include "clha/errors.hpp"
#include "clha/eval.hpp"
#include "clha/lm.hpp"
#include "clha/losses.hpp"
#include "clha/manifest.hpp"
#include "clha/oracle.hpp"
#include "clha/prefdata.hpp"
#include "clha/prompts.hpp"
#include "clha/reward.hpp"
#include "clha/trainer.hpp"
#include "json.hpp"

namespace {

using namespace clha;

double parse_epsilon(const std::string& text) {
    if (text == "inf" || text == "+inf" || text == "infinity") {
        return std::numeric_limits<double>::infinity();
    }
    try {
        std::size_t pos = 0;
        double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("--epsilon expects a number or 'inf', got '" + text + "'");
    }
}

OracleSpec default_oracle(int vocab_size) {
    if (vocab_size < 8) {
        throw ConfigError("built-in oracle needs vocab >= 8 (got " + std::to_string(vocab_size) +
                          "); pass --oracle instead");
    }
    OracleSpec oracle;
    oracle.target = {1, 2, 3};
    oracle.penalty = {4, 5, 6};
    oracle.vocab_size = vocab_size;
    return oracle;
}

nlohmann::json oracle_json(const OracleSpec& oracle) {
    return {{"target", oracle.target},
            {"penalty", oracle.penalty},
            {"vocab_size", oracle.vocab_size}};
}

void finish_manifest(RunManifest manifest, const nlohmann::json& resolved,
                     const std::string& primary_artifact) {
    manifest.config = resolved;
    manifest.config_digest = config_digest(resolved);
    manifest.finished = utc_timestamp();
    write_manifest(manifest, primary_artifact + ".manifest.json");
}

// ---------------------------------------------------------------- gen -----

struct GenArgs {
    std::string out;
    std::string oracle_path;
    std::string emit_oracle;
    int records = 0;
    double noise = 0.0;
    std::uint64_t seed = 0;
    int rank_len = 2;
    int vocab = 16;
    int query_len = 6;
    int response_len = 8;
};

int cmd_gen(const GenArgs& args) {
    RunManifest manifest;
    manifest.command = "gen";
    manifest.seed = args.seed;
    manifest.started = utc_timestamp();

    SynthConfig cfg;
    cfg.vocab_size = args.vocab;
    cfg.query_len = args.query_len;
    cfg.response_len = args.response_len;
    cfg.rank_len = args.rank_len;
    cfg.num_records = args.records;
    cfg.noise_fraction = args.noise;
    cfg.oracle =
        args.oracle_path.empty() ? default_oracle(args.vocab) : load_oracle(args.oracle_path);
    cfg.oracle.vocab_size = args.vocab;

    auto records = generate_synthetic(cfg, args.seed);
    IdentityTokenizer tok(args.vocab);
    write_jsonl(records, args.out, tok);
    manifest.artifact_paths.push_back(args.out);
    if (!args.emit_oracle.empty()) {
        save_oracle(cfg.oracle, args.emit_oracle);
        manifest.artifact_paths.push_back(args.emit_oracle);
    }

    nlohmann::json resolved = {{"command", "gen"},         {"out", args.out},
                               {"records", args.records},  {"noise", args.noise},
                               {"seed", args.seed},        {"rank_len", args.rank_len},
                               {"vocab", args.vocab},      {"query_len", args.query_len},
                               {"response_len", args.response_len},
                               {"oracle", oracle_json(cfg.oracle)}};
    finish_manifest(manifest, resolved, args.out);
    std::cerr << "wrote " << records.size() << " records to " << args.out << "\n";
    return 0;
}

// ------------------------------------------------------- train-reward -----

struct TrainRewardArgs {
    std::string data;
    std::string out;
    int vocab = 16;
    std::string tokenizer = "identity";
    int epochs = 20;
    double lr = 1e-2;
    int batch_size = 16;
    std::uint64_t seed = 0;
    std::string optimizer = "adam";
};

int cmd_train_reward(const TrainRewardArgs& args) {
    RunManifest manifest;
    manifest.command = "train-reward";
    manifest.seed = args.seed;
    manifest.started = utc_timestamp();

    auto tok = make_tokenizer(args.tokenizer, args.vocab);
    auto records = load_jsonl(args.data, *tok);
    OptimizerConfig cfg;
    cfg.kind = optimizer_from_string(args.optimizer);
    cfg.learning_rate = args.lr;
    cfg.epochs = args.epochs;
    cfg.batch_size = args.batch_size;
    cfg.seed = args.seed;

    RewardScorer scorer = train_reward(RewardScorer::make(tok->vocab_size()), records, cfg);
    save_scorer(scorer, args.out);
    manifest.artifact_paths.push_back(args.out);

    nlohmann::json resolved = {{"command", "train-reward"},
                               {"data", args.data},
                               {"out", args.out},
                               {"vocab", tok->vocab_size()},
                               {"tokenizer", args.tokenizer},
                               {"epochs", args.epochs},
                               {"learning_rate", args.lr},
                               {"batch_size", args.batch_size},
                               {"seed", args.seed},
                               {"optimizer", args.optimizer}};
    finish_manifest(manifest, resolved, args.out);
    std::cerr << "trained reward scorer on " << records.size() << " records -> " << args.out
              << "\n";
    return 0;
}

// ----------------------------------------------------------- rescore -----

struct RescoreArgs {
    std::string data;
    std::string scorer;
    std::string oracle;
    std::string epsilon_text = "0.05";
    std::string out;
    std::string report;
    int vocab = 16;
    std::string tokenizer = "identity";
};

int cmd_rescore(const RescoreArgs& args) {
    RunManifest manifest;
    manifest.command = "rescore";
    manifest.started = utc_timestamp();

    const double epsilon = parse_epsilon(args.epsilon_text);
    if (args.scorer.empty() == args.oracle.empty()) {
        throw ConfigError("rescore needs exactly one of --scorer or --oracle");
    }
    auto tok = make_tokenizer(args.tokenizer, args.vocab);
    auto records = load_jsonl(args.data, *tok);

    ScoreFn fn;
    nlohmann::json scorer_cfg;
    if (!args.scorer.empty()) {
        auto scorer = load_scorer(args.scorer);
        if (scorer.vocab_size != tok->vocab_size()) {
            throw ConfigError("scorer vocab " + std::to_string(scorer.vocab_size) +
                              " != data vocab " + std::to_string(tok->vocab_size()));
        }
        fn = [scorer](const TokenSequence& q, const TokenSequence& r) {
            return scorer.score(q, r);
        };
        scorer_cfg = {{"scorer", args.scorer}};
    } else {
        OracleSpec oracle = load_oracle(args.oracle);
        fn = [oracle](const TokenSequence&, const TokenSequence& r) {
            return oracle_reward(r, oracle);
        };
        scorer_cfg = {{"oracle", args.oracle}};
    }

    std::ofstream out(args.out);
    if (!out) throw ConfigError("cannot write rescored dataset " + args.out);
    long noisy_count = 0;
    long gated_total = 0;
    std::vector<long> noisy_indices;
    for (std::size_t idx = 0; idx < records.size(); ++idx) {
        RescoredRecord rr = rescore(fn, records[idx], epsilon);
        nlohmann::json line;
        line["prompt"] = tok->decode(rr.record.query);
        auto responses = nlohmann::json::array();
        for (const auto& r : rr.record.responses) responses.push_back(tok->decode(r));
        line["responses"] = std::move(responses);
        if (!rr.record.source_tag.empty()) line["source_tag"] = rr.record.source_tag;
        line["rewards"] = rr.rewards;
        line["lambda"] = rr.noise.is_noisy ? 1 : 0;
        auto gated = nlohmann::json::array();
        const int n = rr.record.ranking_length();
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (rr.k_mask[i][j]) {
                    gated.push_back(nlohmann::json::array({i, j}));
                    ++gated_total;
                }
            }
        }
        line["k_gated_pairs"] = std::move(gated);
        out << line.dump() << "\n";
        if (rr.noise.is_noisy) {
            ++noisy_count;
            noisy_indices.push_back(static_cast<long>(idx));
        }
    }
    out.close();
    manifest.artifact_paths.push_back(args.out);

    nlohmann::json report = {{"records", records.size()},
                             {"noisy_count", noisy_count},
                             {"noisy_indices", noisy_indices},
                             {"gated_pairs_total", gated_total},
                             {"epsilon", epsilon}};
    if (!args.report.empty()) {
        std::ofstream rep(args.report);
        if (!rep) throw ConfigError("cannot write report " + args.report);
        rep << report.dump(2) << "\n";
        manifest.artifact_paths.push_back(args.report);
    }
    std::cout << report.dump() << "\n";

    nlohmann::json resolved = {{"command", "rescore"}, {"data", args.data},
                               {"epsilon", epsilon},   {"out", args.out},
                               {"report", args.report}, {"vocab", tok->vocab_size()},
                               {"tokenizer", args.tokenizer}};
    resolved.update(scorer_cfg);
    finish_manifest(manifest, resolved, args.out);
    return 0;
}

// ------------------------------------------------------------- train -----

struct TrainArgs {
    std::string data;
    std::string config;
    std::string objective;
    std::string out;
    std::string history;
    std::string exec = "openmp";
    bool eq4_as_printed = false;
    bool has_seed = false;
    std::uint64_t seed = 0;
    bool epoch_checkpoints = false;
};

int cmd_train(const TrainArgs& args) {
    RunManifest manifest;
    manifest.command = "train";
    manifest.started = utc_timestamp();

    std::ifstream cfg_in(args.config);
    if (!cfg_in) throw ConfigError("cannot open config " + args.config);
    nlohmann::json jcfg;
    try {
        cfg_in >> jcfg;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed config " + args.config + ": " + e.what());
    }

    TrainConfig cfg;
    int vocab = 16;
    int context_window = 2;
    std::string tokenizer_name = "identity";
    std::string scorer_path, oracle_path;
    try {
        vocab = jcfg.value("vocab_size", 16);
        context_window = jcfg.value("context_window", 2);
        cfg.epochs = jcfg.value("epochs", 2);
        cfg.learning_rate = jcfg.value("learning_rate", 1e-2);
        cfg.batch_size = jcfg.value("batch_size", 16);
        cfg.seed = jcfg.value("seed", 0);
        cfg.optimizer = optimizer_from_string(jcfg.value("optimizer", "adam"));
        cfg.clip_norm = jcfg.value("clip_norm", 10.0);
        cfg.margin_cfg.margin = jcfg.value("margin", 0.1);
        cfg.margin_cfg.epsilon = jcfg.value("epsilon", 0.05);
        cfg.objective = objective_from_string(jcfg.value("objective", "clha"));
        tokenizer_name = jcfg.value("tokenizer", "identity");
        scorer_path = jcfg.value("scorer", "");
        oracle_path = jcfg.value("oracle", "");
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("bad config schema in " + args.config + ": " + e.what());
    }
    if (!args.objective.empty()) cfg.objective = objective_from_string(args.objective);
    if (args.has_seed) cfg.seed = args.seed;
    cfg.margin_cfg.eq4_as_printed = args.eq4_as_printed;
    cfg.exec = exec_mode_from_string(args.exec);
    manifest.seed = cfg.seed;

    if (!scorer_path.empty() && !oracle_path.empty()) {
        throw ConfigError("config sets both scorer and oracle; pick one");
    }
    ScoreFn fn;
    if (!scorer_path.empty()) {
        auto scorer = load_scorer(scorer_path);
        if (scorer.vocab_size != vocab) {
            throw ConfigError("scorer vocab " + std::to_string(scorer.vocab_size) +
                              " != config vocab " + std::to_string(vocab));
        }
        fn = [scorer](const TokenSequence& q, const TokenSequence& r) {
            return scorer.score(q, r);
        };
    } else if (!oracle_path.empty()) {
        OracleSpec oracle = load_oracle(oracle_path);
        fn = [oracle](const TokenSequence&, const TokenSequence& r) {
            return oracle_reward(r, oracle);
        };
    }

    auto tok = make_tokenizer(tokenizer_name, vocab);
    auto records = load_jsonl(args.data, *tok);
    TinyLM model = make_model(tok->vocab_size(), context_window);

    const std::string history_path =
        args.history.empty() ? args.out + ".history.jsonl" : args.history;
    const std::string stem =
        args.out.size() > 5 && args.out.ends_with(".json")
            ? args.out.substr(0, args.out.size() - 5)
            : args.out;

    std::function<void(int, const TinyLM&)> on_epoch_end;
    std::vector<std::string> epoch_paths;
    if (args.epoch_checkpoints) {
        on_epoch_end = [&](int epoch, const TinyLM& m) {
            std::string path = stem + ".epoch" + std::to_string(epoch) + ".json";
            save_model(m, path);
            epoch_paths.push_back(path);
        };
    }

    TrainResult result = train(std::move(model), fn, records, cfg, on_epoch_end);
    save_model(result.model, args.out);

    std::ofstream hist(history_path);
    if (!hist) throw ConfigError("cannot write history " + history_path);
    for (const auto& rep : result.history) {
        nlohmann::json line = {{"step", rep.step},        {"epoch", rep.epoch},
                               {"clha", rep.clha},        {"sft", rep.sft},
                               {"total", rep.total},      {"lambda", rep.lambda_mean},
                               {"gated_pairs", rep.gated_pairs},
                               {"grad_norm", rep.grad_norm}};
        hist << line.dump() << "\n";
    }
    hist.close();

    manifest.artifact_paths.push_back(args.out);
    manifest.artifact_paths.push_back(history_path);
    for (const auto& p : epoch_paths) manifest.artifact_paths.push_back(p);

    nlohmann::json resolved = {{"command", "train"},
                               {"data", args.data},
                               {"out", args.out},
                               {"history", history_path},
                               {"vocab_size", vocab},
                               {"context_window", context_window},
                               {"epochs", cfg.epochs},
                               {"learning_rate", cfg.learning_rate},
                               {"batch_size", cfg.batch_size},
                               {"seed", cfg.seed},
                               {"optimizer", to_string(cfg.optimizer)},
                               {"clip_norm", cfg.clip_norm},
                               {"margin", cfg.margin_cfg.margin},
                               {"epsilon", cfg.margin_cfg.epsilon},
                               {"objective", to_string(cfg.objective)},
                               {"eq4_as_printed", cfg.margin_cfg.eq4_as_printed},
                               {"tokenizer", tokenizer_name},
                               {"scorer", scorer_path},
                               {"oracle", oracle_path},
                               {"epoch_checkpoints", args.epoch_checkpoints}};
    finish_manifest(manifest, resolved, args.out);

    const double final_total = result.history.empty() ? 0.0 : result.history.back().total;
    std::fprintf(stderr, "objective %s: %zu steps, final batch loss %.6f -> %s\n",
                 to_string(cfg.objective).c_str(), result.history.size(), final_total,
                 args.out.c_str());
    return 0;
}

// -------------------------------------------------------- eval/compare ----

struct EvalArgs {
    std::string model;
    std::string prompts;
    std::string oracle;
    std::string out;
    std::string summary;
    std::uint64_t seed = 0;
    int max_len = 8;
    std::string exec = "openmp";
};

void check_vocab(int model_vocab, int prompts_vocab, const OracleSpec& oracle) {
    if (model_vocab != prompts_vocab) {
        throw ConfigError("model vocab " + std::to_string(model_vocab) + " != prompts vocab " +
                          std::to_string(prompts_vocab));
    }
    if (oracle.vocab_size > 0 && oracle.vocab_size != model_vocab) {
        throw ConfigError("oracle vocab " + std::to_string(oracle.vocab_size) +
                          " != model vocab " + std::to_string(model_vocab));
    }
}

int cmd_eval(const EvalArgs& args) {
    RunManifest manifest;
    manifest.command = "eval";
    manifest.seed = args.seed;
    manifest.started = utc_timestamp();

    TinyLM model = load_model(args.model);
    PromptSet set = load_prompts(args.prompts);
    OracleSpec oracle = load_oracle(args.oracle);
    check_vocab(model.vocab_size, set.vocab_size, oracle);

    EvalResult result = evaluate(model, set.prompts, oracle, set.references, args.seed,
                                 args.max_len, exec_mode_from_string(args.exec));

    auto tok = make_tokenizer(set.tokenizer_name, set.vocab_size);
    std::ofstream audit(args.out);
    if (!audit) throw ConfigError("cannot write audit " + args.out);
    for (std::size_t i = 0; i < result.per_prompt.size(); ++i) {
        const PromptEval& pe = result.per_prompt[i];
        nlohmann::json line = {{"prompt_index", i},
                               {"reward", pe.reward},
                               {"sample", tok->decode(pe.sample)}};
        if (pe.bleu) line["bleu"] = *pe.bleu;
        audit << line.dump() << "\n";
    }
    audit.close();
    manifest.artifact_paths.push_back(args.out);

    nlohmann::json summary = {{"mean_reward", result.summary.mean_reward}};
    if (result.summary.bleu) summary["bleu"] = *result.summary.bleu;
    if (!args.summary.empty()) {
        std::ofstream s(args.summary);
        if (!s) throw ConfigError("cannot write summary " + args.summary);
        s << summary.dump(2) << "\n";
        manifest.artifact_paths.push_back(args.summary);
    }
    std::cout << summary.dump() << "\n";
    std::fprintf(stderr, "mean_reward %.6f over %zu prompts\n", result.summary.mean_reward,
                 result.per_prompt.size());

    nlohmann::json resolved = {{"command", "eval"},     {"model", args.model},
                               {"prompts", args.prompts}, {"oracle", args.oracle},
                               {"out", args.out},       {"summary", args.summary},
                               {"seed", args.seed},     {"max_len", args.max_len}};
    finish_manifest(manifest, resolved, args.out);
    return 0;
}

struct CompareArgs {
    std::string model_a;
    std::string model_b;
    std::string prompts;
    std::string oracle;
    std::string out;
    std::uint64_t seed = 0;
    int max_len = 8;
    double tie_delta = 1e-9;
    std::string exec = "openmp";
};

int cmd_compare(const CompareArgs& args) {
    RunManifest manifest;
    manifest.command = "compare";
    manifest.seed = args.seed;
    manifest.started = utc_timestamp();

    TinyLM model_a = load_model(args.model_a);
    TinyLM model_b = load_model(args.model_b);
    PromptSet set = load_prompts(args.prompts);
    OracleSpec oracle = load_oracle(args.oracle);
    check_vocab(model_a.vocab_size, set.vocab_size, oracle);
    check_vocab(model_b.vocab_size, set.vocab_size, oracle);

    CompareResult result = compare(model_a, model_b, set.prompts, oracle, args.seed,
                                   args.max_len, args.tie_delta,
                                   exec_mode_from_string(args.exec));

    std::ofstream audit(args.out);
    if (!audit) throw ConfigError("cannot write audit " + args.out);
    for (std::size_t i = 0; i < set.prompts.size(); ++i) {
        const double ra = result.reward_a[i];
        const double rb = result.reward_b[i];
        const char* outcome =
            ra > rb + args.tie_delta ? "win" : (rb > ra + args.tie_delta ? "loss" : "tie");
        nlohmann::json line = {{"prompt_index", i},
                               {"reward_a", ra},
                               {"reward_b", rb},
                               {"outcome", outcome}};
        audit << line.dump() << "\n";
    }
    audit.close();
    manifest.artifact_paths.push_back(args.out);

    nlohmann::json summary = {{"wins", result.counts.wins},
                              {"ties", result.counts.ties},
                              {"losses", result.counts.losses}};
    std::cout << summary.dump() << "\n";
    std::fprintf(stderr, "wins %ld ties %ld losses %ld\n", result.counts.wins,
                 result.counts.ties, result.counts.losses);

    nlohmann::json resolved = {{"command", "compare"},   {"model_a", args.model_a},
                               {"model_b", args.model_b}, {"prompts", args.prompts},
                               {"oracle", args.oracle},  {"out", args.out},
                               {"seed", args.seed},      {"max_len", args.max_len},
                               {"tie_delta", args.tie_delta}};
    finish_manifest(manifest, resolved, args.out);
    return 0;
}

// ----------------------------------------------------------- prompts -----

struct PromptsArgs {
    std::string data;
    std::string out;
    int take = 0;
    int vocab = 16;
    std::string tokenizer = "identity";
    bool refs_from_top = true;
};

int cmd_prompts(const PromptsArgs& args) {
    RunManifest manifest;
    manifest.command = "prompts";
    manifest.started = utc_timestamp();

    auto tok = make_tokenizer(args.tokenizer, args.vocab);
    auto records = load_jsonl(args.data, *tok);
    PromptSet set;
    set.vocab_size = tok->vocab_size();
    set.tokenizer_name = args.tokenizer;
    const std::size_t limit =
        args.take > 0 ? std::min<std::size_t>(args.take, records.size()) : records.size();
    for (std::size_t i = 0; i < limit; ++i) {
        set.prompts.push_back(records[i].query);
        if (args.refs_from_top) set.references.push_back({records[i].responses[0]});
    }
    save_prompts(set, args.out);
    manifest.artifact_paths.push_back(args.out);

    nlohmann::json resolved = {{"command", "prompts"},   {"data", args.data},
                               {"out", args.out},        {"take", args.take},
                               {"vocab", tok->vocab_size()}, {"tokenizer", args.tokenizer},
                               {"refs_from_top", args.refs_from_top}};
    finish_manifest(manifest, resolved, args.out);
    std::cerr << "wrote " << set.prompts.size() << " prompts to " << args.out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CLHA preference-alignment toolkit"};
    app.require_subcommand(1);

    GenArgs gen_args;
    auto* gen = app.add_subcommand("gen", "Generate a synthetic preference dataset");
    gen->add_option("--out", gen_args.out, "Output JSONL path")->required();
    gen->add_option("--records", gen_args.records, "Number of records")->required();
    gen->add_option("--noise", gen_args.noise, "Injected noise fraction in [0,1]");
    gen->add_option("--seed", gen_args.seed, "RNG seed");
    gen->add_option("--rank-len", gen_args.rank_len, "Responses per record (2 or 3)");
    gen->add_option("--vocab", gen_args.vocab, "Vocabulary size");
    gen->add_option("--query-len", gen_args.query_len, "Query length in tokens");
    gen->add_option("--response-len", gen_args.response_len, "Response length in tokens");
    gen->add_option("--oracle", gen_args.oracle_path, "Oracle JSON to use instead of built-in");
    gen->add_option("--emit-oracle", gen_args.emit_oracle, "Write the oracle used to this path");

    TrainRewardArgs tr_args;
    auto* tr = app.add_subcommand("train-reward", "Train the linear reward scorer");
    tr->add_option("--data", tr_args.data, "Training dataset JSONL")->required();
    tr->add_option("--out", tr_args.out, "Output scorer JSON")->required();
    tr->add_option("--vocab", tr_args.vocab, "Vocabulary size");
    tr->add_option("--tokenizer", tr_args.tokenizer, "identity or byte");
    tr->add_option("--epochs", tr_args.epochs, "Training epochs");
    tr->add_option("--lr", tr_args.lr, "Learning rate");
    tr->add_option("--batch-size", tr_args.batch_size, "Records per batch");
    tr->add_option("--seed", tr_args.seed, "RNG seed");
    tr->add_option("--optimizer", tr_args.optimizer, "sgd or adam");

    RescoreArgs rs_args;
    auto* rs = app.add_subcommand("rescore", "Rescore a dataset and audit noise");
    rs->add_option("--data", rs_args.data, "Dataset JSONL")->required();
    rs->add_option("--scorer", rs_args.scorer, "Learned scorer JSON");
    rs->add_option("--oracle", rs_args.oracle, "Oracle JSON (alternative to --scorer)");
    rs->add_option("--epsilon", rs_args.epsilon_text, "Reward-gap gate (number or 'inf')");
    rs->add_option("--out", rs_args.out, "Rescored JSONL path")->required();
    rs->add_option("--report", rs_args.report, "Noise report JSON path");
    rs->add_option("--vocab", rs_args.vocab, "Vocabulary size");
    rs->add_option("--tokenizer", rs_args.tokenizer, "identity or byte");

    TrainArgs tn_args;
    auto* tn = app.add_subcommand("train", "Train the language model on preferences");
    tn->add_option("--data", tn_args.data, "Dataset JSONL")->required();
    tn->add_option("--config", tn_args.config, "Training config JSON")->required();
    tn->add_option("--objective", tn_args.objective,
                   "clha, clha_no_rescore, clha_no_contrastive, clha_no_xi, pro, sft");
    tn->add_option("--out", tn_args.out, "Checkpoint path")->required();
    tn->add_option("--history", tn_args.history, "History JSONL (default <out>.history.jsonl)");
    auto* seed_opt = tn->add_option("--seed", tn_args.seed, "Override config seed");
    tn->add_option("--exec", tn_args.exec, "serial or openmp");
    tn->add_flag("--eq4-as-printed", tn_args.eq4_as_printed,
                 "Use the as-printed hinge orientation (audit mode)");
    tn->add_flag("--epoch-checkpoints", tn_args.epoch_checkpoints,
                 "Also write a checkpoint after every epoch");

    EvalArgs ev_args;
    auto* ev = app.add_subcommand("eval", "Sample and score a model on prompts");
    ev->add_option("--model", ev_args.model, "Checkpoint path")->required();
    ev->add_option("--prompts", ev_args.prompts, "Prompts JSON")->required();
    ev->add_option("--oracle", ev_args.oracle, "Oracle JSON")->required();
    ev->add_option("--out", ev_args.out, "Per-prompt audit JSONL")->required();
    ev->add_option("--summary", ev_args.summary, "Also write the summary JSON here");
    ev->add_option("--seed", ev_args.seed, "Sampling seed");
    ev->add_option("--max-len", ev_args.max_len, "Sampling length cap");
    ev->add_option("--exec", ev_args.exec, "serial or openmp");

    CompareArgs cp_args;
    auto* cp = app.add_subcommand("compare", "A-vs-B win rate on shared prompts");
    cp->add_option("--model-a", cp_args.model_a, "Checkpoint A")->required();
    cp->add_option("--model-b", cp_args.model_b, "Checkpoint B")->required();
    cp->add_option("--prompts", cp_args.prompts, "Prompts JSON")->required();
    cp->add_option("--oracle", cp_args.oracle, "Oracle JSON")->required();
    cp->add_option("--out", cp_args.out, "Per-prompt audit JSONL")->required();
    cp->add_option("--seed", cp_args.seed, "Sampling seed");
    cp->add_option("--max-len", cp_args.max_len, "Sampling length cap");
    cp->add_option("--tie-delta", cp_args.tie_delta, "Reward gap treated as a tie");
    cp->add_option("--exec", cp_args.exec, "serial or openmp");

    PromptsArgs pr_args;
    auto* pr = app.add_subcommand("prompts", "Extract an eval prompt set from a dataset");
    pr->add_option("--data", pr_args.data, "Dataset JSONL")->required();
    pr->add_option("--out", pr_args.out, "Prompts JSON path")->required();
    pr->add_option("--take", pr_args.take, "Use only the first N records");
    pr->add_option("--vocab", pr_args.vocab, "Vocabulary size");
    pr->add_option("--tokenizer", pr_args.tokenizer, "identity or byte");
    pr->add_flag("!--no-refs", pr_args.refs_from_top,
                 "Skip top-ranked responses as references");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (*gen) return cmd_gen(gen_args);
        if (*tr) return cmd_train_reward(tr_args);
        if (*rs) return cmd_rescore(rs_args);
        if (*tn) {
            tn_args.has_seed = seed_opt->count() > 0;
            return cmd_train(tn_args);
        }
        if (*ev) return cmd_eval(ev_args);
        if (*cp) return cmd_compare(cp_args);
        if (*pr) return cmd_prompts(pr_args);
    } catch (const clha::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
