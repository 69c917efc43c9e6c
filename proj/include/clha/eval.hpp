// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clha/lm.hpp"
#include "clha/oracle.hpp"
#include "clha/parallel.hpp"
#include "clha/types.hpp"

namespace clha {

struct WinRate {
    long wins = 0;
    long ties = 0;
    long losses = 0;
};

struct EvalSummary {
    double mean_reward = 0.0;
    std::optional<double> bleu;  // present when references were supplied
    std::optional<WinRate> win_rate;
};

/// Sentence BLEU: clipped n-gram precisions for n = 1..max_n, geometric mean
/// over the orders where the hypothesis has any n-grams, brevity penalty
/// exp(1 - r/c) against the closest reference length (ties prefer the
/// shorter), no smoothing: any zero precision makes the score 0.
double bleu(const TokenSequence& hypothesis, const std::vector<TokenSequence>& references,
            int max_n = 4);

struct PromptEval {
    double reward = 0.0;
    std::optional<double> bleu;
    TokenSequence sample;
};

/// Samples one response per prompt (per-prompt seed derived from `seed`, so
/// evaluation order and concurrency do not matter) and scores it with the
/// oracle and, when references are given, sentence BLEU. references, when
/// nonempty, must have one entry (a list of reference sequences) per prompt.
struct EvalResult {
    EvalSummary summary;
    std::vector<PromptEval> per_prompt;
};

EvalResult evaluate(const TinyLM& model, const std::vector<TokenSequence>& prompts,
                    const OracleSpec& oracle,
                    const std::vector<std::vector<TokenSequence>>& references,
                    std::uint64_t seed, int max_len, ExecMode mode = ExecMode::serial);

/// Per prompt, samples from both models with the same derived seed; a wins
/// when its oracle reward exceeds b's by more than tie_delta, and vice versa.
struct CompareResult {
    WinRate counts;
    std::vector<double> reward_a;
    std::vector<double> reward_b;
};

CompareResult compare(const TinyLM& model_a, const TinyLM& model_b,
                      const std::vector<TokenSequence>& prompts, const OracleSpec& oracle,
                      std::uint64_t seed, int max_len, double tie_delta = 1e-9,
                      ExecMode mode = ExecMode::serial);

}  // namespace clha
