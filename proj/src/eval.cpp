// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#include "clha/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>

#include "clha/errors.hpp"
#include "clha/rng.hpp"

namespace clha {

namespace {

using NgramCounts = std::map<std::vector<int>, long>;

NgramCounts count_ngrams(const TokenSequence& seq, int n) {
    NgramCounts counts;
    const auto& t = seq.tokens;
    for (std::size_t i = 0; i + n <= t.size(); ++i) {
        ++counts[std::vector<int>(t.begin() + i, t.begin() + i + n)];
    }
    return counts;
}

}  // namespace

double bleu(const TokenSequence& hypothesis, const std::vector<TokenSequence>& references,
            int max_n) {
    if (max_n < 1) throw ConfigError("bleu max_n must be >= 1, got " + std::to_string(max_n));
    if (hypothesis.tokens.empty()) throw DataError("bleu on empty hypothesis");
    if (references.empty()) throw DataError("bleu with no references");
    for (const auto& r : references) {
        if (r.tokens.empty()) throw DataError("bleu with empty reference");
    }

    const long c = static_cast<long>(hypothesis.tokens.size());
    long r_len = static_cast<long>(references[0].tokens.size());
    for (const auto& ref : references) {
        const long rl = static_cast<long>(ref.tokens.size());
        const long best = std::labs(rl - c);
        const long cur = std::labs(r_len - c);
        if (best < cur || (best == cur && rl < r_len)) r_len = rl;
    }

    double log_sum = 0.0;
    int orders = 0;
    for (int n = 1; n <= max_n; ++n) {
        const long total = std::max<long>(0, c - n + 1);
        if (total == 0) continue;
        NgramCounts hyp = count_ngrams(hypothesis, n);
        NgramCounts best_ref;
        for (const auto& ref : references) {
            for (const auto& [gram, cnt] : count_ngrams(ref, n)) {
                long& slot = best_ref[gram];
                slot = std::max(slot, cnt);
            }
        }
        long clipped = 0;
        for (const auto& [gram, cnt] : hyp) {
            auto it = best_ref.find(gram);
            if (it != best_ref.end()) clipped += std::min(cnt, it->second);
        }
        if (clipped == 0) return 0.0;
        log_sum += std::log(static_cast<double>(clipped) / static_cast<double>(total));
        ++orders;
    }
    const double geo = std::exp(log_sum / static_cast<double>(orders));
    const double bp = c >= r_len ? 1.0 : std::exp(1.0 - static_cast<double>(r_len) /
                                                            static_cast<double>(c));
    return bp * geo;
}

EvalResult evaluate(const TinyLM& model, const std::vector<TokenSequence>& prompts,
                    const OracleSpec& oracle,
                    const std::vector<std::vector<TokenSequence>>& references,
                    std::uint64_t seed, int max_len, ExecMode mode) {
    if (prompts.empty()) throw DataError("evaluate with no prompts");
    validate_oracle(oracle);
    if (!references.empty() && references.size() != prompts.size()) {
        throw DataError("got " + std::to_string(references.size()) + " reference sets for " +
                        std::to_string(prompts.size()) + " prompts");
    }
    const int n = static_cast<int>(prompts.size());
    EvalResult res;
    res.per_prompt.resize(n);
    std::vector<std::string> failures(n);
    parallel_for(n, mode, [&](int i) {
        try {
            PromptEval& pe = res.per_prompt[i];
            pe.sample = sample(model, prompts[i], max_len, mix_seed(seed, i));
            pe.reward = oracle_reward(pe.sample, oracle);
            if (!references.empty()) pe.bleu = bleu(pe.sample, references[i]);
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    });
    for (int i = 0; i < n; ++i) {
        if (!failures[i].empty()) {
            throw DataError("prompt " + std::to_string(i) + ": " + failures[i]);
        }
    }
    double reward_sum = 0.0;
    double bleu_sum = 0.0;
    for (const auto& pe : res.per_prompt) {
        reward_sum += pe.reward;
        if (pe.bleu) bleu_sum += *pe.bleu;
    }
    res.summary.mean_reward = reward_sum / n;
    if (!references.empty()) res.summary.bleu = bleu_sum / n;
    return res;
}

CompareResult compare(const TinyLM& model_a, const TinyLM& model_b,
                      const std::vector<TokenSequence>& prompts, const OracleSpec& oracle,
                      std::uint64_t seed, int max_len, double tie_delta, ExecMode mode) {
    if (prompts.empty()) throw DataError("compare with no prompts");
    validate_oracle(oracle);
    if (model_a.vocab_size != model_b.vocab_size) {
        throw ConfigError("model vocabularies differ: " + std::to_string(model_a.vocab_size) +
                          " vs " + std::to_string(model_b.vocab_size));
    }
    const int n = static_cast<int>(prompts.size());
    CompareResult res;
    res.reward_a.resize(n);
    res.reward_b.resize(n);
    std::vector<std::string> failures(n);
    parallel_for(n, mode, [&](int i) {
        try {
            const std::uint64_t s = mix_seed(seed, i);
            res.reward_a[i] = oracle_reward(sample(model_a, prompts[i], max_len, s), oracle);
            res.reward_b[i] = oracle_reward(sample(model_b, prompts[i], max_len, s), oracle);
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    });
    for (int i = 0; i < n; ++i) {
        if (!failures[i].empty()) {
            throw DataError("prompt " + std::to_string(i) + ": " + failures[i]);
        }
    }
    for (int i = 0; i < n; ++i) {
        if (res.reward_a[i] > res.reward_b[i] + tie_delta) {
            ++res.counts.wins;
        } else if (res.reward_b[i] > res.reward_a[i] + tie_delta) {
            ++res.counts.losses;
        } else {
            ++res.counts.ties;
        }
    }
    return res;
}

}  // namespace clha
