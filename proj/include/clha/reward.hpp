// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "clha/optim.hpp"
#include "clha/types.hpp"

namespace clha {

using BoolMatrix = std::vector<std::vector<bool>>;

/// Linear scorer over a fixed count feature map: V response-token counts
/// followed by V*V query-response co-occurrence products
/// (count of token a in query * count of token b in response).
/// Linearity keeps the Bradley-Terry gradient closed-form.
struct RewardScorer {
    int vocab_size = 0;
    std::vector<double> weights;  // size V + V*V

    static RewardScorer make(int vocab_size);
    std::size_t feature_dim() const;
    double score(const TokenSequence& query, const TokenSequence& response) const;
};

std::vector<double> featurize(const TokenSequence& query, const TokenSequence& response,
                              int vocab_size);

/// Bradley-Terry pair loss -log sigmoid(r_c - r_r) and its exact gradient
/// with respect to the scorer weights.
struct PairLossResult {
    double loss = 0.0;
    std::vector<double> gradient;
};

PairLossResult rm_pair_loss(const RewardScorer& scorer, const TokenSequence& query,
                            const TokenSequence& chosen, const TokenSequence& rejected);

/// Trains on all (index 0, index j>=1) pairs of every record for cfg.epochs
/// passes; deterministic given cfg.seed and record order.
RewardScorer train_reward(RewardScorer scorer, const std::vector<PreferenceRecord>& records,
                          const OptimizerConfig& cfg);

struct RescoredRecord {
    PreferenceRecord record;
    std::vector<double> rewards;  // one per response, rank order
    NoiseLabel noise;             // for the top-ranked response
    BoolMatrix k_mask;            // k_mask[i][j] == (|rewards[i]-rewards[j]| < epsilon)
};

/// Any (query, response) -> reward scalar; lets an oracle stand in for a
/// learned scorer.
using ScoreFn = std::function<double(const TokenSequence&, const TokenSequence&)>;

RescoredRecord rescore(const ScoreFn& fn, const PreferenceRecord& record, double epsilon);
RescoredRecord rescore(const RewardScorer& scorer, const PreferenceRecord& record,
                       double epsilon);

void save_scorer(const RewardScorer& scorer, const std::string& path);
RewardScorer load_scorer(const std::string& path);

}  // namespace clha
