// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "clha/losses.hpp"
#include "clha/optim.hpp"
#include "clha/parallel.hpp"

namespace clha {

struct TrainConfig {
    Objective objective = Objective::clha;
    int epochs = 2;
    double learning_rate = 1e-2;
    int batch_size = 16;
    std::uint64_t seed = 0;
    MarginConfig margin_cfg;
    OptimizerKind optimizer = OptimizerKind::adam;
    double clip_norm = 10.0;  // global-norm cap; <= 0 disables
    ExecMode exec = ExecMode::openmp;
};

/// Aggregated per-step record: scalar fields are means over the batch,
/// gated_pairs is the batch total, grad_norm is the pre-clip global norm.
struct StepReport {
    int step = 0;
    int epoch = 0;
    double clha = 0.0;
    double sft = 0.0;
    double total = 0.0;
    double lambda_mean = 0.0;
    long gated_pairs = 0;
    double grad_norm = 0.0;
};

struct TrainResult {
    TinyLM model;
    std::vector<StepReport> history;
};

/// One optimizer update from the mean batch gradient. Per-record losses are
/// evaluated independently (concurrently under ExecMode::openmp) and reduced
/// in batch order, so serial and parallel runs are bit-identical.
StepReport train_step(TinyLM& model, const std::vector<RescoredRecord>& batch,
                      const TrainConfig& cfg, Optimizer& opt);

/// Full training loop. Per epoch: records are rescored through `score_fn`
/// (the ablations clha_no_rescore and sft skip scoring and use neutral
/// rewards; clha_no_contrastive rescoring gates every pair), shuffled with
/// seed + epoch, and consumed in batches. `on_epoch_end`, when set, runs
/// after each epoch with the current model.
TrainResult train(TinyLM model, const ScoreFn& score_fn,
                  const std::vector<PreferenceRecord>& records, const TrainConfig& cfg,
                  const std::function<void(int, const TinyLM&)>& on_epoch_end = {});

/// The per-epoch rescoring pass train() uses; exposed for audits and tests.
std::vector<RescoredRecord> rescore_for_objective(Objective objective, const ScoreFn& score_fn,
                                                  const std::vector<PreferenceRecord>& records,
                                                  double epsilon);

}  // namespace clha
