// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#include "clha/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "clha/errors.hpp"
#include "clha/rng.hpp"

namespace clha {

namespace {

void validate_config(const TrainConfig& cfg) {
    if (cfg.epochs < 0) {
        throw ConfigError("epochs must be >= 0, got " + std::to_string(cfg.epochs));
    }
    if (cfg.learning_rate <= 0.0) {
        throw ConfigError("learning_rate must be > 0, got " +
                          std::to_string(cfg.learning_rate));
    }
    if (cfg.batch_size < 1) {
        throw ConfigError("batch_size must be >= 1, got " + std::to_string(cfg.batch_size));
    }
    if (cfg.margin_cfg.margin < 0.0) {
        throw ConfigError("margin must be >= 0, got " + std::to_string(cfg.margin_cfg.margin));
    }
    if (cfg.margin_cfg.epsilon < 0.0) {
        throw ConfigError("epsilon must be >= 0, got " + std::to_string(cfg.margin_cfg.epsilon));
    }
}

OptimizerConfig optimizer_config(const TrainConfig& cfg) {
    OptimizerConfig oc;
    oc.kind = cfg.optimizer;
    oc.learning_rate = cfg.learning_rate;
    oc.epochs = cfg.epochs;
    oc.batch_size = cfg.batch_size;
    oc.seed = cfg.seed;
    return oc;
}

// Neutral rescoring for objectives that bypass the scorer: all rewards 0,
// lambda 0, no gated pairs (the epsilon = 0 strict-< rule on equal rewards).
RescoredRecord neutral_rescored(const PreferenceRecord& record) {
    RescoredRecord out;
    out.record = record;
    out.rewards.assign(record.responses.size(), 0.0);
    out.noise = NoiseLabel::from_reward(0.0);
    const int n = record.ranking_length();
    out.k_mask.assign(n, std::vector<bool>(n, false));
    return out;
}

}  // namespace

std::vector<RescoredRecord> rescore_for_objective(Objective objective, const ScoreFn& score_fn,
                                                  const std::vector<PreferenceRecord>& records,
                                                  double epsilon) {
    std::vector<RescoredRecord> out;
    out.reserve(records.size());
    if (objective == Objective::clha_no_rescore || objective == Objective::sft) {
        for (const auto& rec : records) out.push_back(neutral_rescored(rec));
        return out;
    }
    if (!score_fn) {
        throw ConfigError("objective " + to_string(objective) +
                          " needs a reward scorer or oracle");
    }
    const double eps = objective == Objective::clha_no_contrastive
                           ? std::numeric_limits<double>::infinity()
                           : epsilon;
    for (const auto& rec : records) out.push_back(rescore(score_fn, rec, eps));
    return out;
}

StepReport train_step(TinyLM& model, const std::vector<RescoredRecord>& batch,
                      const TrainConfig& cfg, Optimizer& opt) {
    if (batch.empty()) throw DataError("train_step on empty batch");
    const int n = static_cast<int>(batch.size());
    std::vector<TotalLossResult> slots(n);
    std::vector<std::string> failures(n);
    parallel_for(n, cfg.exec, [&](int i) {
        try {
            slots[i] = objective_loss(cfg.objective, batch[i], model, cfg.margin_cfg);
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    });
    for (int i = 0; i < n; ++i) {
        if (!failures[i].empty()) {
            throw DataError("record " + std::to_string(i) + " in batch: " + failures[i]);
        }
    }

    StepReport rep;
    std::vector<double> grad(model.num_params(), 0.0);
    for (int i = 0; i < n; ++i) {
        const LossReport& r = slots[i].report;
        if (!std::isfinite(slots[i].report.total)) {
            throw DataError("non-finite loss at batch record " + std::to_string(i));
        }
        rep.clha += r.clha;
        rep.sft += r.sft;
        rep.total += r.total;
        rep.lambda_mean += r.lambda_flag;
        rep.gated_pairs += static_cast<long>(r.k_gated_pairs.size());
        for (std::size_t w = 0; w < grad.size(); ++w) grad[w] += slots[i].gradient[w];
    }
    const double inv = 1.0 / static_cast<double>(n);
    rep.clha *= inv;
    rep.sft *= inv;
    rep.total *= inv;
    rep.lambda_mean *= inv;
    for (double& g : grad) g *= inv;
    rep.grad_norm = clip_global_norm(grad, cfg.clip_norm);
    opt.update(model.params, grad);
    return rep;
}

TrainResult train(TinyLM model, const ScoreFn& score_fn,
                  const std::vector<PreferenceRecord>& records, const TrainConfig& cfg,
                  const std::function<void(int, const TinyLM&)>& on_epoch_end) {
    validate_config(cfg);
    if (records.empty()) throw DataError("train on empty record list");
    for (std::size_t i = 0; i < records.size(); ++i) {
        validate_record(records[i], model.vocab_size, "record " + std::to_string(i));
    }

    TrainResult result;
    Optimizer opt(optimizer_config(cfg), model.params.size());
    int step = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::vector<RescoredRecord> rescored =
            rescore_for_objective(cfg.objective, score_fn, records, cfg.margin_cfg.epsilon);
        std::vector<int> order(rescored.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        Rng rng(cfg.seed + static_cast<std::uint64_t>(epoch));
        shuffle_in_place(order, rng);

        for (std::size_t begin = 0; begin < order.size();
             begin += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t end =
                std::min(order.size(), begin + static_cast<std::size_t>(cfg.batch_size));
            std::vector<RescoredRecord> batch;
            batch.reserve(end - begin);
            for (std::size_t i = begin; i < end; ++i) batch.push_back(rescored[order[i]]);
            StepReport rep;
            try {
                rep = train_step(model, batch, cfg, opt);
            } catch (const DataError& e) {
                throw DataError("step " + std::to_string(step) + ": " + e.what());
            }
            rep.step = step++;
            rep.epoch = epoch;
            result.history.push_back(rep);
        }
        if (on_epoch_end) on_epoch_end(epoch, model);
    }
    result.model = std::move(model);
    return result;
}

}  // namespace clha
