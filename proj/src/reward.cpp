// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#include "clha/reward.hpp"

#include <cmath>
#include <fstream>

#include "clha/errors.hpp"
#include "clha/rng.hpp"
#include "json.hpp"

namespace clha {

namespace {

std::vector<int> token_counts(const TokenSequence& seq, int vocab_size) {
    std::vector<int> counts(vocab_size, 0);
    for (int t : seq.tokens) ++counts[t];
    return counts;
}

// softplus(x) = log(1 + e^x), evaluated without overflow.
double softplus(double x) {
    return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

// sigmoid(x), evaluated without overflow.
double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace

RewardScorer RewardScorer::make(int vocab_size) {
    if (vocab_size < 1) {
        throw ConfigError("vocab_size must be >= 1, got " + std::to_string(vocab_size));
    }
    RewardScorer scorer;
    scorer.vocab_size = vocab_size;
    scorer.weights.assign(static_cast<std::size_t>(vocab_size) * (vocab_size + 1), 0.0);
    return scorer;
}

std::size_t RewardScorer::feature_dim() const {
    return static_cast<std::size_t>(vocab_size) * (vocab_size + 1);
}

double RewardScorer::score(const TokenSequence& query, const TokenSequence& response) const {
    validate_sequence(query, vocab_size);
    validate_sequence(response, vocab_size);
    const std::vector<int> qc = token_counts(query, vocab_size);
    const std::vector<int> rc = token_counts(response, vocab_size);
    double s = 0.0;
    for (int b = 0; b < vocab_size; ++b) {
        if (rc[b]) s += weights[b] * rc[b];
    }
    for (int a = 0; a < vocab_size; ++a) {
        if (!qc[a]) continue;
        const std::size_t row = vocab_size + static_cast<std::size_t>(a) * vocab_size;
        for (int b = 0; b < vocab_size; ++b) {
            if (rc[b]) s += weights[row + b] * qc[a] * rc[b];
        }
    }
    return s;
}

std::vector<double> featurize(const TokenSequence& query, const TokenSequence& response,
                              int vocab_size) {
    validate_sequence(query, vocab_size);
    validate_sequence(response, vocab_size);
    const std::vector<int> qc = token_counts(query, vocab_size);
    const std::vector<int> rc = token_counts(response, vocab_size);
    std::vector<double> phi(static_cast<std::size_t>(vocab_size) * (vocab_size + 1), 0.0);
    for (int b = 0; b < vocab_size; ++b) phi[b] = rc[b];
    for (int a = 0; a < vocab_size; ++a) {
        if (!qc[a]) continue;
        for (int b = 0; b < vocab_size; ++b) {
            if (rc[b]) {
                phi[vocab_size + static_cast<std::size_t>(a) * vocab_size + b] =
                    static_cast<double>(qc[a]) * rc[b];
            }
        }
    }
    return phi;
}

PairLossResult rm_pair_loss(const RewardScorer& scorer, const TokenSequence& query,
                            const TokenSequence& chosen, const TokenSequence& rejected) {
    const std::vector<double> phi_c = featurize(query, chosen, scorer.vocab_size);
    const std::vector<double> phi_r = featurize(query, rejected, scorer.vocab_size);
    double d = 0.0;
    for (std::size_t i = 0; i < phi_c.size(); ++i) {
        d += scorer.weights[i] * (phi_c[i] - phi_r[i]);
    }
    PairLossResult res;
    res.loss = softplus(-d);
    const double coeff = -sigmoid(-d);
    res.gradient.resize(phi_c.size());
    for (std::size_t i = 0; i < phi_c.size(); ++i) {
        res.gradient[i] = coeff * (phi_c[i] - phi_r[i]);
    }
    return res;
}

RewardScorer train_reward(RewardScorer scorer, const std::vector<PreferenceRecord>& records,
                          const OptimizerConfig& cfg) {
    for (std::size_t i = 0; i < records.size(); ++i) {
        validate_record(records[i], scorer.vocab_size, "record " + std::to_string(i));
    }
    if (cfg.batch_size < 1) {
        throw ConfigError("batch_size must be >= 1, got " + std::to_string(cfg.batch_size));
    }
    if (cfg.epochs < 0) {
        throw ConfigError("epochs must be >= 0, got " + std::to_string(cfg.epochs));
    }
    Optimizer opt(cfg, scorer.weights.size());
    std::vector<int> order(records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::vector<double> grad(scorer.weights.size());
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        Rng rng(cfg.seed + static_cast<std::uint64_t>(epoch));
        shuffle_in_place(order, rng);
        for (std::size_t begin = 0; begin < order.size();
             begin += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t end =
                std::min(order.size(), begin + static_cast<std::size_t>(cfg.batch_size));
            std::fill(grad.begin(), grad.end(), 0.0);
            long pairs = 0;
            for (std::size_t i = begin; i < end; ++i) {
                const PreferenceRecord& rec = records[order[i]];
                for (int j = 1; j < rec.ranking_length(); ++j) {
                    PairLossResult pr =
                        rm_pair_loss(scorer, rec.query, rec.responses[0], rec.responses[j]);
                    if (!std::isfinite(pr.loss)) {
                        throw DataError("non-finite reward loss at record " +
                                        std::to_string(order[i]));
                    }
                    for (std::size_t w = 0; w < grad.size(); ++w) grad[w] += pr.gradient[w];
                    ++pairs;
                }
            }
            for (double& g : grad) g /= static_cast<double>(pairs);
            opt.update(scorer.weights, grad);
        }
    }
    return scorer;
}

RescoredRecord rescore(const ScoreFn& fn, const PreferenceRecord& record, double epsilon) {
    if (epsilon < 0.0) {
        throw ConfigError("epsilon must be >= 0, got " + std::to_string(epsilon));
    }
    RescoredRecord out;
    out.record = record;
    out.rewards.reserve(record.responses.size());
    for (const auto& r : record.responses) out.rewards.push_back(fn(record.query, r));
    out.noise = NoiseLabel::from_reward(out.rewards[0]);
    const int n = record.ranking_length();
    out.k_mask.assign(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            out.k_mask[i][j] = std::abs(out.rewards[i] - out.rewards[j]) < epsilon;
        }
    }
    return out;
}

RescoredRecord rescore(const RewardScorer& scorer, const PreferenceRecord& record,
                       double epsilon) {
    return rescore(
        [&scorer](const TokenSequence& q, const TokenSequence& r) { return scorer.score(q, r); },
        record, epsilon);
}

void save_scorer(const RewardScorer& scorer, const std::string& path) {
    nlohmann::json j;
    j["vocab_size"] = scorer.vocab_size;
    j["weights"] = scorer.weights;
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write scorer file " + path);
    out << j.dump() << "\n";
}

RewardScorer load_scorer(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scorer file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed scorer file " + path + ": " + e.what());
    }
    RewardScorer scorer;
    try {
        scorer.vocab_size = j.at("vocab_size").get<int>();
        scorer.weights = j.at("weights").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError("bad scorer schema in " + path + ": " + e.what());
    }
    if (scorer.vocab_size < 1 || scorer.weights.size() != scorer.feature_dim()) {
        throw DataError("scorer file " + path + " has " + std::to_string(scorer.weights.size()) +
                        " weights, expected " + std::to_string(scorer.feature_dim()) +
                        " for vocab " + std::to_string(scorer.vocab_size));
    }
    return scorer;
}

}  // namespace clha
