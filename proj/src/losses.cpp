// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#include "clha/losses.hpp"

#include <algorithm>
#include <cmath>

#include "clha/errors.hpp"

namespace clha {

double xi_adjust(const MarginConfig& cfg, int i, int j) {
    if (cfg.margin < 0.0) {
        throw ConfigError("margin must be >= 0, got " + std::to_string(cfg.margin));
    }
    if (i < 0 || i >= j) {
        throw DataError("xi_adjust needs 0 <= i < j, got (" + std::to_string(i) + ", " +
                        std::to_string(j) + ")");
    }
    return cfg.margin * static_cast<double>(j - i);
}

double alpha_for_length(int l) {
    if (l < 2) throw DataError("ranking length must be >= 2, got " + std::to_string(l));
    const double d = static_cast<double>(l - 1);
    return 0.05 * d * d;
}

ClhaResult clha_loss(const std::vector<double>& p, const BoolMatrix& k_mask,
                     const MarginConfig& cfg) {
    const int n = static_cast<int>(p.size());
    if (n < 2) throw DataError("clha_loss needs at least 2 responses, got " + std::to_string(n));
    if (static_cast<int>(k_mask.size()) != n) {
        throw DataError("k_mask has " + std::to_string(k_mask.size()) + " rows for " +
                        std::to_string(n) + " responses");
    }
    for (const auto& row : k_mask) {
        if (static_cast<int>(row.size()) != n) {
            throw DataError("k_mask row has " + std::to_string(row.size()) + " columns for " +
                            std::to_string(n) + " responses");
        }
    }
    ClhaResult res;
    res.grad_coeffs.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double term = 0.0;
            if (!k_mask[i][j]) {
                const double xi = xi_adjust(cfg, i, j);
                const double arg =
                    cfg.eq4_as_printed ? p[i] - p[j] + xi : p[j] - p[i] + xi;
                if (arg > 0.0) {
                    term = arg;
                    const double si = cfg.eq4_as_printed ? 1.0 : -1.0;
                    res.grad_coeffs[i] += si;
                    res.grad_coeffs[j] -= si;
                }
            }
            res.pair_terms[{i, j}] = term;
            res.value += term;
        }
    }
    return res;
}

double sft_loss(const std::vector<double>& p_chosen_per_token) {
    if (p_chosen_per_token.empty()) throw DataError("sft_loss on empty per-token list");
    double sum = 0.0;
    for (double lp : p_chosen_per_token) sum += lp;
    return -sum / static_cast<double>(p_chosen_per_token.size());
}

ProResult pro_loss(const std::vector<double>& p) {
    const int n = static_cast<int>(p.size());
    if (n < 2) throw DataError("pro_loss needs at least 2 responses, got " + std::to_string(n));
    ProResult res;
    res.grad_coeffs.assign(n, 0.0);
    for (int k = 0; k < n - 1; ++k) {
        const double mx = *std::max_element(p.begin() + k, p.end());
        double sum = 0.0;
        for (int m = k; m < n; ++m) sum += std::exp(p[m] - mx);
        const double lse = mx + std::log(sum);
        res.terms.push_back(lse - p[k]);
        res.value += lse - p[k];
        for (int m = k; m < n; ++m) {
            res.grad_coeffs[m] += std::exp(p[m] - lse) - (m == k ? 1.0 : 0.0);
        }
    }
    return res;
}

namespace {

// Shared likelihood plumbing: p[r] and per-token logs for every response,
// then the chain-rule gradient sum_r scale[r] * d(p[r])/d(theta).
struct Likelihoods {
    std::vector<double> p;
    std::vector<double> top_per_token;
};

Likelihoods response_logprobs(const RescoredRecord& rescored, const TinyLM& model) {
    Likelihoods lk;
    const auto& rec = rescored.record;
    lk.p.reserve(rec.responses.size());
    for (std::size_t r = 0; r < rec.responses.size(); ++r) {
        LogprobResult lr = sequence_logprob(model, rec.query, rec.responses[r]);
        if (r == 0) lk.top_per_token = std::move(lr.per_token);
        lk.p.push_back(lr.p);
    }
    return lk;
}

std::vector<double> assemble_gradient(const RescoredRecord& rescored, const TinyLM& model,
                                      const std::vector<double>& scales) {
    std::vector<double> grad(model.num_params(), 0.0);
    for (std::size_t r = 0; r < scales.size(); ++r) {
        if (scales[r] == 0.0) continue;
        accumulate_logprob_grad(model, rescored.record.query, rescored.record.responses[r],
                                scales[r], grad);
    }
    return grad;
}

void check_rescored(const RescoredRecord& rescored, const TinyLM& model) {
    validate_record(rescored.record, model.vocab_size);
    if (rescored.rewards.size() != rescored.record.responses.size()) {
        throw DataError("rescored record has " + std::to_string(rescored.rewards.size()) +
                        " rewards for " + std::to_string(rescored.record.responses.size()) +
                        " responses");
    }
}

}  // namespace

TotalLossResult total_loss(const RescoredRecord& rescored, const TinyLM& model,
                           const MarginConfig& cfg) {
    check_rescored(rescored, model);
    const int n = rescored.record.ranking_length();
    Likelihoods lk = response_logprobs(rescored, model);
    ClhaResult cl = clha_loss(lk.p, rescored.k_mask, cfg);

    TotalLossResult out;
    out.report.clha = cl.value;
    out.report.pair_terms = std::move(cl.pair_terms);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (rescored.k_mask[i][j]) out.report.k_gated_pairs.insert({i, j});
        }
    }
    out.report.lambda_flag = rescored.rewards[0] < 0.0 ? 1 : 0;
    out.report.alpha = alpha_for_length(n);
    out.report.sft = sft_loss(lk.top_per_token);
    out.report.total =
        out.report.clha +
        out.report.alpha * (1.0 - out.report.lambda_flag) * out.report.sft;

    // sft = -p[0] under the shared token-mean convention, so its gradient is
    // -d(p[0])/d(theta) and folds into the response-0 scale.
    std::vector<double> scales = cl.grad_coeffs;
    if (out.report.lambda_flag == 0) scales[0] -= out.report.alpha;
    out.gradient = assemble_gradient(rescored, model, scales);
    return out;
}

std::string to_string(Objective objective) {
    switch (objective) {
        case Objective::clha: return "clha";
        case Objective::clha_no_rescore: return "clha_no_rescore";
        case Objective::clha_no_contrastive: return "clha_no_contrastive";
        case Objective::clha_no_xi: return "clha_no_xi";
        case Objective::pro: return "pro";
        case Objective::sft: return "sft";
    }
    throw ConfigError("unknown objective enum value");
}

Objective objective_from_string(const std::string& name) {
    if (name == "clha") return Objective::clha;
    if (name == "clha_no_rescore") return Objective::clha_no_rescore;
    if (name == "clha_no_contrastive") return Objective::clha_no_contrastive;
    if (name == "clha_no_xi") return Objective::clha_no_xi;
    if (name == "pro") return Objective::pro;
    if (name == "sft") return Objective::sft;
    throw ConfigError("unknown objective '" + name +
                      "' (expected clha, clha_no_rescore, clha_no_contrastive, "
                      "clha_no_xi, pro, or sft)");
}

TotalLossResult objective_loss(Objective objective, const RescoredRecord& rescored,
                               const TinyLM& model, const MarginConfig& cfg) {
    switch (objective) {
        case Objective::clha:
        case Objective::clha_no_rescore:
        case Objective::clha_no_contrastive:
            return total_loss(rescored, model, cfg);
        case Objective::clha_no_xi: {
            MarginConfig zeroed = cfg;
            zeroed.margin = 0.0;
            return total_loss(rescored, model, zeroed);
        }
        case Objective::pro: {
            check_rescored(rescored, model);
            const int n = rescored.record.ranking_length();
            Likelihoods lk = response_logprobs(rescored, model);
            ProResult pr = pro_loss(lk.p);
            TotalLossResult out;
            out.report.clha = pr.value;
            for (int k = 0; k < n - 1; ++k) {
                out.report.pair_terms[{k, n - 1}] = pr.terms[k];
            }
            out.report.lambda_flag = rescored.rewards[0] < 0.0 ? 1 : 0;
            out.report.alpha = alpha_for_length(n);
            out.report.sft = sft_loss(lk.top_per_token);
            out.report.total =
                pr.value + out.report.alpha * (1.0 - out.report.lambda_flag) * out.report.sft;
            std::vector<double> scales = pr.grad_coeffs;
            if (out.report.lambda_flag == 0) scales[0] -= out.report.alpha;
            out.gradient = assemble_gradient(rescored, model, scales);
            return out;
        }
        case Objective::sft: {
            check_rescored(rescored, model);
            Likelihoods lk = response_logprobs(rescored, model);
            TotalLossResult out;
            out.report.sft = sft_loss(lk.top_per_token);
            out.report.alpha = 1.0;
            out.report.lambda_flag = 0;
            out.report.total = out.report.sft;
            std::vector<double> scales(rescored.record.responses.size(), 0.0);
            scales[0] = -1.0;
            out.gradient = assemble_gradient(rescored, model, scales);
            return out;
        }
    }
    throw ConfigError("unknown objective enum value");
}

}  // namespace clha
