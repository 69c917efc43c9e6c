// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "clha/lm.hpp"
#include "clha/reward.hpp"

namespace clha {

using PairKey = std::pair<int, int>;

struct LossReport {
    double clha = 0.0;  // contrastive part (or the listwise part for pro)
    double sft = 0.0;
    double total = 0.0;
    std::map<PairKey, double> pair_terms;  // every i<j pair, gated ones are 0
    std::set<PairKey> k_gated_pairs;
    int lambda_flag = 0;  // 1 iff the top-ranked reward is negative
    double alpha = 0.0;
};

struct MarginConfig {
    double margin = 0.1;
    double epsilon = 0.05;        // forwarded to rescoring
    bool eq4_as_printed = false;  // audit switch for the hinge orientation
};

/// Rank-scaled margin: margin * (j - i). Requires 0 <= i < j.
double xi_adjust(const MarginConfig& cfg, int i, int j);

/// alpha = 0.05 * (l - 1)^2 for ranking length l >= 2.
double alpha_for_length(int l);

struct ClhaResult {
    double value = 0.0;
    std::map<PairKey, double> pair_terms;
    std::vector<double> grad_coeffs;  // d(value)/d(p[r])
};

/// Pairwise hinge over all i<j with k_mask[i][j] false:
/// term = max{0, p[j] - p[i] + xi_adjust(i, j)}, i.e. the higher-ranked
/// response must lead by at least the scaled margin. With eq4_as_printed the
/// hinge argument is p[i] - p[j] + xi instead.
ClhaResult clha_loss(const std::vector<double>& p, const BoolMatrix& k_mask,
                     const MarginConfig& cfg);

/// Token-mean NLL of the top-ranked response; >= 0.
double sft_loss(const std::vector<double>& p_chosen_per_token);

struct ProResult {
    double value = 0.0;
    std::vector<double> terms;  // one listwise term per k = 1..n-1
    std::vector<double> grad_coeffs;
};

/// Listwise ranking loss: -sum_{k=1}^{n-1} log softmax(p[k..n])[k],
/// 1-based k, evaluated with max-subtracted log-sum-exp.
ProResult pro_loss(const std::vector<double>& p);

struct TotalLossResult {
    LossReport report;
    std::vector<double> gradient;  // with respect to model parameters
};

/// CLHA objective on one rescored record:
/// total = L_clha + alpha * (1 - lambda) * L_sft, lambda = (rewards[0] < 0).
TotalLossResult total_loss(const RescoredRecord& rescored, const TinyLM& model,
                           const MarginConfig& cfg);

enum class Objective { clha, clha_no_rescore, clha_no_contrastive, clha_no_xi, pro, sft };

std::string to_string(Objective objective);
Objective objective_from_string(const std::string& name);

/// Dispatches one record through the configured objective. The rescoring
/// ablations are realized upstream as input transforms (see trainer); here
/// clha_no_xi zeroes the margin, pro swaps the contrastive part for the
/// listwise loss (keeping the adaptive SFT term), and sft reports plain NLL
/// with alpha = 1 and lambda = 0 so the LossReport identity still holds.
TotalLossResult objective_loss(Objective objective, const RescoredRecord& rescored,
                               const TinyLM& model, const MarginConfig& cfg);

}  // namespace clha
