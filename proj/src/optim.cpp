// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#include "clha/optim.hpp"

#include <cmath>
#include <stdexcept>

#include "clha/errors.hpp"

namespace clha {

std::string to_string(OptimizerKind kind) {
    return kind == OptimizerKind::sgd ? "sgd" : "adam";
}

OptimizerKind optimizer_from_string(const std::string& name) {
    if (name == "sgd") return OptimizerKind::sgd;
    if (name == "adam") return OptimizerKind::adam;
    throw ConfigError("unknown optimizer '" + name + "' (expected sgd or adam)");
}

Optimizer::Optimizer(const OptimizerConfig& cfg, std::size_t num_params) : cfg_(cfg) {
    if (cfg.learning_rate < 0.0) {
        throw ConfigError("learning_rate must be >= 0, got " + std::to_string(cfg.learning_rate));
    }
    if (cfg_.kind == OptimizerKind::adam) {
        m_.assign(num_params, 0.0);
        v_.assign(num_params, 0.0);
    }
}

void Optimizer::update(std::vector<double>& params, const std::vector<double>& grad) {
    if (params.size() != grad.size()) {
        throw DataError("gradient size " + std::to_string(grad.size()) +
                        " != parameter size " + std::to_string(params.size()));
    }
    if (cfg_.kind == OptimizerKind::sgd) {
        for (std::size_t i = 0; i < params.size(); ++i) {
            params[i] -= cfg_.learning_rate * grad[i];
        }
        return;
    }
    ++step_;
    const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
    const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * grad[i];
        v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * grad[i] * grad[i];
        const double mhat = m_[i] / c1;
        const double vhat = v_[i] / c2;
        params[i] -= cfg_.learning_rate * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
}

double global_norm(const std::vector<double>& grad) {
    double sq = 0.0;
    for (double g : grad) sq += g * g;
    return std::sqrt(sq);
}

double clip_global_norm(std::vector<double>& grad, double max_norm) {
    double norm = global_norm(grad);
    if (max_norm > 0.0 && norm > max_norm) {
        const double scale = max_norm / norm;
        for (double& g : grad) g *= scale;
    }
    return norm;
}

}  // namespace clha
