// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace clha {

enum class OptimizerKind { sgd, adam };

std::string to_string(OptimizerKind kind);
OptimizerKind optimizer_from_string(const std::string& name);

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::adam;
    double learning_rate = 1e-2;
    int epochs = 2;
    int batch_size = 16;
    std::uint64_t seed = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// First-order optimizer with bias-corrected Adam moments. SGD ignores the
/// moment buffers. update() applies one step in place.
class Optimizer {
  public:
    Optimizer(const OptimizerConfig& cfg, std::size_t num_params);

    void update(std::vector<double>& params, const std::vector<double>& grad);

  private:
    OptimizerConfig cfg_;
    long step_ = 0;
    std::vector<double> m_, v_;
};

/// Euclidean norm of a gradient vector.
double global_norm(const std::vector<double>& grad);

/// Scales grad in place so its global norm is at most max_norm (no-op when
/// max_norm <= 0 or the norm is already within bounds). Returns the pre-clip
/// norm.
double clip_global_norm(std::vector<double>& grad, double max_norm);

}  // namespace clha
