// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clha/types.hpp"

namespace clha {

/// Tabular order-C autoregressive model. The context alphabet has V+1
/// symbols: 0 is the reserved begin-of-sequence pad, data token t maps to
/// symbol t+1. A context is the last C symbols folded into a base-(V+1)
/// index with the newest symbol in the lowest digit. Parameters are one
/// logit per (context, next token) plus a shared bias of length V.
/// Token V-1 is the end-of-sequence token used by sampling.
struct TinyLM {
    int vocab_size = 0;      // V >= 2
    int context_window = 0;  // C >= 1
    std::vector<double> params;

    int alphabet() const { return vocab_size + 1; }
    int eos_id() const { return vocab_size - 1; }
    std::int64_t context_states() const;
    std::int64_t table_size() const { return context_states() * vocab_size; }
    std::int64_t num_params() const { return table_size() + vocab_size; }

    std::int64_t initial_context() const { return 0; }
    std::int64_t push_context(std::int64_t ctx, int token) const;

    /// Writes the V logits for `ctx` (table row plus shared bias) into `out`.
    void logits(std::int64_t ctx, std::vector<double>& out) const;
};

/// Zero-initialized model (uniform next-token distribution everywhere).
TinyLM make_model(int vocab_size, int context_window);

struct LogprobResult {
    double p = 0.0;                 // mean per-token log-probability
    std::vector<double> per_token;  // log P(response[t] | query + response[<t])
};

LogprobResult sequence_logprob(const TinyLM& model, const TokenSequence& query,
                               const TokenSequence& response);

/// grad += scale * d(sequence_logprob.p)/d(params). The softmax identity
/// gives (one_hot(y_t) - softmax(logits)) / |y| per visited context row,
/// with the same term accumulated into the shared bias.
void accumulate_logprob_grad(const TinyLM& model, const TokenSequence& query,
                             const TokenSequence& response, double scale,
                             std::vector<double>& grad);

std::vector<double> logprob_grad(const TinyLM& model, const TokenSequence& query,
                                 const TokenSequence& response);

/// Ancestral sampling; stops after max_len tokens or when the end-of-sequence
/// token (V-1) is drawn. The EOS token is included in the returned sequence.
TokenSequence sample(const TinyLM& model, const TokenSequence& query, int max_len,
                     std::uint64_t seed);

void save_model(const TinyLM& model, const std::string& path);
TinyLM load_model(const std::string& path);

}  // namespace clha
