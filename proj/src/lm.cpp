// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#include "clha/lm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "clha/errors.hpp"
#include "clha/rng.hpp"
#include "json.hpp"

namespace clha {

namespace {
constexpr std::int64_t kMaxTableSize = 100'000'000;

std::int64_t pow_i64(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

void log_softmax_row(const std::vector<double>& logits, std::vector<double>& out) {
    double mx = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double l : logits) sum += std::exp(l - mx);
    double lse = mx + std::log(sum);
    out.resize(logits.size());
    for (std::size_t v = 0; v < logits.size(); ++v) out[v] = logits[v] - lse;
}

std::int64_t context_after(const TinyLM& model, const TokenSequence& query) {
    std::int64_t ctx = model.initial_context();
    for (int t : query.tokens) ctx = model.push_context(ctx, t);
    return ctx;
}
}  // namespace

std::int64_t TinyLM::context_states() const {
    return pow_i64(alphabet(), context_window);
}

std::int64_t TinyLM::push_context(std::int64_t ctx, int token) const {
    std::int64_t keep = pow_i64(alphabet(), context_window - 1);
    return (ctx % keep) * alphabet() + (token + 1);
}

void TinyLM::logits(std::int64_t ctx, std::vector<double>& out) const {
    out.resize(vocab_size);
    const double* row = params.data() + ctx * vocab_size;
    const double* bias = params.data() + table_size();
    for (int v = 0; v < vocab_size; ++v) out[v] = row[v] + bias[v];
}

TinyLM make_model(int vocab_size, int context_window) {
    if (vocab_size < 2) {
        throw ConfigError("vocab_size must be >= 2, got " + std::to_string(vocab_size));
    }
    if (context_window < 1) {
        throw ConfigError("context_window must be >= 1, got " + std::to_string(context_window));
    }
    TinyLM model;
    model.vocab_size = vocab_size;
    model.context_window = context_window;
    if (model.table_size() > kMaxTableSize) {
        throw ConfigError("context table too large: vocab " + std::to_string(vocab_size) +
                          ", window " + std::to_string(context_window));
    }
    model.params.assign(model.num_params(), 0.0);
    return model;
}

LogprobResult sequence_logprob(const TinyLM& model, const TokenSequence& query,
                               const TokenSequence& response) {
    validate_sequence(query, model.vocab_size);
    validate_sequence(response, model.vocab_size);
    std::int64_t ctx = context_after(model, query);
    LogprobResult res;
    res.per_token.reserve(response.tokens.size());
    std::vector<double> row, ls;
    for (int tok : response.tokens) {
        model.logits(ctx, row);
        log_softmax_row(row, ls);
        res.per_token.push_back(ls[tok]);
        ctx = model.push_context(ctx, tok);
    }
    double sum = 0.0;
    for (double lp : res.per_token) sum += lp;
    res.p = sum / static_cast<double>(res.per_token.size());
    return res;
}

void accumulate_logprob_grad(const TinyLM& model, const TokenSequence& query,
                             const TokenSequence& response, double scale,
                             std::vector<double>& grad) {
    validate_sequence(query, model.vocab_size);
    validate_sequence(response, model.vocab_size);
    grad.resize(model.num_params(), 0.0);
    const double inv_len = 1.0 / static_cast<double>(response.tokens.size());
    const std::int64_t bias_base = model.table_size();
    std::int64_t ctx = context_after(model, query);
    std::vector<double> row, ls;
    for (int tok : response.tokens) {
        model.logits(ctx, row);
        log_softmax_row(row, ls);
        const std::int64_t base = ctx * model.vocab_size;
        for (int v = 0; v < model.vocab_size; ++v) {
            double g = scale * (((v == tok) ? 1.0 : 0.0) - std::exp(ls[v])) * inv_len;
            grad[base + v] += g;
            grad[bias_base + v] += g;
        }
        ctx = model.push_context(ctx, tok);
    }
}

std::vector<double> logprob_grad(const TinyLM& model, const TokenSequence& query,
                                 const TokenSequence& response) {
    std::vector<double> grad(model.num_params(), 0.0);
    accumulate_logprob_grad(model, query, response, 1.0, grad);
    return grad;
}

TokenSequence sample(const TinyLM& model, const TokenSequence& query, int max_len,
                     std::uint64_t seed) {
    if (max_len < 1) throw ConfigError("max_len must be >= 1, got " + std::to_string(max_len));
    validate_sequence(query, model.vocab_size);
    Rng rng(seed);
    std::int64_t ctx = context_after(model, query);
    TokenSequence out;
    std::vector<double> row, ls;
    for (int t = 0; t < max_len; ++t) {
        model.logits(ctx, row);
        log_softmax_row(row, ls);
        double u = uniform_unit(rng);
        double cdf = 0.0;
        int tok = model.vocab_size - 1;
        for (int v = 0; v < model.vocab_size; ++v) {
            cdf += std::exp(ls[v]);
            if (u < cdf) {
                tok = v;
                break;
            }
        }
        out.tokens.push_back(tok);
        if (tok == model.eos_id()) break;
        ctx = model.push_context(ctx, tok);
    }
    return out;
}

void save_model(const TinyLM& model, const std::string& path) {
    nlohmann::json j;
    j["vocab_size"] = model.vocab_size;
    j["context_window"] = model.context_window;
    j["params"] = model.params;
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write checkpoint " + path);
    out << j.dump() << "\n";
}

TinyLM load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open checkpoint " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed checkpoint " + path + ": " + e.what());
    }
    TinyLM model;
    try {
        model.vocab_size = j.at("vocab_size").get<int>();
        model.context_window = j.at("context_window").get<int>();
        model.params = j.at("params").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError("bad checkpoint schema in " + path + ": " + e.what());
    }
    if (model.vocab_size < 2 || model.context_window < 1) {
        throw DataError("invalid checkpoint header in " + path);
    }
    if (static_cast<std::int64_t>(model.params.size()) != model.num_params()) {
        throw DataError("checkpoint " + path + " has " + std::to_string(model.params.size()) +
                        " parameters, expected " + std::to_string(model.num_params()));
    }
    return model;
}

}  // namespace clha
