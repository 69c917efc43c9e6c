// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#include "clha/prefdata.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "clha/errors.hpp"
#include "clha/rng.hpp"
#include "json.hpp"

namespace clha {

std::vector<PreferenceRecord> load_jsonl(const std::string& path, const Tokenizer& tokenizer) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open dataset file " + path);
    std::vector<PreferenceRecord> records;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string where = "line " + std::to_string(line_no) + " of " + path;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw DataError("malformed JSON at " + where + ": " + e.what());
        }
        PreferenceRecord rec;
        try {
            rec.query = tokenizer.encode(j.at("prompt").get<std::string>());
            for (const auto& r : j.at("responses")) {
                rec.responses.push_back(tokenizer.encode(r.get<std::string>()));
            }
            if (j.contains("rewards")) {
                rec.rewards = j.at("rewards").get<std::vector<double>>();
            }
            rec.source_tag = j.value("source_tag", "");
        } catch (const nlohmann::json::exception& e) {
            throw DataError("bad record schema at " + where + ": " + e.what());
        }
        validate_record(rec, tokenizer.vocab_size(), where);
        records.push_back(std::move(rec));
    }
    return records;
}

void write_jsonl(const std::vector<PreferenceRecord>& records, const std::string& path,
                 const Tokenizer& tokenizer) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write dataset file " + path);
    for (const auto& rec : records) {
        nlohmann::json j;
        j["prompt"] = tokenizer.decode(rec.query);
        auto responses = nlohmann::json::array();
        for (const auto& r : rec.responses) responses.push_back(tokenizer.decode(r));
        j["responses"] = std::move(responses);
        if (rec.rewards) j["rewards"] = *rec.rewards;
        if (!rec.source_tag.empty()) j["source_tag"] = rec.source_tag;
        out << j.dump() << "\n";
    }
}

namespace {

// Net count d = (#target - #penalty) over a response of length L gives
// oracle_reward d/L. Per-rank bands keep rank 0 strictly positive and all
// lower ranks strictly negative, so a sign flip of the top reward identifies
// a swapped record exactly.
struct Band {
    double lo, hi;
};
constexpr Band kBands[3] = {{0.30, 0.90}, {-0.90, -0.20}, {-1.00, -0.65}};

int draw_net_count(Rng& rng, const Band& band, int len) {
    int lo = static_cast<int>(std::ceil(band.lo * len));
    int hi = static_cast<int>(std::floor(band.hi * len));
    return uniform_int(rng, lo, hi + 1);
}

TokenSequence build_response(Rng& rng, int net, int len, const std::vector<int>& target,
                             const std::vector<int>& penalty, const std::vector<int>& neutral) {
    int hits = net > 0 ? net : 0;
    int misses = net < 0 ? -net : 0;
    TokenSequence seq;
    seq.tokens.reserve(len);
    for (int i = 0; i < hits; ++i)
        seq.tokens.push_back(target[uniform_below(rng, target.size())]);
    for (int i = 0; i < misses; ++i)
        seq.tokens.push_back(penalty[uniform_below(rng, penalty.size())]);
    for (int i = hits + misses; i < len; ++i)
        seq.tokens.push_back(neutral[uniform_below(rng, neutral.size())]);
    shuffle_in_place(seq.tokens, rng);
    return seq;
}

}  // namespace

std::vector<PreferenceRecord> generate_synthetic(const SynthConfig& config, std::uint64_t seed) {
    if (config.vocab_size < 4) {
        throw ConfigError("vocab_size must be >= 4, got " + std::to_string(config.vocab_size));
    }
    if (config.query_len < 1) {
        throw ConfigError("query_len must be >= 1, got " + std::to_string(config.query_len));
    }
    if (config.response_len < 4) {
        throw ConfigError("response_len must be >= 4, got " + std::to_string(config.response_len));
    }
    if (config.rank_len != 2 && config.rank_len != 3) {
        throw ConfigError("rank_len must be 2 or 3, got " + std::to_string(config.rank_len));
    }
    if (config.num_records < 0) {
        throw ConfigError("num_records must be >= 0, got " + std::to_string(config.num_records));
    }
    if (config.noise_fraction < 0.0 || config.noise_fraction > 1.0) {
        throw ConfigError("noise_fraction must be in [0,1], got " +
                          std::to_string(config.noise_fraction));
    }
    OracleSpec oracle = config.oracle;
    oracle.vocab_size = config.vocab_size;
    validate_oracle(oracle);
    if (oracle.target.empty() || oracle.penalty.empty()) {
        throw ConfigError("synthetic generation needs nonempty oracle target and penalty sets");
    }
    std::unordered_set<int> scored(oracle.target.begin(), oracle.target.end());
    scored.insert(oracle.penalty.begin(), oracle.penalty.end());
    std::vector<int> neutral;
    for (int t = 0; t < config.vocab_size; ++t) {
        if (!scored.count(t)) neutral.push_back(t);
    }
    if (neutral.empty()) {
        throw ConfigError("oracle target and penalty sets cover the whole vocabulary; "
                          "at least one neutral token is required");
    }

    Rng rng(seed);
    std::vector<PreferenceRecord> records;
    records.reserve(config.num_records);
    for (int r = 0; r < config.num_records; ++r) {
        PreferenceRecord rec;
        rec.query.tokens.reserve(config.query_len);
        for (int i = 0; i < config.query_len; ++i) {
            rec.query.tokens.push_back(uniform_int(rng, 0, config.vocab_size));
        }
        int prev = config.response_len + 1;
        for (int q = 0; q < config.rank_len; ++q) {
            int net = draw_net_count(rng, kBands[q], config.response_len);
            net = std::min(net, prev - 1);          // strict descent across ranks
            net = std::max(net, -config.response_len);
            rec.responses.push_back(
                build_response(rng, net, config.response_len, oracle.target, oracle.penalty,
                               neutral));
            prev = net;
        }
        rec.source_tag = "clean";
        records.push_back(std::move(rec));
    }

    const int noisy = static_cast<int>(
        std::llround(config.noise_fraction * static_cast<double>(config.num_records)));
    std::vector<int> order(records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    shuffle_in_place(order, rng);
    for (int i = 0; i < noisy; ++i) {
        PreferenceRecord& rec = records[order[i]];
        std::swap(rec.responses[0], rec.responses[1]);
        rec.source_tag = "noisy_injected";
    }
    return records;
}

}  // namespace clha
