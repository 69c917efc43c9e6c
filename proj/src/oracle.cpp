// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#include "clha/oracle.hpp"

#include <fstream>
#include <unordered_set>

#include "clha/errors.hpp"
#include "json.hpp"

namespace clha {

void validate_oracle(const OracleSpec& oracle) {
    std::unordered_set<int> targets(oracle.target.begin(), oracle.target.end());
    for (int t : oracle.penalty) {
        if (targets.count(t)) {
            throw DataError("oracle target and penalty sets overlap on token " +
                            std::to_string(t));
        }
    }
    if (oracle.vocab_size > 0) {
        for (int t : oracle.target) {
            if (t < 0 || t >= oracle.vocab_size) {
                throw DataError("oracle target token " + std::to_string(t) +
                                " outside vocab of size " + std::to_string(oracle.vocab_size));
            }
        }
        for (int t : oracle.penalty) {
            if (t < 0 || t >= oracle.vocab_size) {
                throw DataError("oracle penalty token " + std::to_string(t) +
                                " outside vocab of size " + std::to_string(oracle.vocab_size));
            }
        }
    }
}

double oracle_reward(const TokenSequence& response, const OracleSpec& oracle) {
    if (response.tokens.empty()) {
        throw DataError("oracle_reward on empty response");
    }
    std::unordered_set<int> targets(oracle.target.begin(), oracle.target.end());
    std::unordered_set<int> penalties(oracle.penalty.begin(), oracle.penalty.end());
    long hits = 0;
    long misses = 0;
    for (int t : response.tokens) {
        if (targets.count(t)) ++hits;
        if (penalties.count(t)) ++misses;
    }
    return static_cast<double>(hits - misses) / static_cast<double>(response.tokens.size());
}

OracleSpec load_oracle(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open oracle file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed oracle file " + path + ": " + e.what());
    }
    OracleSpec oracle;
    try {
        oracle.target = j.at("target").get<std::vector<int>>();
        oracle.penalty = j.at("penalty").get<std::vector<int>>();
        oracle.vocab_size = j.value("vocab_size", 0);
    } catch (const nlohmann::json::exception& e) {
        throw DataError("bad oracle schema in " + path + ": " + e.what());
    }
    validate_oracle(oracle);
    return oracle;
}

void save_oracle(const OracleSpec& oracle, const std::string& path) {
    nlohmann::json j;
    j["target"] = oracle.target;
    j["penalty"] = oracle.penalty;
    j["vocab_size"] = oracle.vocab_size;
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write oracle file " + path);
    out << j.dump(2) << "\n";
}

}  // namespace clha
