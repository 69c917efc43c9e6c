// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#include "clha/prompts.hpp"

#include <fstream>

#include "clha/errors.hpp"
#include "clha/tokenizer.hpp"
#include "json.hpp"

namespace clha {

PromptSet load_prompts(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open prompts file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed prompts file " + path + ": " + e.what());
    }
    PromptSet set;
    try {
        set.vocab_size = j.at("vocab_size").get<int>();
        set.tokenizer_name = j.value("tokenizer", "identity");
        auto tok = make_tokenizer(set.tokenizer_name, set.vocab_size);
        for (const auto& p : j.at("prompts")) {
            set.prompts.push_back(tok->encode(p.get<std::string>()));
        }
        if (j.contains("references")) {
            for (const auto& refs : j.at("references")) {
                std::vector<TokenSequence> rs;
                for (const auto& r : refs) rs.push_back(tok->encode(r.get<std::string>()));
                set.references.push_back(std::move(rs));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError("bad prompts schema in " + path + ": " + e.what());
    }
    if (set.prompts.empty()) throw DataError("prompts file " + path + " has no prompts");
    if (!set.references.empty() && set.references.size() != set.prompts.size()) {
        throw DataError("prompts file " + path + " has " + std::to_string(set.references.size()) +
                        " reference sets for " + std::to_string(set.prompts.size()) + " prompts");
    }
    return set;
}

void save_prompts(const PromptSet& set, const std::string& path) {
    auto tok = make_tokenizer(set.tokenizer_name, set.vocab_size);
    nlohmann::json j;
    j["vocab_size"] = set.vocab_size;
    j["tokenizer"] = set.tokenizer_name;
    auto prompts = nlohmann::json::array();
    for (const auto& p : set.prompts) prompts.push_back(tok->decode(p));
    j["prompts"] = std::move(prompts);
    if (!set.references.empty()) {
        auto refs = nlohmann::json::array();
        for (const auto& rs : set.references) {
            auto inner = nlohmann::json::array();
            for (const auto& r : rs) inner.push_back(tok->decode(r));
            refs.push_back(std::move(inner));
        }
        j["references"] = std::move(refs);
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write prompts file " + path);
    out << j.dump(2) << "\n";
}

}  // namespace clha
