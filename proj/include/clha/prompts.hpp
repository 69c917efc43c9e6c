// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "clha/types.hpp"

namespace clha {

/// Evaluation prompt file: a single JSON object
///   {"vocab_size": int, "tokenizer": "identity"|"byte",
///    "prompts": [str, ...], "references": [[str, ...], ...]}
/// where references are optional and, when present, carry one list of
/// reference strings per prompt.
struct PromptSet {
    int vocab_size = 0;
    std::string tokenizer_name = "identity";
    std::vector<TokenSequence> prompts;
    std::vector<std::vector<TokenSequence>> references;
};

PromptSet load_prompts(const std::string& path);
void save_prompts(const PromptSet& set, const std::string& path);

}  // namespace clha
