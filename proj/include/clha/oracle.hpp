// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "clha/types.hpp"

namespace clha {

/// Ground-truth scorer for synthetic tasks. Tokens in `target` score +1,
/// tokens in `penalty` score -1, everything else 0; the sets must be disjoint.
/// The reward of a response is the normalized sum, bounded in [-1, 1].
struct OracleSpec {
    std::vector<int> target;
    std::vector<int> penalty;
    int vocab_size = 0;  // 0 = unspecified; set by file loads and gen configs
};

void validate_oracle(const OracleSpec& oracle);

double oracle_reward(const TokenSequence& response, const OracleSpec& oracle);

OracleSpec load_oracle(const std::string& path);
void save_oracle(const OracleSpec& oracle, const std::string& path);

}  // namespace clha
