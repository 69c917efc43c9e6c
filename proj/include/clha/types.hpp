// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace clha {

/// A tokenized text: non-negative ids, each below the vocabulary size.
struct TokenSequence {
    std::vector<int> tokens;

    int length() const { return static_cast<int>(tokens.size()); }
    bool operator==(const TokenSequence&) const = default;
};

/// One query with responses ordered by preference: index 0 is the most
/// preferred, and index i is preferred over index j whenever i < j.
/// `rewards`, when present, is parallel to `responses`.
struct PreferenceRecord {
    TokenSequence query;
    std::vector<TokenSequence> responses;
    std::optional<std::vector<double>> rewards;
    std::string source_tag;

    int ranking_length() const { return static_cast<int>(responses.size()); }
    bool operator==(const PreferenceRecord&) const = default;
};

/// Noise verdict for a record's top-ranked response: noisy exactly when the
/// reward assigned to it is negative.
struct NoiseLabel {
    bool is_noisy = false;
    double chosen_reward = 0.0;

    static NoiseLabel from_reward(double reward) { return NoiseLabel{reward < 0.0, reward}; }
    bool operator==(const NoiseLabel&) const = default;
};

// Throw DataError on violation; `where` names the offending location in messages.
void validate_sequence(const TokenSequence& seq, int vocab_size, const std::string& where = {});
void validate_record(const PreferenceRecord& rec, int vocab_size, const std::string& where = {});

}  // namespace clha
