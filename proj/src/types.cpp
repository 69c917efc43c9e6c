// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#include "clha/types.hpp"

#include "clha/errors.hpp"

namespace clha {

namespace {
std::string at(const std::string& where) {
    return where.empty() ? std::string{} : " at " + where;
}
}  // namespace

void validate_sequence(const TokenSequence& seq, int vocab_size, const std::string& where) {
    if (seq.tokens.empty()) {
        throw DataError("empty token sequence" + at(where));
    }
    for (int t : seq.tokens) {
        if (t < 0 || t >= vocab_size) {
            throw DataError("token id " + std::to_string(t) + " outside vocabulary of size " +
                            std::to_string(vocab_size) + at(where));
        }
    }
}

void validate_record(const PreferenceRecord& rec, int vocab_size, const std::string& where) {
    validate_sequence(rec.query, vocab_size, where);
    if (rec.ranking_length() < 2) {
        throw DataError("ranking length < 2" + at(where));
    }
    for (const auto& r : rec.responses) {
        validate_sequence(r, vocab_size, where);
    }
    if (rec.rewards && rec.rewards->size() != rec.responses.size()) {
        throw DataError("rewards length " + std::to_string(rec.rewards->size()) +
                        " != responses length " + std::to_string(rec.responses.size()) + at(where));
    }
}

}  // namespace clha
