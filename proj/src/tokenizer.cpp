// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#include "clha/tokenizer.hpp"

#include <charconv>

#include "clha/errors.hpp"

namespace clha {

TokenSequence ByteTokenizer::encode(std::string_view text) const {
    TokenSequence seq;
    seq.tokens.reserve(text.size());
    for (unsigned char c : text) {
        seq.tokens.push_back(static_cast<int>(c));
    }
    return seq;
}

std::string ByteTokenizer::decode(const TokenSequence& seq) const {
    std::string out;
    out.reserve(seq.tokens.size());
    for (int t : seq.tokens) {
        if (t < 0 || t > 255) {
            throw DataError("byte tokenizer cannot decode token id " + std::to_string(t));
        }
        out.push_back(static_cast<char>(static_cast<unsigned char>(t)));
    }
    return out;
}

IdentityTokenizer::IdentityTokenizer(int vocab_size) : vocab_size_(vocab_size) {
    if (vocab_size < 1) {
        throw ConfigError("identity tokenizer vocab size must be >= 1");
    }
}

TokenSequence IdentityTokenizer::encode(std::string_view text) const {
    TokenSequence seq;
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && text[pos] == ' ') ++pos;
        if (pos >= text.size()) break;
        std::size_t end = pos;
        while (end < text.size() && text[end] != ' ') ++end;
        int value = 0;
        auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + end, value);
        if (ec != std::errc{} || ptr != text.data() + end) {
            throw DataError("identity tokenizer cannot parse token \"" +
                            std::string(text.substr(pos, end - pos)) + "\"");
        }
        if (value < 0 || value >= vocab_size_) {
            throw DataError("token id " + std::to_string(value) +
                            " outside vocabulary of size " + std::to_string(vocab_size_));
        }
        seq.tokens.push_back(value);
        pos = end;
    }
    return seq;
}

std::string IdentityTokenizer::decode(const TokenSequence& seq) const {
    std::string out;
    for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
        if (i > 0) out.push_back(' ');
        out += std::to_string(seq.tokens[i]);
    }
    return out;
}

std::unique_ptr<Tokenizer> make_tokenizer(const std::string& name, int vocab_size) {
    if (name == "byte") return std::make_unique<ByteTokenizer>();
    if (name == "identity") return std::make_unique<IdentityTokenizer>(vocab_size);
    throw ConfigError("unknown tokenizer: " + name);
}

}  // namespace clha
