// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "clha/types.hpp"

namespace clha {

class Tokenizer {
  public:
    virtual ~Tokenizer() = default;
    virtual int vocab_size() const = 0;
    virtual TokenSequence encode(std::string_view text) const = 0;
    virtual std::string decode(const TokenSequence& seq) const = 0;
};

/// Each byte of the input is one token id (0..255). Id 256 is reserved as the
/// end-of-sequence token so no real byte collides with it; vocab size is 257.
class ByteTokenizer final : public Tokenizer {
  public:
    static constexpr int kVocabSize = 257;

    int vocab_size() const override { return kVocabSize; }
    TokenSequence encode(std::string_view text) const override;
    std::string decode(const TokenSequence& seq) const override;
};

/// Tokens are whitespace-separated integers rendered literally, e.g. "3 1 4".
/// Used for synthetic datasets so files round-trip exactly.
class IdentityTokenizer final : public Tokenizer {
  public:
    explicit IdentityTokenizer(int vocab_size);

    int vocab_size() const override { return vocab_size_; }
    TokenSequence encode(std::string_view text) const override;
    std::string decode(const TokenSequence& seq) const override;

  private:
    int vocab_size_;
};

std::unique_ptr<Tokenizer> make_tokenizer(const std::string& name, int vocab_size);

}  // namespace clha
