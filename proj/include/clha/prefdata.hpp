// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clha/oracle.hpp"
#include "clha/tokenizer.hpp"
#include "clha/types.hpp"

namespace clha {

/// Reads one PreferenceRecord per line. Each line is a JSON object with
/// `prompt` (string), `responses` (array of strings, rank order), and
/// optional `rewards` (array of numbers) and `source_tag` (string) fields.
/// Errors name the 1-based line number.
std::vector<PreferenceRecord> load_jsonl(const std::string& path, const Tokenizer& tokenizer);

/// Inverse of load_jsonl: decodes token sequences back to strings and mirrors
/// the input schema, adding `rewards` and `source_tag` when present.
void write_jsonl(const std::vector<PreferenceRecord>& records, const std::string& path,
                 const Tokenizer& tokenizer);

struct SynthConfig {
    int vocab_size = 16;
    int query_len = 6;
    int response_len = 8;   // >= 4 so the reward bands below stay feasible
    int rank_len = 2;       // n in {2, 3}
    int num_records = 0;
    double noise_fraction = 0.0;
    OracleSpec oracle;
};

/// Synthesizes preference records whose ranking agrees with oracle_reward,
/// then swaps the top-2 responses in exactly round(noise_fraction * N)
/// records chosen by seeded shuffle. Swapped records get source_tag
/// "noisy_injected", the rest "clean". Deterministic given the seed.
///
/// Responses are built from per-rank net-count bands so that rank 0 always
/// has a strictly positive oracle reward and every lower rank a strictly
/// negative one, with strictly descending rewards inside each record.
std::vector<PreferenceRecord> generate_synthetic(const SynthConfig& config, std::uint64_t seed);

}  // namespace clha
