// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace clha {

/// FNV-1a 64-bit digest of the canonical (key-sorted) serialization of a
/// fully-resolved configuration; hex string. Stable across reruns because
/// nlohmann::json orders object keys and prints shortest round-trip numbers.
std::string config_digest(const nlohmann::json& resolved_config);

struct RunManifest {
    std::string command;
    std::string config_digest;
    std::uint64_t seed = 0;
    std::vector<std::string> artifact_paths;
    std::string started;
    std::string finished;
    nlohmann::json config;  // the fully-resolved configuration the digest covers
};

/// UTC wall-clock in ISO-8601 (manifests are the one artifact class that is
/// not byte-reproducible; reruns are compared on config_digest instead).
std::string utc_timestamp();

void write_manifest(const RunManifest& manifest, const std::string& path);
RunManifest load_manifest(const std::string& path);

}  // namespace clha
