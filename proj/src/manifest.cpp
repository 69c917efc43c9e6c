// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#include "clha/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "clha/errors.hpp"

namespace clha {

std::string config_digest(const nlohmann::json& resolved_config) {
    const std::string canon = resolved_config.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 0x00000100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
    nlohmann::json j;
    j["command"] = manifest.command;
    j["config_digest"] = manifest.config_digest;
    j["seed"] = manifest.seed;
    j["artifact_paths"] = manifest.artifact_paths;
    j["started"] = manifest.started;
    j["finished"] = manifest.finished;
    j["config"] = manifest.config;
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write manifest " + path);
    out << j.dump(2) << "\n";
}

RunManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open manifest " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed manifest " + path + ": " + e.what());
    }
    RunManifest m;
    try {
        m.command = j.at("command").get<std::string>();
        m.config_digest = j.at("config_digest").get<std::string>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.artifact_paths = j.at("artifact_paths").get<std::vector<std::string>>();
        m.started = j.at("started").get<std::string>();
        m.finished = j.at("finished").get<std::string>();
        m.config = j.value("config", nlohmann::json::object());
    } catch (const nlohmann::json::exception& e) {
        throw DataError("bad manifest schema in " + path + ": " + e.what());
    }
    return m;
}

}  // namespace clha
