// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace clha {

// Bad flags, bad config files, incompatible artifacts. CLI exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent data encountered while running. CLI exit code 1.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace clha
