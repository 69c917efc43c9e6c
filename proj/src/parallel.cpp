// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#include "clha/parallel.hpp"

#include <cstdlib>
#include <string>

#include "clha/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace clha {

int thread_cap() {
    if (const char* env = std::getenv("CLHA_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void parallel_for(int n, ExecMode mode, const std::function<void(int)>& body) {
#ifdef _OPENMP
    if (mode == ExecMode::openmp) {
        const int threads = thread_cap();
#pragma omp parallel for num_threads(threads) schedule(static)
        for (int i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
#else
    (void)mode;
#endif
    for (int i = 0; i < n; ++i) {
        body(i);
    }
}

const char* to_string(ExecMode mode) {
    return mode == ExecMode::serial ? "serial" : "openmp";
}

ExecMode exec_mode_from_string(const std::string& name) {
    if (name == "serial") return ExecMode::serial;
    if (name == "openmp") return ExecMode::openmp;
    throw ConfigError("unknown exec mode: " + name);
}

}  // namespace clha
