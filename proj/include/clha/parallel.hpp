// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>

namespace clha {

// Every data-parallel kernel runs in one of two modes. The serial mode is the
// reference implementation; the OpenMP mode must produce bit-identical results
// because bodies only write to their own slot and reductions happen outside
// the parallel region, in index order.
enum class ExecMode { serial, openmp };

// Thread cap for OpenMP kernels: CLHA_THREADS env var when set, else the
// OpenMP default for this machine.
int thread_cap();

// Runs body(i) for i in [0, n). Under ExecMode::openmp, body must be safe to
// call concurrently for distinct i and must not throw out of the region;
// kernels that can fail capture errors per slot and rethrow after the join.
void parallel_for(int n, ExecMode mode, const std::function<void(int)>& body);

const char* to_string(ExecMode mode);
ExecMode exec_mode_from_string(const std::string& name);

}  // namespace clha
