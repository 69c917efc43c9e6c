// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
//
// Times the two data-parallel kernels (batch loss/gradient evaluation and
// per-prompt sampling evaluation) in serial and OpenMP modes and verifies the
// two modes agree bit-for-bit. CLHA_THREADS caps the OpenMP side.
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "clha/eval.hpp"
#include "clha/losses.hpp"
#include "clha/parallel.hpp"
#include "clha/prefdata.hpp"
#include "clha/rng.hpp"
#include "clha/trainer.hpp"

namespace {

using namespace clha;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Mean batch gradient of the CLHA objective, slot-private then reduced in
// index order: the same shape train_step uses.
std::vector<double> batch_gradient(const TinyLM& model,
                                   const std::vector<RescoredRecord>& batch,
                                   const MarginConfig& cfg, ExecMode mode) {
    const int n = static_cast<int>(batch.size());
    std::vector<TotalLossResult> slots(n);
    parallel_for(n, mode, [&](int i) {
        slots[i] = objective_loss(Objective::clha, batch[i], model, cfg);
    });
    std::vector<double> grad(model.num_params(), 0.0);
    for (int i = 0; i < n; ++i) {
        for (std::size_t w = 0; w < grad.size(); ++w) grad[w] += slots[i].gradient[w];
    }
    for (double& g : grad) g /= static_cast<double>(n);
    return grad;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Serial vs OpenMP kernel benchmark"};
    int records = 512;
    int prompts = 2048;
    int reps = 5;
    std::uint64_t seed = 7;
    app.add_option("--records", records, "Batch size for the gradient kernel");
    app.add_option("--prompts", prompts, "Prompt count for the eval kernel");
    app.add_option("--reps", reps, "Timed repetitions per mode");
    app.add_option("--seed", seed, "RNG seed");
    CLI11_PARSE(app, argc, argv);

    SynthConfig synth;
    synth.vocab_size = 16;
    synth.rank_len = 3;
    synth.num_records = records;
    synth.noise_fraction = 0.2;
    synth.oracle.target = {1, 2, 3};
    synth.oracle.penalty = {4, 5, 6};
    auto data = generate_synthetic(synth, seed);

    TinyLM model = make_model(synth.vocab_size, 2);
    Rng rng(seed);
    for (double& p : model.params) p = uniform_real(rng, -0.5, 0.5);

    OracleSpec oracle = synth.oracle;
    oracle.vocab_size = synth.vocab_size;
    ScoreFn fn = [&oracle](const TokenSequence&, const TokenSequence& r) {
        return oracle_reward(r, oracle);
    };
    MarginConfig margin;
    auto batch = rescore_for_objective(Objective::clha, fn, data, margin.epsilon);

    std::printf("threads available to openmp mode: %d\n\n", thread_cap());
    std::printf("%-24s %10s %10s %9s %s\n", "kernel", "serial(s)", "openmp(s)", "speedup",
                "bit-identical");

    std::vector<double> grad_serial, grad_openmp;
    double t_serial = 0.0, t_openmp = 0.0;
    for (int r = 0; r < reps; ++r) {
        auto t0 = Clock::now();
        grad_serial = batch_gradient(model, batch, margin, ExecMode::serial);
        t_serial += seconds_since(t0);
        t0 = Clock::now();
        grad_openmp = batch_gradient(model, batch, margin, ExecMode::openmp);
        t_openmp += seconds_since(t0);
    }
    bool grad_ok = bitwise_equal(grad_serial, grad_openmp);
    std::printf("%-24s %10.6f %10.6f %8.2fx %s\n", "batch-gradient", t_serial / reps,
                t_openmp / reps, t_serial / t_openmp, grad_ok ? "yes" : "NO");

    std::vector<TokenSequence> eval_prompts;
    for (int i = 0; i < prompts; ++i) {
        TokenSequence q;
        for (int t = 0; t < 6; ++t) {
            q.tokens.push_back(static_cast<int>(uniform_below(rng, synth.vocab_size)));
        }
        eval_prompts.push_back(std::move(q));
    }
    EvalResult ev_serial, ev_openmp;
    double e_serial = 0.0, e_openmp = 0.0;
    for (int r = 0; r < reps; ++r) {
        auto t0 = Clock::now();
        ev_serial = evaluate(model, eval_prompts, oracle, {}, seed, 16, ExecMode::serial);
        e_serial += seconds_since(t0);
        t0 = Clock::now();
        ev_openmp = evaluate(model, eval_prompts, oracle, {}, seed, 16, ExecMode::openmp);
        e_openmp += seconds_since(t0);
    }
    bool eval_ok = ev_serial.summary.mean_reward == ev_openmp.summary.mean_reward;
    for (std::size_t i = 0; eval_ok && i < ev_serial.per_prompt.size(); ++i) {
        eval_ok = ev_serial.per_prompt[i].sample == ev_openmp.per_prompt[i].sample &&
                  ev_serial.per_prompt[i].reward == ev_openmp.per_prompt[i].reward;
    }
    std::printf("%-24s %10.6f %10.6f %8.2fx %s\n", "prompt-eval", e_serial / reps,
                e_openmp / reps, e_serial / e_openmp, eval_ok ? "yes" : "NO");

    return grad_ok && eval_ok ? 0 : 1;
}
