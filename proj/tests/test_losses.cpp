// Copyright (c) 2026 the clha authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <limits>

#include "clha/errors.hpp"
#include "clha/losses.hpp"
#include "clha/rng.hpp"
#include "doctest.h"

using namespace clha;

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kLn4 = 1.3862943611198906;

TokenSequence seq(std::vector<int> tokens) { return TokenSequence{std::move(tokens)}; }

BoolMatrix no_gate(int n) { return BoolMatrix(n, std::vector<bool>(n, false)); }

MarginConfig margin(double m) {
    MarginConfig cfg;
    cfg.margin = m;
    return cfg;
}

RescoredRecord rescored_fixture(std::vector<double> rewards, double epsilon,
                                int response_len = 3) {
    PreferenceRecord rec;
    rec.query = seq({0, 1});
    for (std::size_t r = 0; r < rewards.size(); ++r) {
        TokenSequence s;
        for (int t = 0; t < response_len; ++t) {
            s.tokens.push_back(static_cast<int>((r + t) % 4));
        }
        rec.responses.push_back(std::move(s));
    }
    int idx = 0;
    auto fn = [&rewards, &idx](const TokenSequence&, const TokenSequence&) {
        return rewards[idx++];
    };
    return rescore(fn, rec, epsilon);
}

}  // namespace

TEST_SUITE_BEGIN("losses");

TEST_CASE("xi_adjust scales the margin by rank distance") {
    CHECK(xi_adjust(margin(0.1), 0, 1) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(xi_adjust(margin(0.1), 0, 3) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(xi_adjust(margin(0.0), 2, 5) == 0.0);
    CHECK_THROWS_AS(xi_adjust(margin(0.1), 1, 1), DataError);
    CHECK_THROWS_AS(xi_adjust(margin(0.1), 2, 1), DataError);
}

TEST_CASE("alpha_for_length follows 0.05 (l-1)^2") {
    CHECK(alpha_for_length(2) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(alpha_for_length(3) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(std::abs(alpha_for_length(5) - 0.8) < 1e-9);
    CHECK_THROWS_AS(alpha_for_length(1), DataError);
}

TEST_CASE("clha_loss worked examples") {
    auto satisfied = clha_loss({-1.0, -1.2}, no_gate(2), margin(0.1));
    CHECK(satisfied.value == 0.0);
    CHECK(satisfied.pair_terms.at({0, 1}) == 0.0);
    CHECK(satisfied.grad_coeffs == std::vector<double>{0.0, 0.0});

    auto violated = clha_loss({-1.2, -1.0}, no_gate(2), margin(0.1));
    CHECK(std::abs(violated.value - 0.3) < 1e-9);
    CHECK(violated.grad_coeffs[0] == -1.0);
    CHECK(violated.grad_coeffs[1] == 1.0);

    BoolMatrix gated = no_gate(2);
    gated[0][1] = gated[1][0] = true;
    CHECK(clha_loss({-1.2, -1.0}, gated, margin(0.1)).value == 0.0);

    auto three = clha_loss({-1.0, -1.0, -1.0}, no_gate(3), margin(0.1));
    CHECK(std::abs(three.value - 0.4) < 1e-9);
    CHECK(std::abs(three.pair_terms.at({0, 1}) - 0.1) < 1e-12);
    CHECK(std::abs(three.pair_terms.at({0, 2}) - 0.2) < 1e-12);
    CHECK(std::abs(three.pair_terms.at({1, 2}) - 0.1) < 1e-12);
}

TEST_CASE("clha_loss is invariant to constant shifts of p") {
    Rng rng(61);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<double> p;
        for (int i = 0; i < 3; ++i) p.push_back(uniform_real(rng, -3.0, 0.0));
        const double c = uniform_real(rng, -5.0, 5.0);
        std::vector<double> shifted = p;
        for (double& x : shifted) x += c;
        CHECK(std::abs(clha_loss(p, no_gate(3), margin(0.15)).value -
                       clha_loss(shifted, no_gate(3), margin(0.15)).value) < 1e-10);
    }
}

TEST_CASE("raising the preferred likelihood never increases clha_loss") {
    Rng rng(67);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<double> p;
        for (int i = 0; i < 3; ++i) p.push_back(uniform_real(rng, -3.0, 0.0));
        double prev = clha_loss(p, no_gate(3), margin(0.1)).value;
        for (double bump = 0.05; bump < 1.0; bump += 0.05) {
            std::vector<double> raised = p;
            raised[0] += bump;
            const double cur = clha_loss(raised, no_gate(3), margin(0.1)).value;
            CHECK(cur <= prev + 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("hinge saturates while pro_loss stays positive") {
    const std::vector<double> p = {-0.5, -1.0, -1.6};
    auto hinge = clha_loss(p, no_gate(3), margin(0.1));
    CHECK(hinge.value == 0.0);
    for (double g : hinge.grad_coeffs) CHECK(g == 0.0);

    auto pro = pro_loss(p);
    CHECK(pro.value > 0.0);
    bool any_nonzero = false;
    for (double g : pro.grad_coeffs) any_nonzero = any_nonzero || g != 0.0;
    CHECK(any_nonzero);
}

TEST_CASE("sft_loss worked examples") {
    CHECK(sft_loss({-kLn4, -kLn4, -kLn4}) == doctest::Approx(kLn4).epsilon(1e-12));
    CHECK(std::abs(sft_loss({std::log(0.5), std::log(0.25)}) - 1.0397207708399180) < 1e-9);
    CHECK(sft_loss({0.0, 0.0}) == 0.0);
    CHECK_THROWS_AS(sft_loss({}), DataError);
}

TEST_CASE("pro_loss worked examples") {
    CHECK(std::abs(pro_loss({0.0, 0.0}).value - kLn2) < 1e-9);
    CHECK(std::abs(pro_loss({5.0, -5.0}).value - 4.5398899216864647e-05) < 1e-9);
    CHECK(std::abs(pro_loss({0.0, 0.0, 0.0}).value - 1.791759469228055) < 1e-9);
    CHECK(pro_loss({-1.0, -2.0}).value >= 0.0);
}

TEST_CASE("pro_loss depends only on the likelihood vector") {
    auto a = pro_loss({-0.3, -0.9, -1.4});
    auto b = pro_loss({-0.3, -0.9, -1.4});
    CHECK(a.value == b.value);
    CHECK(a.grad_coeffs == b.grad_coeffs);
    CHECK(a.terms.size() == 2);
    CHECK(std::abs(a.terms[0] + a.terms[1] - a.value) < 1e-12);
}

TEST_CASE("total_loss composes the hinge and gated sft terms on a uniform model") {
    TinyLM model = make_model(4, 2);
    auto rescored = rescored_fixture({0.5, -0.5}, 0.05);
    auto res = total_loss(rescored, model, margin(0.1));
    // Uniform model: every p_i = ln(1/4), so the single hinge sits exactly at
    // the margin and sft is ln 4.
    CHECK(std::abs(res.report.clha - 0.1) < 1e-12);
    CHECK(std::abs(res.report.sft - kLn4) < 1e-12);
    CHECK(res.report.lambda_flag == 0);
    CHECK(res.report.alpha == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(std::abs(res.report.total - (0.1 + 0.05 * kLn4)) < 1e-12);

    auto noisy = rescored_fixture({-0.1, -0.5}, 0.05);
    auto res_noisy = total_loss(noisy, model, margin(0.1));
    CHECK(res_noisy.report.lambda_flag == 1);
    CHECK(res_noisy.report.total == res_noisy.report.clha);
}

TEST_CASE("fully gated record with lambda 1 has zero loss and zero gradient") {
    TinyLM model = make_model(4, 2);
    auto rescored = rescored_fixture({-0.2, -0.2}, 0.5);
    REQUIRE(rescored.k_mask[0][1]);
    auto res = total_loss(rescored, model, margin(0.1));
    CHECK(res.report.total == 0.0);
    CHECK(res.report.lambda_flag == 1);
    for (double g : res.gradient) CHECK(g == 0.0);
}

TEST_CASE("LossReport invariants hold on random inputs") {
    Rng rng(71);
    for (int trial = 0; trial < 30; ++trial) {
        TinyLM model = make_model(4, 2);
        for (double& p : model.params) p = uniform_real(rng, -1.0, 1.0);
        std::vector<double> rewards;
        const int n = 2 + static_cast<int>(uniform_below(rng, 2));
        for (int i = 0; i < n; ++i) rewards.push_back(uniform_real(rng, -1.0, 1.0));
        auto rescored = rescored_fixture(rewards, 0.3);
        auto res = total_loss(rescored, model, margin(0.2));
        const LossReport& rep = res.report;
        CHECK(std::abs(rep.total - (rep.clha + rep.alpha * (1 - rep.lambda_flag) * rep.sft)) <
              1e-12);
        double term_sum = 0.0;
        for (const auto& [key, value] : rep.pair_terms) term_sum += value;
        CHECK(std::abs(rep.clha - term_sum) < 1e-12);
        for (const auto& key : rep.k_gated_pairs) CHECK(rep.pair_terms.at(key) == 0.0);
        CHECK(rep.clha >= 0.0);
        CHECK(rep.sft >= 0.0);
    }
}

TEST_CASE("the as-printed hinge orientation penalizes the opposite side") {
    MarginConfig printed = margin(0.1);
    printed.eq4_as_printed = true;
    auto res = clha_loss({-1.0, -1.2}, no_gate(2), printed);
    CHECK(std::abs(res.value - 0.3) < 1e-12);
    CHECK(res.grad_coeffs[0] == 1.0);
    CHECK(res.grad_coeffs[1] == -1.0);
    CHECK(clha_loss({-1.2, -1.0}, no_gate(2), printed).value == 0.0);
}

TEST_CASE("objective_loss keeps the report identity for every objective") {
    TinyLM model = make_model(4, 2);
    Rng rng(73);
    for (double& p : model.params) p = uniform_real(rng, -0.5, 0.5);
    auto rescored = rescored_fixture({0.4, -0.3, -0.6}, 0.05);
    for (Objective obj : {Objective::clha, Objective::clha_no_xi, Objective::pro,
                          Objective::sft}) {
        auto res = objective_loss(obj, rescored, model, margin(0.1));
        const LossReport& rep = res.report;
        CHECK(std::abs(rep.total - (rep.clha + rep.alpha * (1 - rep.lambda_flag) * rep.sft)) <
              1e-12);
        double term_sum = 0.0;
        for (const auto& [key, value] : rep.pair_terms) term_sum += value;
        CHECK(std::abs(rep.clha - term_sum) < 1e-12);
    }
    auto sft_only = objective_loss(Objective::sft, rescored, model, margin(0.1));
    CHECK(sft_only.report.alpha == 1.0);
    CHECK(sft_only.report.lambda_flag == 0);
    CHECK(sft_only.report.total == sft_only.report.sft);
    CHECK(sft_only.report.pair_terms.empty());

    auto pro = objective_loss(Objective::pro, rescored, model, margin(0.1));
    CHECK(pro.report.clha > 0.0);
    CHECK(pro.report.pair_terms.size() == 2);
}

TEST_CASE("clha_no_xi ignores the configured margin") {
    TinyLM model = make_model(4, 2);
    auto rescored = rescored_fixture({0.5, -0.5}, 0.05);
    auto with_xi = objective_loss(Objective::clha, rescored, model, margin(0.1));
    auto no_xi = objective_loss(Objective::clha_no_xi, rescored, model, margin(0.1));
    CHECK(with_xi.report.clha > 0.0);  // uniform p, hinge open by exactly xi
    CHECK(no_xi.report.clha == 0.0);
}

TEST_CASE("loss evaluation rejects malformed shapes") {
    CHECK_THROWS_AS(clha_loss({-1.0}, no_gate(1), margin(0.1)), DataError);
    CHECK_THROWS_AS(clha_loss({-1.0, -2.0}, no_gate(3), margin(0.1)), DataError);
    CHECK_THROWS_AS(pro_loss({0.0}), DataError);
    TinyLM model = make_model(4, 2);
    auto rescored = rescored_fixture({0.5, -0.5}, 0.05);
    rescored.rewards.pop_back();
    CHECK_THROWS_AS(total_loss(rescored, model, margin(0.1)), DataError);
}

TEST_SUITE_END();
