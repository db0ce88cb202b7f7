#include <doctest.h>

#include <cmath>

#include "stratcls/agent_model.hpp"
#include "stratcls/complete_info.hpp"
#include "stratcls/errors.hpp"
#include "stratcls/incomplete_info.hpp"
#include "stratcls/rng.hpp"
#include "test_util.hpp"

using namespace stratcls;

namespace {

// Independent l1 oracle: the optimum sits at a single-feature corner, so
// enumerate every corner cost c_f * alpha / |Ch|_f.
double corner_enumeration_cost(const Vector& ch, const Vector& weights, double alpha) {
    double best = -1.0;
    for (std::size_t f = 0; f < ch.size(); ++f) {
        if (ch[f] == 0.0) continue;
        const double c = weights[f] * alpha / std::fabs(ch[f]);
        if (best < 0.0 || c < best) best = c;
    }
    return best;
}

ContributionBelief zero_variance_belief(const Vector& mu) {
    return ContributionBelief{mu, Matrix(mu.size(), mu.size()), BeliefProvenance::Model1};
}

}  // namespace

TEST_SUITE_BEGIN("complete_info");

TEST_CASE("sign_normalize") {
    const auto norm = sign_normalize({2.0, -3.0, 0.0});
    CHECK(norm.y == Vector{2.0, 3.0, 0.0});
    CHECK(norm.signs == std::vector<int>{1, -1, 0});

    const auto pos = sign_normalize({1.0, 0.5});
    CHECK(pos.y == Vector{1.0, 0.5});
    CHECK(pos.signs == std::vector<int>{1, 1});

    const auto zeros = sign_normalize({0.0, 0.0});
    CHECK(zeros.y == Vector{0.0, 0.0});
    CHECK(zeros.signs == std::vector<int>{0, 0});
}

TEST_CASE("l1 best response picks the bang-per-buck corner") {
    const EffortProfile e = best_response_l1({2.0, 1.0}, {1.0, 1.0}, 4.0);
    CHECK(e.e[0] == doctest::Approx(2.0));
    CHECK(e.e[1] == 0.0);
    CHECK(cost(CostModel{1.0, {1.0, 1.0}}, e.e) == doctest::Approx(2.0));

    // alpha <= 0: no effort needed.
    const EffortProfile rest = best_response_l1({2.0, 1.0}, {1.0, 1.0}, -1.0);
    CHECK(norm_inf(rest.e) == 0.0);
    const EffortProfile boundary = best_response_l1({2.0, 1.0}, {1.0, 1.0}, 0.0);
    CHECK(norm_inf(boundary.e) == 0.0);

    // Tie between equal ratios: lowest feature index wins.
    const EffortProfile tie = best_response_l1({1.0, 1.0}, {1.0, 1.0}, 1.0);
    CHECK(tie.e[0] == doctest::Approx(1.0));
    CHECK(tie.e[1] == 0.0);

    CHECK_THROWS_AS(best_response_l1({0.0, 0.0}, {1.0, 1.0}, 1.0), Infeasible);
}

TEST_CASE("l1 handles negative contributions through sign restoration") {
    const EffortProfile e = best_response_l1({-4.0, 1.0}, {1.0, 1.0}, 2.0);
    CHECK(e.e[0] == doctest::Approx(-0.5));
    CHECK(e.e[1] == 0.0);
    // The signed effort still activates the constraint.
    CHECK(-4.0 * e.e[0] + 1.0 * e.e[1] == doctest::Approx(2.0));
}

TEST_CASE("l1 equals corner enumeration on seeded instances") {
    Rng rng(4001);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t d = 1 + rng.below(6);
        Vector ch = testutil::random_vector(rng, d, -2.0, 2.0);
        ch[rng.below(d)] += 2.5;  // keep at least one sizable entry
        const Vector weights = testutil::random_vector(rng, d, 0.1, 2.0);
        const double alpha = rng.uniform(0.1, 5.0);
        const EffortProfile e = best_response_l1(ch, weights, alpha);

        std::size_t support = 0;
        for (double x : e.e)
            if (x != 0.0) ++support;
        CHECK(support <= 1);
        CHECK(dot(ch, e.e) == doctest::Approx(alpha).epsilon(1e-9));
        CHECK(cost(CostModel{1.0, weights}, e.e) ==
              doctest::Approx(corner_enumeration_cost(ch, weights, alpha)).epsilon(1e-9));
    }
}

TEST_CASE("lp closed forms") {
    // p=2, c=1: e* = alpha Ch / ||Ch||^2.
    const EffortProfile e = best_response_lp({3.0, 4.0}, CostModel{2.0, {1.0, 1.0}}, 5.0);
    CHECK(e.e[0] == doctest::Approx(0.6));
    CHECK(e.e[1] == doctest::Approx(0.8));

    // Zero-contribution feature gets zero effort.
    const EffortProfile withzero =
        best_response_lp({3.0, 0.0, 4.0}, CostModel{2.0, {1.0, 1.0, 1.0}}, 5.0);
    CHECK(withzero.e[1] == 0.0);

    // p=3: direction exponent 1/(p-1) = 1/2.
    const EffortProfile cubic = best_response_lp({1.0, 8.0}, CostModel{3.0, {1.0, 1.0}}, 1.0);
    CHECK(cubic.e[1] / cubic.e[0] == doctest::Approx(std::sqrt(8.0)).epsilon(1e-9));
    CHECK(dot(Vector{1.0, 8.0}, cubic.e) == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS_AS(best_response_lp({1.0}, CostModel{1.0, {1.0}}, 1.0), DomainError);
    CHECK_THROWS_AS(best_response_lp({0.0}, CostModel{2.0, {1.0}}, 1.0), Infeasible);
}

TEST_CASE("lp constraint activity and scale invariance") {
    Rng rng(4002);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t d = 1 + rng.below(6);
        Vector ch = testutil::random_vector(rng, d, -2.0, 2.0);
        ch[rng.below(d)] += 2.5;
        const double p = 1.0 + rng.uniform(0.2, 3.0);
        const CostModel model{p, testutil::random_vector(rng, d, 0.1, 2.0)};
        const double alpha = rng.uniform(0.1, 4.0);

        const EffortProfile e = best_response_lp(ch, model, alpha);
        CHECK(dot(ch, e.e) == doctest::Approx(alpha).epsilon(1e-9));

        // Scaling (Ch, alpha) by gamma leaves the response unchanged.
        const double gamma = rng.uniform(0.5, 3.0);
        const EffortProfile scaled_instance =
            best_response_lp(scaled(ch, gamma), model, gamma * alpha);
        for (std::size_t f = 0; f < d; ++f)
            CHECK(std::fabs(scaled_instance.e[f] - e.e[f]) < 1e-9 * (1.0 + std::fabs(e.e[f])));

        const EffortProfile l1_scaled =
            best_response_l1(scaled(ch, gamma), model.weights, gamma * alpha);
        const EffortProfile l1_base = best_response_l1(ch, model.weights, alpha);
        for (std::size_t f = 0; f < d; ++f)
            CHECK(std::fabs(l1_scaled.e[f] - l1_base.e[f]) < 1e-9);
    }
}

TEST_CASE("lp solver agrees with the budget-bisection oracle at zero variance") {
    Rng rng(4003);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = 2 + rng.below(4);
        Vector ch = testutil::random_vector(rng, d, 0.2, 2.0);
        const double p = std::vector<double>{1.5, 2.0, 3.0}[rng.below(3)];
        const CostModel model{p, testutil::random_vector(rng, d, 0.2, 2.0)};
        const double alpha = rng.uniform(0.5, 3.0);

        const EffortProfile direct = best_response_lp(ch, model, alpha);
        const EffortProfile oracle =
            budget_bisection_oracle(zero_variance_belief(ch), model, alpha, 0.5, 1e-7);
        const double c_direct = cost(model, direct.e);
        const double c_oracle = cost(model, oracle.e);
        CHECK(std::fabs(c_direct - c_oracle) < 1e-6 * (1.0 + c_direct));
    }
}

TEST_CASE("l1 desirability check: strict ratio dominance") {
    const std::vector<bool> part = {true, false};
    CHECK(check_l1_desirability({2.0, 1.5}, {1.0, 1.0}, part));
    CHECK_FALSE(check_l1_desirability({1.5, 1.5}, {1.0, 1.0}, part));  // strict inequality
    // Empty undesirable set: true whenever some desirable contribution is positive.
    CHECK(check_l1_desirability({0.5, 0.2}, {1.0, 1.0}, {true, true}));
    CHECK_FALSE(check_l1_desirability({0.0, 0.0}, {1.0, 1.0}, {true, true}));
}

TEST_CASE("lp desirability check: partition norm inequality") {
    const std::vector<bool> part = {true, true, false};
    // p=2, c=1, beta=1/sqrt(2): reduces to ||z_D|| >= ||z_U||.
    const double beta = 1.0 / std::sqrt(2.0);
    CHECK(check_lp_desirability({1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, 2.0, part, beta));
    CHECK_FALSE(check_lp_desirability({0.5, 0.5, 1.0}, {1.0, 1.0, 1.0}, 2.0, part, beta));
    // Zero undesirable contribution passes every beta < 1.
    CHECK(check_lp_desirability({0.7, 0.1, 0.0}, {1.0, 1.0, 1.0}, 2.0, part, 0.999));
    // beta == 1 requires exactly zero undesirable contribution.
    CHECK(check_lp_desirability({0.7, 0.1, 0.0}, {1.0, 1.0, 1.0}, 2.0, part, 1.0));
    CHECK_FALSE(check_lp_desirability({0.7, 0.1, 0.01}, {1.0, 1.0, 1.0}, 2.0, part, 1.0));
}

TEST_CASE("desirability checks are sound for the solvers") {
    Rng rng(4004);
    int l1_hits = 0, lp_hits = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t d = 2 + rng.below(5);
        std::vector<bool> part(d);
        bool any_desirable = false;
        for (std::size_t f = 0; f < d; ++f) {
            part[f] = rng.uniform() < 0.5;
            any_desirable = any_desirable || part[f];
        }
        if (!any_desirable) part[0] = true;
        Vector ch = testutil::random_vector(rng, d, -2.0, 2.0);
        ch[rng.below(d)] += 2.0;
        const Vector weights = testutil::random_vector(rng, d, 0.2, 2.0);
        const double alpha = rng.uniform(0.2, 3.0);

        if (check_l1_desirability(ch, weights, part)) {
            ++l1_hits;
            const EffortProfile e = best_response_l1(ch, weights, alpha);
            CHECK(beta_of(e.e, part) == doctest::Approx(1.0));
        }
        const double p = std::vector<double>{1.5, 2.0, 3.0}[rng.below(3)];
        const double beta = rng.uniform(0.05, 0.95);
        if (check_lp_desirability(ch, weights, p, part, beta)) {
            ++lp_hits;
            const EffortProfile e = best_response_lp(ch, CostModel{p, weights}, alpha);
            CHECK(beta_of(e.e, part) >= beta - 1e-10);
        }
    }
    CHECK(l1_hits > 10);  // the property must actually fire
    CHECK(lp_hits > 10);
}

TEST_SUITE_END();
