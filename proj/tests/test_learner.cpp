#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "dynpin/errors.hpp"
#include "dynpin/learner.hpp"

using namespace dynpin;

namespace {

GameSpec idle_unit_cpus(std::size_t m, std::vector<double> demands, double gamma = 0.0) {
    return GameSpec{Platform{std::vector<double>(m, 1.0), std::vector<double>(m, 0.0)}, std::move(demands), gamma, 1.0};
}

}  // namespace

// ── init_state ──────────────────────────────────────────────────────

TEST(InitState, UniformStrategies) {
    auto s = init_state(2, 3, {0.1, 0.0});
    ASSERT_EQ(s.agent_count(), 2u);
    for (const auto& x : s.nominal) {
        for (double p : x.weights()) EXPECT_EQ(p, 1.0 / 3.0);
    }
    EXPECT_EQ(s.step_count, 0u);
}

TEST(InitState, Degenerate) {
    auto s = init_state(1, 1, {0.1, 0.0});
    EXPECT_EQ(s.nominal[0][0], 1.0);
}

TEST(InitState, PerturbedUniformIsUniform) {
    auto s = init_state(4, 3, {0.005, 0.005});
    for (const auto& x : s.nominal) {
        auto sigma = perturb(x, s.config.lambda);
        for (double p : sigma.weights()) EXPECT_NEAR(p, 1.0 / 3.0, 1e-15);
    }
}

TEST(InitState, RejectsEmpty) {
    EXPECT_THROW(init_state(0, 3, {}), std::invalid_argument);
    EXPECT_THROW(init_state(3, 0, {}), std::invalid_argument);
    EXPECT_THROW(init_state(1, 1, {0.0, 0.0}), std::invalid_argument);
    EXPECT_THROW(init_state(1, 1, {0.1, 1.0}), std::invalid_argument);
}

// ── select_actions ──────────────────────────────────────────────────

TEST(SelectActions, VerticesWithoutPerturbation) {
    StrategyState s{{SimplexPoint::vertex(3, 2), SimplexPoint::vertex(3, 0), SimplexPoint::vertex(3, 1)}, {0.1, 0.0}, 0};
    RandomStream rng(1);
    for (int k = 0; k < 200; ++k) {
        EXPECT_EQ(select_actions(s, rng), (AssignmentProfile{{2, 0, 1}}));
    }
}

TEST(SelectActions, FullMutationIsUniform) {
    // lambda = 1 is outside LearnerConfig's range but valid for the selection rule.
    StrategyState s{{SimplexPoint::vertex(3, 0)}, {0.1, 1.0}, 0};
    RandomStream rng(2);
    std::vector<int> counts(3, 0);
    for (int k = 0; k < 60'000; ++k) ++counts[select_actions(s, rng)[0]];
    for (int c : counts) EXPECT_NEAR(c / 60'000.0, 1.0 / 3.0, 0.01);
}

TEST(SelectActions, SmallPerturbationFrequency) {
    // Each non-first action has probability lambda/m; together
    // lambda (m-1)/m = 0.00333. Over 1e5 draws the binomial sd is 1.8e-4,
    // so +-0.001 is a 5.5 sigma band.
    const double lambda = 0.005;
    StrategyState s{std::vector<SimplexPoint>(4, SimplexPoint::vertex(3, 0)), {0.1, lambda}, 0};
    RandomStream rng(3);
    int off = 0, total = 0;
    for (int k = 0; k < 25'000; ++k) {
        for (std::size_t cpu : select_actions(s, rng).cpu_of) {
            off += cpu != 0;
            ++total;
        }
    }
    EXPECT_EQ(total, 100'000);
    EXPECT_NEAR(off / static_cast<double>(total), lambda * 2.0 / 3.0, 0.001);
}

TEST(SelectActions, AgentsDrawIndependently) {
    // Two uniform agents on two actions: all four joint outcomes near 1/4.
    StrategyState s = init_state(2, 2, {0.1, 0.0});
    RandomStream rng(4);
    int same = 0;
    const int draws = 40'000;
    for (int k = 0; k < draws; ++k) {
        const auto a = select_actions(s, rng);
        same += a[0] == a[1];
    }
    EXPECT_NEAR(same / static_cast<double>(draws), 0.5, 0.01);
}

// ── update_nominal ──────────────────────────────────────────────────

TEST(UpdateNominal, DirectEvaluation) {
    StrategyState s = init_state(1, 2, {0.1, 0.0});
    const std::vector<double> u{0.8};
    auto next = update_nominal(s, AssignmentProfile{{0}}, u);
    EXPECT_NEAR(next.nominal[0][0], 0.54, 1e-15);
    EXPECT_NEAR(next.nominal[0][1], 0.46, 1e-15);
    EXPECT_EQ(next.step_count, 1u);
}

TEST(UpdateNominal, VanishingUtilityLeavesStateUnchanged) {
    StrategyState s{{SimplexPoint({0.25, 0.75})}, {0.1, 0.0}, 0};
    const std::vector<double> u{1e-300};
    auto next = update_nominal(s, AssignmentProfile{{1}}, u);
    EXPECT_EQ(next.nominal, s.nominal);
}

TEST(UpdateNominal, VertexAbsorbsItsOwnAction) {
    for (double eps : {0.01, 0.5, 1.0}) {
        for (double u : {0.1, 1.0}) {
            StrategyState s{{SimplexPoint::vertex(3, 0)}, {eps, 0.0}, 0};
            auto next = update_nominal(s, AssignmentProfile{{0}}, std::vector<double>{u});
            EXPECT_EQ(next.nominal[0], SimplexPoint::vertex(3, 0));
        }
    }
}

TEST(UpdateNominal, RejectsUtilityOutsideUnitInterval) {
    StrategyState s = init_state(1, 2, {0.1, 0.0});
    EXPECT_THROW(update_nominal(s, AssignmentProfile{{0}}, std::vector<double>{0.0}), std::invalid_argument);
    EXPECT_THROW(update_nominal(s, AssignmentProfile{{0}}, std::vector<double>{1.01}), std::invalid_argument);
    EXPECT_THROW(update_nominal(s, AssignmentProfile{{0, 1}}, std::vector<double>{0.5}), std::invalid_argument);
}

TEST(UpdateNominal, ProjectionInactiveAndChosenActionNeverDecreases) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 20'000; ++trial) {
        const std::size_t m = 1 + trial % 6;
        std::vector<double> w(m);
        double total = 0.0;
        for (double& x : w) total += (x = -std::log(1.0 - unit(rng)));
        for (double& x : w) x /= total;
        const SimplexPoint x = project_to_simplex(w);
        const std::size_t a = rng() % m;
        const double eps = 1e-6 + unit(rng) * (1.0 - 1e-6);
        const double u = 1e-6 + unit(rng) * (1.0 - 1e-6);

        const auto raw = reinforce(x, a, eps * u);
        StrategyState s{{x}, {eps, 0.0}, 0};
        const auto next = update_nominal(s, AssignmentProfile{{a}}, std::vector<double>{u});
        for (std::size_t j = 0; j < m; ++j) EXPECT_LE(std::abs(next.nominal[0][j] - raw[j]), 1e-12);
        EXPECT_GE(next.nominal[0][a], x[a]);
    }
}

TEST(UpdateNominal, Deterministic) {
    StrategyState s{{SimplexPoint({0.2, 0.3, 0.5}), SimplexPoint({0.6, 0.4, 0.0})}, {0.05, 0.01}, 3};
    const AssignmentProfile a{{2, 1}};
    const std::vector<double> u{0.7, 0.7};
    EXPECT_EQ(update_nominal(s, a, u), update_nominal(s, a, u));
}

// ── arrivals / departures ───────────────────────────────────────────

TEST(AgentSet, ChangesPreserveOtherStrategies) {
    StrategyState s{{SimplexPoint({0.2, 0.8}), SimplexPoint({0.6, 0.4}), SimplexPoint({1.0, 0.0})}, {0.05, 0.01}, 9};
    auto grown = add_agent(s);
    ASSERT_EQ(grown.agent_count(), 4u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(grown.nominal[i], s.nominal[i]);
    EXPECT_EQ(grown.nominal[3], SimplexPoint::uniform(2));

    auto shrunk = remove_agent(s, 1);
    ASSERT_EQ(shrunk.agent_count(), 2u);
    EXPECT_EQ(shrunk.nominal[0], s.nominal[0]);
    EXPECT_EQ(shrunk.nominal[1], s.nominal[2]);
    EXPECT_THROW(remove_agent(s, 3), std::invalid_argument);
}

// ── rm_step ─────────────────────────────────────────────────────────

TEST(RmStep, NoChoiceWithOneCpu) {
    const auto game = idle_unit_cpus(1, {1.0});
    StrategyState s = init_state(1, 1, {0.3, 0.2});
    RandomStream rng(5);
    AssignmentProfile played{{0}};
    for (int k = 0; k < 50; ++k) {
        auto r = rm_step(s, game, played, std::vector<double>{1.0}, rng);
        EXPECT_EQ(r.next, played);
        EXPECT_EQ(r.state.nominal[0][0], 1.0);
        s = r.state;
    }
}

TEST(RmStep, CommonUtilityFromMeasurements) {
    const auto game = idle_unit_cpus(2, {1.0, 1.0}, 0.04);
    StrategyState s = init_state(2, 2, {0.1, 0.0});
    RandomStream rng(6);
    auto r = rm_step(s, game, AssignmentProfile{{0, 0}}, std::vector<double>{1.0, 0.5}, rng);
    EXPECT_NEAR(r.utility, 0.7475, 1e-15);
    // Both agents reinforced by the same amount.
    EXPECT_NEAR(r.state.nominal[0][0], 0.5 + 0.1 * 0.7475 * 0.5, 1e-15);
    EXPECT_EQ(r.state.nominal[0], r.state.nominal[1]);
}

TEST(RmStep, MeasurementErrors) {
    const auto game = idle_unit_cpus(2, {1.0, 1.0});
    StrategyState s = init_state(2, 2, {0.1, 0.0});
    RandomStream rng(7);
    EXPECT_THROW(rm_step(s, game, AssignmentProfile{{0, 1}}, std::vector<double>{1.0, 0.0}, rng), MeasurementError);
    EXPECT_THROW(rm_step(s, game, AssignmentProfile{{0, 1}}, std::vector<double>{-1.0, 1.0}, rng), MeasurementError);
    EXPECT_THROW(rm_step(s, game, AssignmentProfile{{0, 1}}, std::vector<double>{NAN, 1.0}, rng), MeasurementError);
}

TEST(RmStep, NoisyUtilityAboveOneIsSaturated) {
    const auto game = idle_unit_cpus(1, {1.0});
    StrategyState s = init_state(1, 2, {0.5, 0.0});
    RandomStream rng(8);
    auto r = rm_step(s, game, AssignmentProfile{{0}}, std::vector<double>{1.2}, rng);
    EXPECT_EQ(r.utility, 1.0);
    EXPECT_NEAR(r.state.nominal[0][0], 0.75, 1e-15);
}

TEST(RmStep, TwoIdenticalThreadsAntiCoordinate) {
    // Two unit-demand threads, two idle unit CPUs: the Nash profiles are the
    // two split placements. 100 seeded runs of 500 steps.
    const auto game = idle_unit_cpus(2, {1.0, 1.0});
    int converged = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        RandomStream rng(seed);
        StrategyState s = init_state(2, 2, {0.1, 0.01});
        AssignmentProfile played = select_actions(s, rng);
        for (int k = 0; k < 500; ++k) {
            auto v = speeds(played, game);
            auto r = rm_step(s, game, played, v, rng);
            s = std::move(r.state);
            played = std::move(r.next);
        }
        const std::size_t a = s.nominal[0].argmax();
        const std::vector<std::size_t> split{a, 1 - a};
        if (vertex_distance(s.nominal, split) < 0.05) ++converged;
    }
    EXPECT_GE(converged, 90);
}
