#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "dynpin/errors.hpp"
#include "dynpin/oracle.hpp"
#include "oracles.hpp"

using namespace dynpin;

namespace {

GameSpec idle_unit_cpus(std::size_t m, std::vector<double> demands, double gamma = 0.0) {
    return GameSpec{Platform{std::vector<double>(m, 1.0), std::vector<double>(m, 0.0)}, std::move(demands), gamma, 1.0};
}

GameSpec experiment1() { return idle_unit_cpus(3, {1.0, 1.0, 0.5, 1.0}, 0.04); }

AssignmentProfile P(std::vector<std::size_t> one_based) {
    for (auto& c : one_based) --c;
    return AssignmentProfile{std::move(one_based)};
}

std::vector<SimplexPoint> at_vertices(const AssignmentProfile& a, std::size_t m) {
    std::vector<SimplexPoint> x;
    for (std::size_t cpu : a.cpu_of) x.push_back(SimplexPoint::vertex(m, cpu));
    return x;
}

// Brute-force Nash check straight from the definition, using the test-side
// speed model.
bool nash_by_definition(const AssignmentProfile& a, const GameSpec& g, double tol) {
    std::vector<double> avail;
    for (std::size_t j = 0; j < g.cpu_count(); ++j) avail.push_back(g.platform.available(j));
    auto f = [&](const std::vector<std::size_t>& cpu_of) {
        return reference::mean_minus_variance(reference::shared_speeds(cpu_of, g.demands, avail), g.gamma) / g.speed_scale;
    };
    const double here = f(a.cpu_of);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < g.cpu_count(); ++j) {
            auto dev = a.cpu_of;
            dev[i] = j;
            if (f(dev) > here + tol) return false;
        }
    }
    return true;
}

}  // namespace

// ── enumerate_pure_nash ─────────────────────────────────────────────

TEST(EnumeratePureNash, AntiCoordination) {
    const auto r = enumerate_pure_nash(idle_unit_cpus(2, {1.0, 1.0}));
    EXPECT_EQ(r.pure_nash, (std::vector<AssignmentProfile>{P({1, 2}), P({2, 1})}));
    EXPECT_EQ(r.efficient, r.pure_nash);
    EXPECT_EQ(r.f(P({1, 2})), 1.0);
    EXPECT_EQ(r.f(P({1, 1})), 0.5);
    EXPECT_FALSE(r.is_nash(P({2, 2})));
}

TEST(EnumeratePureNash, SingleAgentNashIsArgmax) {
    GameSpec g{Platform{{1.0, 2.0, 2.0}, {0.0, 0.5, 0.0}}, {1.5}, 0.0, 2.0};
    const auto r = enumerate_pure_nash(g);
    // Speeds: min(1.5, 1) = 1, min(1.5, 1) = 1, min(1.5, 2) = 1.5.
    EXPECT_EQ(r.pure_nash, (std::vector<AssignmentProfile>{P({3})}));
    EXPECT_EQ(r.efficient, r.pure_nash);

    GameSpec tie{Platform{{1.0, 1.0}, {0.0, 0.0}}, {0.5}, 0.0, 1.0};
    EXPECT_EQ(enumerate_pure_nash(tie).pure_nash.size(), 2u);
}

TEST(EnumeratePureNash, ExperimentOneEfficientPlacements) {
    const auto r = enumerate_pure_nash(experiment1());
    // 3! placements of the unit threads times 3 choices for the half thread.
    EXPECT_EQ(r.efficient.size(), 18u);
    for (const auto& a : r.efficient) {
        const std::set<std::size_t> unit{a[0], a[1], a[3]};
        EXPECT_EQ(unit.size(), 3u) << to_string(a);
        EXPECT_TRUE(r.is_nash(a));
    }
    for (std::uint64_t code = 0; code < 81; ++code) {
        const auto a = profile_from_code(code, 4, 3);
        EXPECT_EQ(r.is_nash(a), nash_by_definition(a, experiment1(), r.tolerance)) << to_string(a);
    }
}

TEST(EnumeratePureNash, TooLargeIsSizeError) {
    EXPECT_THROW(enumerate_pure_nash(idle_unit_cpus(4, std::vector<double>(11, 1.0))), SizeError);
}

TEST(EnumeratePureNash, EfficientSubsetOfNashOnRandomGames) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double gammas[] = {0.0, 0.02, 0.04};
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng() % 4, m = 1 + rng() % 3;
        GameSpec g;
        for (std::size_t j = 0; j < m; ++j) {
            g.platform.capacities.push_back(1.0);
            g.platform.loads.push_back(0.5 * unit(rng));
        }
        for (std::size_t i = 0; i < n; ++i) g.demands.push_back(0.25 + 0.75 * unit(rng));
        g.gamma = gammas[rng() % 3];
        const auto r = enumerate_pure_nash(g);
        EXPECT_FALSE(r.efficient.empty());
        for (const auto& a : r.efficient) EXPECT_TRUE(r.is_nash(a)) << "trial " << trial << " " << to_string(a);
    }
}

TEST(EnumeratePureNash, InvariantUnderThreadRelabeling) {
    GameSpec g = idle_unit_cpus(3, {0.9, 0.3, 0.6, 0.45}, 0.02);
    const std::vector<std::size_t> perm{2, 0, 3, 1};  // new thread i is old thread perm[i]
    GameSpec h = g;
    for (std::size_t i = 0; i < 4; ++i) h.demands[i] = g.demands[perm[i]];

    const auto rg = enumerate_pure_nash(g);
    const auto rh = enumerate_pure_nash(h);
    std::vector<AssignmentProfile> mapped;
    for (const auto& a : rg.pure_nash) {
        AssignmentProfile b{std::vector<std::size_t>(4)};
        for (std::size_t i = 0; i < 4; ++i) b.cpu_of[i] = a[perm[i]];
        mapped.push_back(b);
    }
    std::sort(mapped.begin(), mapped.end());
    EXPECT_EQ(mapped, rh.pure_nash);
}

// ── expected_payoff_vector ──────────────────────────────────────────

TEST(ExpectedPayoff, OpponentsAtVertices) {
    const auto g = experiment1();
    const auto a = P({1, 3, 1, 2});
    auto sigma = at_vertices(a, 3);
    const auto payoff = expected_payoff_vector(sigma, g, 2);
    for (std::size_t j = 0; j < 3; ++j) {
        auto dev = a;
        dev.cpu_of[2] = j;
        EXPECT_EQ(payoff[j], profile_objective(dev, g));
    }
}

TEST(ExpectedPayoff, SingleAgent) {
    GameSpec g{Platform{{1.0, 2.0}, {0.0, 0.0}}, {1.5}, 0.0, 2.0};
    std::vector<SimplexPoint> sigma{SimplexPoint({0.3, 0.7})};
    const auto payoff = expected_payoff_vector(sigma, g, 0);
    EXPECT_EQ(payoff[0], 1.0 / 2.0);
    EXPECT_EQ(payoff[1], 1.5 / 2.0);
}

TEST(ExpectedPayoff, UniformOpponentAveragesTwoTerms) {
    // u(j, 1) and u(j, 2) are 0.5 (shared) and 1 (split): each entry is 0.75.
    const auto g = idle_unit_cpus(2, {1.0, 1.0});
    std::vector<SimplexPoint> sigma{SimplexPoint::uniform(2), SimplexPoint::uniform(2)};
    const auto payoff = expected_payoff_vector(sigma, g, 0);
    EXPECT_NEAR(payoff[0], 0.75, 1e-15);
    EXPECT_NEAR(payoff[1], 0.75, 1e-15);

    // Monte-Carlo cross-check of entry 0.
    std::mt19937_64 rng(3);
    double acc = 0.0;
    const int draws = 200'000;
    for (int k = 0; k < draws; ++k) acc += profile_objective(AssignmentProfile{{0, rng() % 2}}, g);
    EXPECT_NEAR(acc / draws, payoff[0], 0.005);
}

// ── mean_field_drift ────────────────────────────────────────────────

TEST(MeanFieldDrift, ZeroAtPureProfilesWithoutPerturbation) {
    const auto g = experiment1();
    for (std::uint64_t code = 0; code < 81; ++code) {
        const auto a = profile_from_code(code, 4, 3);
        const auto d = mean_field_drift(at_vertices(a, 3), g, 0.0);
        EXPECT_EQ(d.sup_norm, 0.0) << to_string(a);
        EXPECT_TRUE(is_stationary(at_vertices(a, 3), g, 0.0, 1e-12));
    }
}

TEST(MeanFieldDrift, SingleAgentTwoActions) {
    // drift = x1 x2 (u(1) - u(2)) (1, -1) with x = (1/2, 1/2).
    GameSpec g{Platform{{1.0, 1.0}, {0.0, 0.6}}, {1.0}, 0.0, 1.0};
    const double u1 = 1.0, u2 = 0.4;
    std::vector<SimplexPoint> x{SimplexPoint::uniform(2)};
    const auto d = mean_field_drift(x, g, 0.0);
    EXPECT_NEAR(d.drift[0][0], 0.25 * (u1 - u2), 1e-15);
    EXPECT_NEAR(d.drift[0][1], -0.25 * (u1 - u2), 1e-15);
    EXPECT_NEAR(d.sup_norm, 0.15, 1e-15);
}

TEST(MeanFieldDrift, PerturbedEfficientProfileIsNearlyStationary) {
    const auto g = experiment1();
    const auto r = enumerate_pure_nash(g);
    const double lambda = 0.005;
    const double u_max = r.f_max / g.speed_scale;
    for (const auto& a : r.efficient) {
        const auto d = mean_field_drift(at_vertices(a, 3), g, lambda);
        EXPECT_LE(d.sup_norm, 2.0 * lambda * u_max) << to_string(a);
        EXPECT_TRUE(is_stationary(at_vertices(a, 3), g, lambda, 3.0 * lambda * u_max));
    }
}

TEST(MeanFieldDrift, InteriorPointOfAntiCoordinationIsNotStationary) {
    // Agent 2 uniform, agent 1 at (0.8, 0.2): E[u | a1 = j] = 0.75 for both j,
    // so agent 1 has no drift, but agent 2 is pushed away from agent 1.
    const auto g = idle_unit_cpus(2, {1.0, 1.0});
    std::vector<SimplexPoint> x{SimplexPoint({0.8, 0.2}), SimplexPoint::uniform(2)};
    const auto d = mean_field_drift(x, g, 0.0);
    // E[u | a2 = 1] = 0.8 * 0.5 + 0.2 * 1 = 0.6; E[u | a2 = 2] = 0.9; drift = 0.25 * (0.6 - 0.9).
    EXPECT_NEAR(d.drift[1][0], -0.075, 1e-15);
    EXPECT_NEAR(d.drift[0][0], 0.0, 1e-15);
    EXPECT_FALSE(is_stationary(x, g, 0.0, 1e-6));
}

TEST(MeanFieldDrift, TangentToSimplex) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto g = experiment1();
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<SimplexPoint> x;
        for (int i = 0; i < 4; ++i) {
            std::vector<double> w{unit(rng), unit(rng), unit(rng)};
            const double s = w[0] + w[1] + w[2];
            for (double& v : w) v /= s;
            x.push_back(project_to_simplex(w));
        }
        const auto d = mean_field_drift(x, g, 0.01);
        for (const auto& row : d.drift) EXPECT_NEAR(row[0] + row[1] + row[2], 0.0, 1e-12);
    }
}

TEST(MeanFieldDrift, RejectsDimensionMismatch) {
    const auto g = experiment1();
    std::vector<SimplexPoint> x(4, SimplexPoint::uniform(2));
    EXPECT_THROW(mean_field_drift(x, g, 0.0), std::invalid_argument);
    EXPECT_THROW(mean_field_drift(std::vector<SimplexPoint>(3, SimplexPoint::uniform(3)), g, 0.0),
                 std::invalid_argument);
}
