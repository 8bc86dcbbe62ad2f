#include "dynpin/sim.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dynpin/errors.hpp"

namespace dynpin {

// ── Scenario ────────────────────────────────────────────────────────

void Scenario::validate() const {
    platform.validate();
    if (threads.empty()) throw std::invalid_argument("scenario: at least one thread is required");
    for (std::size_t i = 0; i < threads.size(); ++i) {
        try {
            threads[i].validate();
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("scenario thread " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    if (!(period_sec > 0.0) || !std::isfinite(period_sec)) throw std::invalid_argument("scenario: period_sec must be > 0");
    if (horizon_steps < 1) throw std::invalid_argument("scenario: horizon_steps must be >= 1");
    if (!(noise_cv >= 0.0) || !std::isfinite(noise_cv)) throw std::invalid_argument("scenario: noise_cv must be >= 0");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("scenario: gamma must be >= 0");
    if (!(speed_scale > 0.0) || !std::isfinite(speed_scale)) {
        throw std::invalid_argument("scenario: speed_scale must be > 0");
    }
    learner().validate();
}

GameSpec Scenario::game_for(std::span<const std::size_t> active) const {
    GameSpec game{platform, {}, gamma, speed_scale};
    game.demands.reserve(active.size());
    for (std::size_t t : active) game.demands.push_back(threads.at(t).demand);
    return game;
}

GameSpec Scenario::full_game() const {
    std::vector<std::size_t> all(threads.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return game_for(all);
}

// ── Trace ───────────────────────────────────────────────────────────

bool Trace::all_completed() const {
    return std::all_of(completion_step.begin(), completion_step.end(), [](const auto& s) { return s.has_value(); });
}

std::optional<double> Trace::completion_time(std::size_t thread) const {
    const auto& step = completion_step.at(thread);
    if (!step) return std::nullopt;
    return static_cast<double>(*step + 1) * period_sec;
}

double Trace::makespan() const {
    double latest = 0.0;
    for (std::size_t t = 0; t < completion_step.size(); ++t) {
        const auto time = completion_time(t);
        if (!time) throw std::invalid_argument("makespan: thread " + std::to_string(t + 1) + " never completed");
        latest = std::max(latest, *time);
    }
    return latest;
}

// ── Simulated backend ───────────────────────────────────────────────

SimulatedBackend::SimulatedBackend(const Scenario& scenario, RandomStream& noise)
    : scenario_(scenario), noise_(noise) {}

void SimulatedBackend::apply(std::span<const std::size_t> active, const AssignmentProfile& profile) {
    true_speeds_ = speeds(profile, scenario_.game_for(active));
}

std::vector<double> SimulatedBackend::measure() {
    std::vector<double> measured(true_speeds_.size());
    for (std::size_t i = 0; i < measured.size(); ++i) {
        const double eta = noise_.normal(1.0, scenario_.noise_cv);
        measured[i] = true_speeds_[i] * std::max(eta, 0.01);
    }
    return measured;
}

// ── Closed loop ─────────────────────────────────────────────────────

namespace {

// Placement source for the shared loop: either the learner or a baseline.
class Controller {
  public:
    virtual ~Controller() = default;
    /// Thread `thread` becomes active and is appended to the active set.
    virtual std::size_t admit(std::size_t thread, const std::vector<std::size_t>& active,
                              const AssignmentProfile& profile) = 0;
    /// Consumes the period's measurements; returns the common utility and
    /// writes the next placement.
    virtual double observe(const std::vector<std::size_t>& active, const AssignmentProfile& played,
                           std::span<const double> measured, AssignmentProfile& next) = 0;
    virtual std::vector<SimplexPoint> strategies(const AssignmentProfile& played) const = 0;
    virtual void retire(std::size_t position) = 0;
};

class LearningController final : public Controller {
  public:
    LearningController(const Scenario& scenario, RandomStream& rng) : scenario_(scenario), rng_(rng) {
        state_.config = scenario.learner();
    }

    std::size_t admit(std::size_t, const std::vector<std::size_t>&, const AssignmentProfile&) override {
        const std::size_t m = scenario_.platform.cpu_count();
        state_.nominal.push_back(SimplexPoint::uniform(m));
        SplitMix64 sub = rng_.split(state_.nominal.size() - 1);
        return sample_index(perturb(state_.nominal.back(), state_.config.lambda), sub);
    }

    double observe(const std::vector<std::size_t>& active, const AssignmentProfile& played,
                   std::span<const double> measured, AssignmentProfile& next) override {
        const GameSpec game = scenario_.game_for(active);
        check_game(game);
        RmStepResult result = rm_step(state_, game, played, measured, rng_);
        state_ = std::move(result.state);
        next = std::move(result.next);
        return result.utility;
    }

    std::vector<SimplexPoint> strategies(const AssignmentProfile&) const override { return state_.nominal; }

    void retire(std::size_t position) override { state_ = remove_agent(state_, position); }

  private:
    // validate_game once per distinct active demand multiset.
    void check_game(const GameSpec& game) {
        std::vector<double> key = game.demands;
        std::sort(key.begin(), key.end());
        if (validated_.contains(key)) return;
        const GameValidation v = validate_game(game);
        if (!v.ok) throw ConfigError("scenario game with demands " + describe(game.demands) + ": " + v.diagnostics);
        validated_.emplace(std::move(key), true);
    }

    static std::string describe(const std::vector<double>& demands) {
        std::string out = "[";
        for (std::size_t i = 0; i < demands.size(); ++i) {
            if (i) out += ", ";
            out += std::to_string(demands[i]);
        }
        return out + "]";
    }

    const Scenario& scenario_;
    RandomStream& rng_;
    StrategyState state_;
    std::map<std::vector<double>, bool> validated_;
};

class BaselineController final : public Controller {
  public:
    BaselineController(const Scenario& scenario, BaselinePolicy policy, RandomStream& rng)
        : scenario_(scenario), policy_(policy), rng_(rng) {}

    std::size_t admit(std::size_t thread, const std::vector<std::size_t>& active,
                      const AssignmentProfile& profile) override {
        const std::size_t m = scenario_.platform.cpu_count();
        switch (policy_) {
            case BaselinePolicy::StaticRandom: {
                SplitMix64 sub = rng_.split(thread);
                return sample_index(SimplexPoint::uniform(m), sub);
            }
            case BaselinePolicy::RoundRobin:
                return thread % m;
            case BaselinePolicy::GreedyLeastLoaded: {
                std::vector<double> resident(m, 0.0);
                for (std::size_t i = 0; i < profile.size(); ++i) {
                    resident[profile[i]] += scenario_.threads[active[i]].demand;
                }
                return static_cast<std::size_t>(std::min_element(resident.begin(), resident.end()) -
                                                resident.begin());
            }
        }
        throw std::logic_error("unknown baseline policy");
    }

    double observe(const std::vector<std::size_t>&, const AssignmentProfile& played, std::span<const double> measured,
                   AssignmentProfile& next) override {
        next = played;
        return objective_value(measured, scenario_.gamma) / scenario_.speed_scale;
    }

    std::vector<SimplexPoint> strategies(const AssignmentProfile& played) const override {
        std::vector<SimplexPoint> out;
        out.reserve(played.size());
        for (std::size_t cpu : played.cpu_of) out.push_back(SimplexPoint::vertex(scenario_.platform.cpu_count(), cpu));
        return out;
    }

    void retire(std::size_t) override {}

  private:
    const Scenario& scenario_;
    BaselinePolicy policy_;
    RandomStream& rng_;
};

Trace simulate(const Scenario& scenario, Controller& controller, RandomStream& noise) {
    scenario.validate();
    const std::size_t n_threads = scenario.threads.size();

    Trace trace;
    trace.period_sec = scenario.period_sec;
    trace.completion_step.assign(n_threads, std::nullopt);

    SimulatedBackend backend(scenario, noise);
    std::vector<double> work(n_threads, 0.0);
    std::vector<std::size_t> active;
    AssignmentProfile profile;
    std::size_t pending = n_threads;

    for (std::size_t k = 0; k < scenario.horizon_steps; ++k) {
        for (std::size_t t = 0; t < n_threads; ++t) {
            if (scenario.threads[t].arrival_step != k) continue;
            const std::size_t cpu = controller.admit(t, active, profile);
            active.push_back(t);
            profile.cpu_of.push_back(cpu);
            --pending;
        }

        StepRecord record;
        record.step = k;
        record.active = active;
        record.profile = profile;
        if (active.empty()) {
            if (pending == 0) break;
            trace.steps.push_back(std::move(record));
            continue;
        }

        backend.apply(active, profile);
        record.true_speeds = backend.true_speeds();
        record.measured_speeds = backend.measure();

        AssignmentProfile next;
        record.utility = controller.observe(active, profile, record.measured_speeds, next);
        record.strategies = controller.strategies(profile);

        for (std::size_t i = 0; i < active.size(); ++i) work[active[i]] += record.true_speeds[i] * scenario.period_sec;

        for (std::size_t i = active.size(); i-- > 0;) {
            const std::size_t t = active[i];
            if (work[t] < scenario.threads[t].total_work) continue;
            trace.completion_step[t] = k;
            controller.retire(i);
            active.erase(active.begin() + static_cast<std::ptrdiff_t>(i));
            next.cpu_of.erase(next.cpu_of.begin() + static_cast<std::ptrdiff_t>(i));
        }
        trace.steps.push_back(std::move(record));
        profile = std::move(next);

        if (active.empty() && pending == 0) break;
    }
    return trace;
}

}  // namespace

Trace run(const Scenario& scenario) {
    RandomStream root(scenario.seed);
    RandomStream select(root());
    RandomStream noise(root());
    LearningController controller(scenario, select);
    return simulate(scenario, controller, noise);
}

std::string_view to_string(BaselinePolicy policy) {
    switch (policy) {
        case BaselinePolicy::StaticRandom: return "static-random";
        case BaselinePolicy::RoundRobin: return "round-robin";
        case BaselinePolicy::GreedyLeastLoaded: return "greedy-least-loaded";
    }
    return "unknown";
}

std::optional<BaselinePolicy> parse_baseline(std::string_view name) {
    for (auto policy : {BaselinePolicy::StaticRandom, BaselinePolicy::RoundRobin, BaselinePolicy::GreedyLeastLoaded}) {
        if (to_string(policy) == name) return policy;
    }
    return std::nullopt;
}

Trace run_baseline(const Scenario& scenario, BaselinePolicy policy) {
    RandomStream root(scenario.seed);
    RandomStream select(root());
    RandomStream noise(root());
    BaselineController controller(scenario, policy, select);
    return simulate(scenario, controller, noise);
}

}  // namespace dynpin
