#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ssa/annealers.hpp"
#include "ssa/bench_io.hpp"

using namespace ssa;

namespace {

AnnealParams fixed_params(double n_rnd, double i0, std::size_t cycles = 2) {
    AnnealParams p;
    p.n_rnd = n_rnd;
    p.i0min = i0;
    p.i0max = i0;
    p.beta = 1.0;
    p.cycles = cycles;
    return p;
}

SsaState make_state(std::vector<int> sigma, std::vector<double> is, double i0) {
    SsaState s;
    s.sigma = SpinState(std::span<const int>(sigma));
    s.is = std::move(is);
    s.i0 = i0;
    return s;
}

struct ZeroNoise {
    int operator()(std::size_t, std::uint64_t) const { return 1; }
};

void expect_state_invariants(const SsaState& s, double i0_used, double alpha) {
    for (std::size_t i = 0; i < s.is.size(); ++i) {
        ASSERT_GE(s.is[i], -i0_used) << "spin " << i << " cycle " << s.t;
        ASSERT_LE(s.is[i], i0_used - alpha) << "spin " << i << " cycle " << s.t;
        ASSERT_EQ(s.sigma[i] == 1, s.is[i] >= 0.0) << "spin " << i << " cycle " << s.t;
    }
}

}  // namespace

TEST(InitState, DeterministicAndCoherent) {
    const IsingModel m = oracle::random_model(50, 0.2, 1);
    const AnnealParams p = determine_params(m, 100, NoiseMode::kShared);
    const SsaState a = init_state(m, p, 99);
    const SsaState b = init_state(m, p, 99);
    EXPECT_EQ(a.sigma, b.sigma);
    EXPECT_EQ(a.is, b.is);
    EXPECT_EQ(a.i0, p.i0min);
    EXPECT_EQ(a.t, 0u);
    for (std::size_t i = 0; i < 50; ++i) {
        EXPECT_GE(a.is[i], -p.i0min);
        EXPECT_LT(a.is[i], p.i0min);
        EXPECT_EQ(a.sigma[i] == 1, a.is[i] >= 0.0);
    }
    EXPECT_NE(init_state(m, p, 100).is, a.is);
}

TEST(InitState, Unbiased) {
    const IsingModel m = maxcut_to_ising({10000, {{0, 1, 1.0}}});
    const SsaState s = init_state(m, fixed_params(0.0, 3.0), 5);
    std::size_t plus = 0;
    for (std::size_t i = 0; i < 10000; ++i) plus += s.sigma[i] == 1;
    EXPECT_GE(plus, 4700u);
    EXPECT_LE(plus, 5300u);
}

TEST(SsaStep, BiasDriven) {
    const IsingModel m(1, {5.0}, {});
    SsaState s = make_state({-1}, {0.0}, 10.0);
    ssa_step(m, s, fixed_params(0.0, 10.0), ZeroNoise{});
    EXPECT_EQ(s.is[0], 5.0);
    EXPECT_EQ(s.sigma[0], 1);
    EXPECT_EQ(s.t, 1u);
}

TEST(SsaStep, ClampBranches) {
    const IsingModel up(1, {5.0}, {});
    SsaState s = make_state({1}, {8.0}, 10.0);
    ssa_step(up, s, fixed_params(0.0, 10.0), ZeroNoise{});
    EXPECT_EQ(s.is[0], 10.0);
    EXPECT_EQ(s.sigma[0], 1);

    const IsingModel down(1, {-5.0}, {});
    s = make_state({-1}, {-8.0}, 10.0);
    ssa_step(down, s, fixed_params(0.0, 10.0), ZeroNoise{});
    EXPECT_EQ(s.is[0], -10.0);
    EXPECT_EQ(s.sigma[0], -1);
}

TEST(SsaStep, AlphaLowersTopClamp) {
    const IsingModel up(1, {5.0}, {});
    SsaState s = make_state({1}, {8.0}, 10.0);
    AnnealParams p = fixed_params(0.0, 10.0);
    p.alpha = 1.0;
    ssa_step(up, s, p, ZeroNoise{});
    EXPECT_EQ(s.is[0], 9.0);
}

TEST(SsaStep, FerromagneticPairIsAbsorbing) {
    const Coupling c[] = {{0, 1, 1.0}};
    const IsingModel m(2, {0.0, 0.0}, c);
    SsaState s = make_state({1, 1}, {0.5, 0.5}, 100.0);
    const AnnealParams p = fixed_params(0.0, 100.0);
    // Hand simulation: I_i = +1 every cycle, Is = 1.5, 2.5, 3.5.
    for (int k = 0; k < 3; ++k) {
        ssa_step(m, s, p, ZeroNoise{});
        EXPECT_EQ(s.sigma, (SpinState{1, 1}));
        EXPECT_EQ(s.is[0], 1.5 + k);
        EXPECT_EQ(s.is[1], 1.5 + k);
    }
}

TEST(SsaStep, ScheduleDivision) {
    const IsingModel m(1, {0.0}, {});
    AnnealParams p = fixed_params(0.0, 2.0);
    p.i0max = 4.0;
    p.beta = 0.5;
    SsaState s = make_state({1}, {0.0}, 2.0);
    ssa_step(m, s, p, ZeroNoise{});
    EXPECT_EQ(s.i0, 4.0);
}

TEST(SsaStep, UpdateOrderDoesNotMatter) {
    const IsingModel m = oracle::random_model(30, 0.4, 12);
    const AnnealParams p = determine_params(m, 50, NoiseMode::kPerSpin);
    const rng::SpinNoise noise(4);
    std::mt19937_64 gen(1);
    std::vector<std::size_t> order(30);
    std::iota(order.begin(), order.end(), std::size_t{0});
    SsaState a = init_state(m, p, 3);
    SsaState b = a;
    for (int cycle = 0; cycle < 50; ++cycle) {
        ssa_step(m, a, p, noise);
        std::shuffle(order.begin(), order.end(), gen);
        ssa_step(m, b, p, noise, std::span<const std::size_t>(order));
        ASSERT_EQ(a.sigma, b.sigma) << cycle;
        ASSERT_EQ(a.is, b.is) << cycle;
    }
}

TEST(SsaStep, ClampAndSignInvariantsEveryCycle) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const WeightedGraph g = oracle::random_graph(100, 0.1, {1.0, -1.0, 2.0}, seed);
        const IsingModel m = maxcut_to_ising(g);
        const AnnealParams p = determine_params(m, 10000, seed == 0 ? NoiseMode::kShared : NoiseMode::kPerSpin);
        const rng::SpinNoise noise(seed);
        SsaState s = init_state(m, p, seed);
        for (std::size_t c = 0; c < p.cycles; ++c) {
            const double i0 = s.i0;
            ssa_step(m, s, p, noise);
            expect_state_invariants(s, i0, p.alpha);
        }
    }
}

TEST(SsaEngine, MatchesReferenceStepOnIntegerWeights) {
    const WeightedGraph g = oracle::random_graph(60, 0.3, {1.0, -1.0}, 7);
    const IsingModel m = maxcut_to_ising(g);
    const AnnealParams p = determine_params(m, 300, NoiseMode::kPerSpin);
    SsaEngine engine(m, p, 21);
    SsaState ref = init_state(m, p, 21);
    const rng::SpinNoise noise(21);
    for (std::size_t c = 0; c < p.cycles; ++c) {
        engine.step();
        ssa_step(m, ref, p, noise);
        ASSERT_EQ(engine.state().sigma, ref.sigma) << c;
        ASSERT_EQ(engine.state().is, ref.is) << c;
        ASSERT_EQ(engine.state().i0, ref.i0) << c;
        ASSERT_EQ(engine.energy(), energy(m, ref.sigma)) << c;
    }
}

TEST(SsaEngine, CachedFieldsStayAccurateOnRealWeights) {
    const IsingModel m = oracle::random_model(80, 0.3, 9);
    const AnnealParams p = determine_params(m, 500, NoiseMode::kShared);
    SsaEngine engine(m, p, 2);
    for (std::size_t c = 0; c < p.cycles; ++c) {
        engine.step();
        for (std::size_t i = 0; i < m.size(); ++i)
            ASSERT_NEAR(engine.fields()[i], local_field(m, engine.state().sigma, i), 1e-9);
    }
}

TEST(RunSsa, ScheduleTraceEndpoints) {
    const IsingModel m = maxcut_to_ising(oracle::random_graph(40, 0.3, {1.0}, 3));
    const AnnealParams p = determine_params(m, 1000, NoiseMode::kShared);
    const RunResult r = run_ssa(m, p, 5, true);
    ASSERT_EQ(r.trace.size(), 1000u);
    EXPECT_EQ(r.cycles_run, 1000u);
    EXPECT_EQ(r.trace.front().control, p.i0min);
    EXPECT_NEAR(r.trace.back().control / p.i0max, 1.0, 1e-9);
    for (std::size_t k = 1; k < r.trace.size(); ++k) EXPECT_GT(r.trace[k].control, r.trace[k - 1].control);
    EXPECT_EQ(r.trace.back().energy, r.final_energy);
    EXPECT_EQ(r.final_energy, energy(m, r.final_sigma));
    EXPECT_EQ(r.seed, 5u);
}

TEST(RunSsa, Deterministic) {
    const IsingModel m = maxcut_to_ising(gen_complete_pm1(50, 0.5, 1));
    const AnnealParams p = determine_params(m, 200, NoiseMode::kPerSpin);
    const RunResult a = run_ssa(m, p, 77, true);
    const RunResult b = run_ssa(m, p, 77, true);
    EXPECT_EQ(a.final_sigma, b.final_sigma);
    EXPECT_EQ(a.final_energy, b.final_energy);
    ASSERT_EQ(a.trace.size(), b.trace.size());
    for (std::size_t k = 0; k < a.trace.size(); ++k) EXPECT_EQ(a.trace[k].energy, b.trace[k].energy);
}

TEST(RunSsa, ThreadCountInvariant) {
    // Large enough to take the multi-threaded paths.
    const IsingModel m = oracle::random_model(3000, 0.004, 31);
    const AnnealParams p = determine_params(m, 150, NoiseMode::kShared);
    const RunResult one = run_ssa(m, p, 8, true, 1);
    for (unsigned threads : {4u, 8u}) {
        const RunResult many = run_ssa(m, p, 8, true, threads);
        EXPECT_EQ(one.final_sigma, many.final_sigma) << threads;
        EXPECT_EQ(one.final_energy, many.final_energy) << threads;
        for (std::size_t k = 0; k < one.trace.size(); ++k) ASSERT_EQ(one.trace[k].energy, many.trace[k].energy);
    }
}

TEST(RunSsa, SolvesSmallCompleteGraph) {
    const WeightedGraph g = gen_complete_pm1(12, 0.5, 4);
    const IsingModel m = maxcut_to_ising(g);
    const AnnealParams p = determine_params(m, 1000, NoiseMode::kShared);
    double best = -1e300;
    for (std::uint64_t seed = 0; seed < 50; ++seed) best = std::max(best, cut_value(g, run_ssa(m, p, seed).final_sigma));
    EXPECT_EQ(best, oracle::brute_force_maxcut(g));
}

TEST(RunSsa, RejectsInvalidParams) {
    const IsingModel m = oracle::random_model(5, 0.5, 1);
    AnnealParams p = determine_params(m, 100, NoiseMode::kShared);
    p.cycles = 1;
    EXPECT_THROW(run_ssa(m, p, 1), ConfigError);
    p = determine_params(m, 100, NoiseMode::kPerSpin);
    p.n_rnd_per_spin.pop_back();
    EXPECT_THROW(run_ssa(m, p, 1), ConfigError);
}

TEST(SsaNoise, WithoutNoiseGroundStateIsStable) {
    const Coupling c[] = {{0, 1, 1.0}};
    const IsingModel m(2, {0.5, 0.5}, c);
    const AnnealParams p = fixed_params(0.0, 10.0, 1000);
    SsaState s = make_state({1, 1}, {1.0, 1.0}, 10.0);
    const rng::SpinNoise noise(1);
    for (int k = 0; k < 1000; ++k) {
        ssa_step(m, s, p, noise);
        ASSERT_EQ(s.sigma, (SpinState{1, 1})) << k;
    }
}

TEST(SsaNoise, LargeNoiseCausesFlips) {
    const Coupling c[] = {{0, 1, 1.0}};
    const IsingModel m(2, {0.5, 0.5}, c);
    const AnnealParams p = fixed_params(50.0, 10.0, 1000);
    SsaState s = make_state({1, 1}, {1.0, 1.0}, 10.0);
    const rng::SpinNoise noise(1);
    int flips = 0;
    for (int k = 0; k < 1000; ++k) {
        const SpinState before = s.sigma;
        ssa_step(m, s, p, noise);
        flips += before != s.sigma;
    }
    EXPECT_GT(flips, 100);
}

TEST(SaConfigTest, DefaultInverseStep) {
    const SaConfig c;
    EXPECT_DOUBLE_EQ(c.inverse_step(), 1.0);
    EXPECT_THROW((SaConfig{1.0, 2.0, 100}.validate()), ConfigError);
    EXPECT_THROW((SaConfig{1.0, 0.0, 100}.validate()), ConfigError);
}

TEST(RunSa, ZeroDeltaAlwaysAccepted) {
    const IsingModel m = maxcut_to_ising({6, {}});
    SaEngine engine(m, SaConfig{}, 3);
    for (int k = 0; k < 200; ++k) {
        const auto move = engine.step();
        EXPECT_EQ(move.delta, 0.0);
        EXPECT_TRUE(move.accepted);
    }
}

TEST(RunSa, TrackedEnergyMatchesRecomputation) {
    const IsingModel m = maxcut_to_ising(oracle::random_graph(10, 0.6, {1.0, -1.0}, 2));
    SaEngine engine(m, SaConfig{}, 17);
    int accepted = 0;
    for (int k = 0; k < 1000; ++k) {
        accepted += engine.step().accepted;
        ASSERT_NEAR(engine.tracked_energy(), energy(m, engine.sigma()), 1e-9) << k;
    }
    EXPECT_GT(accepted, 0);
}

TEST(RunSa, TemperatureReachesFinal) {
    const IsingModel m = oracle::random_model(8, 0.5, 1);
    const RunResult r = run_sa(m, SaConfig{}, 4, true);
    ASSERT_EQ(r.trace.size(), 1000u);
    EXPECT_EQ(r.trace.front().control, 1.0);
    EXPECT_NEAR(r.trace.back().control, 1.0 / 1000.0, 1e-12);
    EXPECT_EQ(r.final_energy, energy(m, r.final_sigma));
    const RunResult again = run_sa(m, SaConfig{}, 4, true);
    EXPECT_EQ(r.final_sigma, again.final_sigma);
}
