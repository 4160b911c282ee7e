#pragma once

// Stochastic simulated annealing (synchronous p-bit style updates) and the
// single-flip Metropolis baseline.
//
// One SSA cycle, for every spin i reading the same sigma(t):
//
//   I_i      = h_i + sum_j J_ij sigma_j(t) + nu_i r_i(t)      r_i(t) = +-1
//   Is_i     = I0(t) - alpha   if Is_i + I_i >= I0(t)
//            = -I0(t)          if Is_i + I_i < -I0(t)
//            = Is_i + I_i      otherwise
//   sigma_i  = Is_i >= 0 ? +1 : -1
//
// and afterwards I0 <- I0 / beta. nu_i is the shared n_rnd (SSA) or the
// per-spin n_rnd_i (SSAU).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssa/errors.hpp"
#include "ssa/hyperparams.hpp"
#include "ssa/ising.hpp"
#include "ssa/parallel.hpp"
#include "ssa/rng.hpp"

namespace ssa {

struct SsaState {
    SpinState sigma;
    std::vector<double> is;
    double i0 = 0.0;
    std::uint64_t t = 0;
};

/// One record per cycle: the control value used in that cycle (I0 for SSA,
/// T for SA) and the energy after it.
struct TraceRecord {
    std::uint64_t t = 0;
    double control = 0.0;
    double energy = 0.0;
};

struct RunResult {
    SpinState final_sigma;
    double final_energy = 0.0;
    std::optional<double> cut;
    std::vector<TraceRecord> trace;
    std::uint64_t seed = 0;
    std::size_t cycles_run = 0;
};

/// Is uniform in [-I0min, I0min), sigma from the sign rule, I0 = I0min.
inline SsaState init_state(const IsingModel& model, const AnnealParams& params, std::uint64_t seed) {
    params.validate(model.size());
    const rng::CounterRng gen(seed);
    SsaState state;
    state.sigma = SpinState(model.size());
    state.is.resize(model.size());
    state.i0 = params.i0min;
    for (std::size_t i = 0; i < model.size(); ++i) {
        const double u = rng::to_unit(gen.words(rng::Stream::kInit, i)[0]);
        state.is[i] = params.i0min * (2.0 * u - 1.0);
        state.sigma.set(i, state.is[i] >= 0.0 ? 1 : -1);
    }
    return state;
}

namespace detail {

/// Accumulator update with the clamp of the current cycle's I0.
inline double clamp_accumulate(double is, double input, double i0, double alpha) {
    const double sum = is + input;
    if (sum >= i0) return i0 - alpha;
    if (sum < -i0) return -i0;
    return sum;
}

}  // namespace detail

/// One synchronous cycle visiting spins in `order` (any permutation of
/// 0..n-1). All reads use sigma(t); sigma(t+1) is committed afterwards, so
/// the order cannot change the result.
template <class Noise>
void ssa_step(const IsingModel& model, SsaState& state, const AnnealParams& params, const Noise& noise,
              std::span<const std::size_t> order) {
    const std::size_t n = model.size();
    detail::check_length(n, state.sigma);
    if (order.size() != n) throw DimensionError("update order must list every spin once");
    std::vector<int> next(n, 0);
    for (std::size_t i : order) {
        detail::check_index(n, i);
        double input = model.h(i);
        for (const auto& e : model.row(i)) input += e.value * state.sigma[e.col];
        input += params.noise(i) * noise(i, state.t);
        state.is[i] = detail::clamp_accumulate(state.is[i], input, state.i0, params.alpha);
        next[i] = state.is[i] >= 0.0 ? 1 : -1;
    }
    for (std::size_t i = 0; i < n; ++i) state.sigma.set(i, next[i]);
    state.i0 /= params.beta;
    ++state.t;
}

template <class Noise>
void ssa_step(const IsingModel& model, SsaState& state, const AnnealParams& params, const Noise& noise) {
    std::vector<std::size_t> order(model.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    ssa_step(model, state, params, noise, std::span<const std::size_t>(order));
}

/// Production SSA loop. Keeps local fields h_i + sum_j J_ij sigma_j cached
/// and patches them from the flipped spins; when more than half the spins
/// flip it recomputes them row by row instead. The choice depends only on the
/// flip count, so results do not depend on `threads`.
class SsaEngine {
public:
    SsaEngine(const IsingModel& model, AnnealParams params, std::uint64_t seed, unsigned threads = 1)
        : model_(model), params_(std::move(params)), noise_(seed), threads_(threads) {
        state_ = init_state(model_, params_, seed);
        fields_.resize(model_.size());
        next_.resize(model_.size());
        recompute_fields();
    }

    const SsaState& state() const { return state_; }
    std::span<const double> fields() const { return fields_; }

    /// Energy of the current state from the cached fields.
    double energy() const {
        double bias = 0.0;
        double pair = 0.0;
        for (std::size_t i = 0; i < model_.size(); ++i) {
            bias += model_.h(i) * state_.sigma[i];
            pair += state_.sigma[i] * (fields_[i] - model_.h(i));
        }
        return -bias - 0.5 * pair;
    }

    /// Runs one cycle and returns the I0 it used.
    double step() {
        const std::size_t n = model_.size();
        const double i0 = state_.i0;
        const std::uint64_t t = state_.t;
        auto update = [&](std::size_t begin, std::size_t end) {
            thread_local std::vector<int> signs;
            signs.resize(end - begin);
            noise_.fill(begin, t, std::span<int>(signs));
            for (std::size_t i = begin; i < end; ++i) {
                const double input = fields_[i] + params_.noise(i) * signs[i - begin];
                state_.is[i] = detail::clamp_accumulate(state_.is[i], input, i0, params_.alpha);
                next_[i] = state_.is[i] >= 0.0 ? 1 : -1;
            }
        };
        parallel_for(n, n >= kParallelThreshold ? threads_ : 1u, update);

        flipped_.clear();
        for (std::size_t i = 0; i < n; ++i)
            if (next_[i] != state_.sigma[i]) flipped_.push_back(i);
        for (std::size_t i : flipped_) state_.sigma.flip(i);

        if (2 * flipped_.size() > n) {
            recompute_fields();
        } else {
            for (std::size_t j : flipped_) {
                const double delta = 2.0 * state_.sigma[j];
                for (const auto& e : model_.row(j)) fields_[e.col] += delta * e.value;
            }
        }
        state_.i0 /= params_.beta;
        ++state_.t;
        return i0;
    }

    RunResult run(bool record_trace) {
        RunResult result;
        result.seed = noise_.seed();
        if (record_trace) result.trace.reserve(params_.cycles);
        for (std::size_t c = 0; c < params_.cycles; ++c) {
            const double used = step();
            if (record_trace) result.trace.push_back({state_.t - 1, used, energy()});
        }
        result.cycles_run = params_.cycles;
        result.final_sigma = state_.sigma;
        result.final_energy = ssa::energy(model_, state_.sigma);
        return result;
    }

private:
    static constexpr std::size_t kParallelThreshold = 2048;

    void recompute_fields() {
        parallel_for(model_.size(), model_.size() >= kParallelThreshold ? threads_ : 1u,
                     [&](std::size_t begin, std::size_t end) {
                         for (std::size_t i = begin; i < end; ++i) {
                             double f = model_.h(i);
                             for (const auto& e : model_.row(i)) f += e.value * state_.sigma[e.col];
                             fields_[i] = f;
                         }
                     });
    }

    const IsingModel& model_;
    AnnealParams params_;
    rng::SpinNoise noise_;
    unsigned threads_;
    SsaState state_;
    std::vector<double> fields_;
    std::vector<int> next_;
    std::vector<std::size_t> flipped_;
};

/// Runs params.cycles SSA cycles from init_state. The first cycle runs at
/// I0min and, after cycles - 1 divisions by beta, the last at I0max.
inline RunResult run_ssa(const IsingModel& model, const AnnealParams& params, std::uint64_t seed,
                         bool record_trace = false, unsigned threads = 1) {
    SsaEngine engine(model, params, seed, threads);
    return engine.run(record_trace);
}

struct SaConfig {
    double t_init = 1.0;
    double t_final = 1.0 / 1000.0;
    std::size_t cycles = 1000;

    void validate() const {
        if (!(t_final > 0.0)) throw ConfigError("T_final must be > 0");
        if (!(t_final <= t_init)) throw ConfigError("T_final must be <= T_init");
        if (cycles < 2) throw ConfigError("SA needs at least 2 cycles");
    }

    /// Increment of 1/T per cycle.
    double inverse_step() const {
        return (1.0 / t_final - 1.0 / t_init) / static_cast<double>(cycles - 1);
    }
};

/// Single-flip Metropolis annealing: one random flip attempt per cycle and
/// T <- 1 / (1/T + delta) after each cycle.
class SaEngine {
public:
    SaEngine(const IsingModel& model, SaConfig config, std::uint64_t seed)
        : model_(model), config_(config), gen_(seed), temperature_(config.t_init) {
        config_.validate();
        if (model_.size() == 0) throw DimensionError("SA needs a non-empty model");
        inverse_step_ = config_.inverse_step();
        sigma_ = SpinState(model_.size());
        for (std::size_t i = 0; i < model_.size(); ++i)
            sigma_.set(i, (gen_.words(rng::Stream::kSaInit, i)[0] & 1u) ? 1 : -1);
        energy_ = ssa::energy(model_, sigma_);
    }

    const SpinState& sigma() const { return sigma_; }
    double temperature() const { return temperature_; }
    /// Energy tracked through the accepted flip deltas.
    double tracked_energy() const { return energy_; }

    struct Move {
        std::size_t spin;
        double delta;
        bool accepted;
    };

    Move step() {
        const auto w = gen_.words(rng::Stream::kSaMove, cycle_);
        const std::size_t i = static_cast<std::size_t>(rng::to_index(w[0], model_.size()));
        const double delta = 2.0 * sigma_[i] * local_field(model_, sigma_, i);
        const bool accept = delta < 0.0 || rng::to_unit(w[1]) < std::exp(-delta / temperature_);
        if (accept) {
            sigma_.flip(i);
            energy_ += delta;
        }
        temperature_ = 1.0 / (1.0 / temperature_ + inverse_step_);
        ++cycle_;
        return {i, delta, accept};
    }

    RunResult run(bool record_trace) {
        RunResult result;
        result.seed = gen_.seed();
        if (record_trace) result.trace.reserve(config_.cycles);
        for (std::size_t c = 0; c < config_.cycles; ++c) {
            const double used = temperature_;
            step();
            if (record_trace) result.trace.push_back({cycle_ - 1, used, energy_});
        }
        result.cycles_run = config_.cycles;
        result.final_sigma = sigma_;
        result.final_energy = ssa::energy(model_, sigma_);
        return result;
    }

private:
    const IsingModel& model_;
    SaConfig config_;
    rng::CounterRng gen_;
    double temperature_;
    double inverse_step_ = 0.0;
    std::uint64_t cycle_ = 0;
    SpinState sigma_;
    double energy_ = 0.0;
};

inline RunResult run_sa(const IsingModel& model, const SaConfig& config, std::uint64_t seed,
                        bool record_trace = false) {
    SaEngine engine(model, config, seed);
    return engine.run(record_trace);
}

}  // namespace ssa
