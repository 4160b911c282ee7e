#pragma once

// Closed-form annealing parameters from local-energy statistics.
//
// With the other spins uniformly random, the local energy of spin i is a sum
// of (n - 1) terms +-J_ij, approximately normal with
//
//   mu_i = (n - 1) * mean(J_i:)                 mean over the full row of n entries
//   s_i  = sqrt((n - 1) * Var([J_i:; -J_i:]))   population variance of 2n entries
//        = sqrt((n - 1) * sum_j J_ij^2 / n)
//
// The diagonal zero counts as a row entry. Biases h are not part of the
// statistics. From the aggregates:
//
//   n_rnd  = c_noise * mean(s_i)      (per spin: c_noise * s_i)
//   I0min  = c_i0min * max(s_i) + min|mu_i|
//   I0max  = c_i0max * max(s_i) + min|mu_i|
//   beta   = (I0min / I0max)^(1 / (cycles - 1))

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ssa/errors.hpp"
#include "ssa/ising.hpp"

namespace ssa {

/// Neumaier-compensated sum; order-fixed so results replicate exactly.
inline double compensated_sum(std::span<const double> values) {
    double sum = 0.0;
    double carry = 0.0;
    for (double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }
    return sum + carry;
}

struct LocalEnergyStats {
    std::vector<double> mu;
    std::vector<double> s;
    double mean_s = 0.0;
    double max_s = 0.0;
    double min_s = 0.0;
    double min_abs_mu = 0.0;
    double max_abs_mu = 0.0;

    std::size_t size() const { return mu.size(); }

    /// Fills the aggregates from the per-spin arrays.
    void aggregate() {
        if (s.empty() || s.size() != mu.size())
            throw DimensionError("local-energy statistics need equal, non-empty mu and s arrays");
        mean_s = compensated_sum(s) / static_cast<double>(s.size());
        const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
        min_s = *lo;
        max_s = *hi;
        min_abs_mu = std::numeric_limits<double>::infinity();
        max_abs_mu = 0.0;
        for (double m : mu) {
            min_abs_mu = std::min(min_abs_mu, std::abs(m));
            max_abs_mu = std::max(max_abs_mu, std::abs(m));
        }
    }
};

inline LocalEnergyStats local_energy_stats(const IsingModel& model) {
    const std::size_t n = model.size();
    if (n < 2) throw DegenerateInstance("local-energy statistics need at least 2 spins, got " + std::to_string(n));
    const double terms = static_cast<double>(n - 1);
    const double length = static_cast<double>(n);
    LocalEnergyStats stats;
    stats.mu.resize(n);
    stats.s.resize(n);
    std::vector<double> scratch;
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = model.row(i);
        scratch.clear();
        for (const auto& e : row) scratch.push_back(e.value);
        const double row_sum = compensated_sum(scratch);
        for (double& v : scratch) v *= v;
        const double row_sq = compensated_sum(scratch);
        stats.mu[i] = terms * (row_sum / length);
        stats.s[i] = std::sqrt(terms * (row_sq / length));
    }
    stats.aggregate();
    return stats;
}

enum class NoiseMode { kShared, kPerSpin };

/// Multipliers in the parameter rules.
struct Constants {
    double noise = 0.6745;
    double i0min = 0.01;
    double i0max = 2.0;
};

struct AnnealParams {
    NoiseMode mode = NoiseMode::kShared;
    double n_rnd = 0.0;
    std::vector<double> n_rnd_per_spin;  // used in kPerSpin mode, length n
    double i0min = 0.0;
    double i0max = 0.0;
    double beta = 1.0;
    std::size_t cycles = 0;
    double alpha = 0.0;

    double noise(std::size_t spin) const {
        return mode == NoiseMode::kPerSpin ? n_rnd_per_spin[spin] : n_rnd;
    }

    /// Throws ConfigError unless the parameters describe a runnable schedule
    /// for a model with n spins.
    void validate(std::size_t n) const {
        if (cycles < 2) throw ConfigError("cycles must be >= 2, got " + std::to_string(cycles));
        if (!(i0min > 0.0)) throw ConfigError("I0min must be > 0");
        if (!(i0max >= i0min)) throw ConfigError("I0max must be >= I0min");
        if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("beta must lie in (0, 1]");
        if (!(alpha >= 0.0)) throw ConfigError("alpha must be >= 0");
        if (mode == NoiseMode::kPerSpin && n_rnd_per_spin.size() != n)
            throw ConfigError("per-spin noise vector has length " + std::to_string(n_rnd_per_spin.size()) +
                              ", expected " + std::to_string(n));
        if (mode == NoiseMode::kShared && !(n_rnd >= 0.0)) throw ConfigError("n_rnd must be >= 0");
    }
};

/// Geometric divisor taking I0 from i0min to i0max in cycles - 1 divisions.
inline double schedule_beta(double i0min, double i0max, std::size_t cycles) {
    if (cycles < 2) throw ConfigError("cycles must be >= 2, got " + std::to_string(cycles));
    return std::pow(i0min / i0max, 1.0 / static_cast<double>(cycles - 1));
}

inline AnnealParams determine_params(const LocalEnergyStats& stats, std::size_t cycles, NoiseMode mode,
                                     double alpha = 0.0, const Constants& constants = {}) {
    if (cycles < 2) throw ConfigError("cycles must be >= 2, got " + std::to_string(cycles));
    if (stats.s.empty()) throw DegenerateInstance("empty local-energy statistics");
    AnnealParams p;
    p.mode = mode;
    p.cycles = cycles;
    p.alpha = alpha;
    p.n_rnd = constants.noise * stats.mean_s;
    if (mode == NoiseMode::kPerSpin) {
        p.n_rnd_per_spin.resize(stats.s.size());
        for (std::size_t i = 0; i < stats.s.size(); ++i) p.n_rnd_per_spin[i] = constants.noise * stats.s[i];
    }
    p.i0min = constants.i0min * stats.max_s + stats.min_abs_mu;
    p.i0max = constants.i0max * stats.max_s + stats.min_abs_mu;
    if (!(p.i0min > 0.0))
        throw DegenerateInstance("I0min evaluates to 0 (decoupled model); the schedule is undefined");
    if (p.i0max < p.i0min) throw ConfigError("constants give I0max < I0min");
    p.beta = schedule_beta(p.i0min, p.i0max, cycles);
    return p;
}

inline AnnealParams determine_params(const IsingModel& model, std::size_t cycles, NoiseMode mode,
                                     double alpha = 0.0, const Constants& constants = {}) {
    return determine_params(local_energy_stats(model), cycles, mode, alpha, constants);
}

}  // namespace ssa
