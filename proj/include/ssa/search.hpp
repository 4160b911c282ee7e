#pragma once

// Search-based parameter selection: the baseline that closed-form
// determination replaces. Each candidate (n_rnd, I0min, I0max) is judged by
// the mean cut of `eval_runs` SSA anneals, with beta derived from the
// candidate's I0 bounds.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ssa/annealers.hpp"
#include "ssa/errors.hpp"
#include "ssa/hyperparams.hpp"
#include "ssa/ising.hpp"
#include "ssa/parallel.hpp"
#include "ssa/rng.hpp"

namespace ssa {

struct Interval {
    double lo = 0.0;
    double hi = 1000.0;
};

struct SearchSpace {
    Interval n_rnd{0.0, 1000.0};
    Interval i0min{0.0, 1000.0};
    Interval i0max{0.0, 1000.0};
    std::size_t trials = 1000;

    void validate() const {
        for (const Interval* r : {&n_rnd, &i0min, &i0max})
            if (!(r->lo <= r->hi)) throw ConfigError("search interval bounds out of order");
        if (n_rnd.lo < 0.0) throw ConfigError("n_rnd range must be non-negative");
        if (trials < 1) throw ConfigError("search needs at least one trial");
        // Feasible region: I0min in (0, hi], I0max >= I0min.
        if (!(i0min.hi > 0.0) || i0max.hi < i0min.lo || !(i0max.hi > 0.0))
            throw ConfigError("search space has no point with 0 < I0min <= I0max");
    }
};

struct SearchRecord {
    double n_rnd = 0.0;
    double i0min = 0.0;
    double i0max = 0.0;
    double beta = 1.0;
    double mean_cut = 0.0;
};

struct SearchReport {
    std::vector<SearchRecord> records;
    std::size_t best_index = 0;
    AnnealParams best_params;
    double best_mean_cut = 0.0;
    std::size_t total_runs = 0;
};

/// Argmax of mean_cut, first occurrence on ties.
inline std::size_t best_record(const std::vector<SearchRecord>& records) {
    if (records.empty()) throw ConfigError("no search records");
    std::size_t best = 0;
    for (std::size_t k = 1; k < records.size(); ++k)
        if (records[k].mean_cut > records[best].mean_cut) best = k;
    return best;
}

inline AnnealParams params_from_record(const SearchRecord& r, std::size_t cycles, double alpha = 0.0) {
    AnnealParams p;
    p.mode = NoiseMode::kShared;
    p.n_rnd = r.n_rnd;
    p.i0min = r.i0min;
    p.i0max = r.i0max;
    p.beta = r.beta;
    p.cycles = cycles;
    p.alpha = alpha;
    return p;
}

/// Mean cut of `runs` SSA anneals with seeds derive_seed(seed, 0..runs-1).
inline double mean_cut(const WeightedGraph& graph, const IsingModel& model, const AnnealParams& params,
                       std::size_t runs, std::uint64_t seed) {
    double total = 0.0;
    for (std::size_t r = 0; r < runs; ++r) {
        const RunResult res = run_ssa(model, params, rng::derive_seed(seed, r));
        total += cut_value(graph, res.final_sigma);
    }
    return total / static_cast<double>(runs);
}

namespace detail {

inline SearchReport evaluate_candidates(const WeightedGraph& graph, std::vector<SearchRecord> records,
                                        std::size_t cycles, std::size_t eval_runs, std::uint64_t seed,
                                        unsigned threads) {
    const IsingModel model = maxcut_to_ising(graph);
    parallel_for(records.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const AnnealParams p = params_from_record(records[k], cycles);
            records[k].mean_cut = mean_cut(graph, model, p, eval_runs, rng::derive_seed(seed, k));
        }
    });
    SearchReport report;
    report.records = std::move(records);
    report.best_index = best_record(report.records);
    report.best_params = params_from_record(report.records[report.best_index], cycles);
    report.best_mean_cut = report.records[report.best_index].mean_cut;
    report.total_runs = report.records.size() * eval_runs;
    return report;
}

}  // namespace detail

/// Uniform random search. Each trial draws (n_rnd, I0min, I0max) from the
/// space, resampling until 0 < I0min <= I0max. I0min is drawn from (lo, hi].
inline SearchReport random_search(const WeightedGraph& graph, const SearchSpace& space, std::size_t cycles,
                                  std::size_t eval_runs, std::uint64_t seed, unsigned threads = 1) {
    space.validate();
    if (cycles < 2) throw ConfigError("cycles must be >= 2");
    if (eval_runs < 1) throw ConfigError("eval_runs must be >= 1");
    constexpr std::uint64_t kMaxAttempts = 1u << 20;
    std::vector<SearchRecord> records(space.trials);
    for (std::size_t k = 0; k < space.trials; ++k) {
        const rng::CounterRng gen(rng::derive_seed(seed, k));
        bool found = false;
        for (std::uint64_t a = 0; a < kMaxAttempts && !found; ++a) {
            const auto w0 = gen.words(rng::Stream::kSearch, a, 0);
            const auto w1 = gen.words(rng::Stream::kSearch, a, 1);
            SearchRecord r;
            r.n_rnd = space.n_rnd.lo + rng::to_unit(w0[0]) * (space.n_rnd.hi - space.n_rnd.lo);
            r.i0min = space.i0min.hi - rng::to_unit(w0[1]) * (space.i0min.hi - space.i0min.lo);
            r.i0max = space.i0max.lo + rng::to_unit(w1[0]) * (space.i0max.hi - space.i0max.lo);
            if (r.i0min > 0.0 && r.i0max >= r.i0min) {
                r.beta = schedule_beta(r.i0min, r.i0max, cycles);
                records[k] = r;
                found = true;
            }
        }
        if (!found) throw ConfigError("search space feasible region too small to sample");
    }
    return detail::evaluate_candidates(graph, std::move(records), cycles, eval_runs, seed, threads);
}

/// Cartesian grid with `points` values per axis (endpoints included);
/// infeasible grid points are skipped.
inline SearchReport grid_search(const WeightedGraph& graph, const SearchSpace& space, std::size_t points,
                                std::size_t cycles, std::size_t eval_runs, std::uint64_t seed,
                                unsigned threads = 1) {
    space.validate();
    if (points < 1) throw ConfigError("grid needs at least one point per axis");
    if (cycles < 2) throw ConfigError("cycles must be >= 2");
    if (eval_runs < 1) throw ConfigError("eval_runs must be >= 1");
    auto axis = [points](const Interval& r, std::size_t k) {
        if (points == 1) return r.hi;
        return r.lo + (r.hi - r.lo) * static_cast<double>(k) / static_cast<double>(points - 1);
    };
    std::vector<SearchRecord> records;
    for (std::size_t a = 0; a < points; ++a)
        for (std::size_t b = 0; b < points; ++b)
            for (std::size_t c = 0; c < points; ++c) {
                SearchRecord r;
                r.n_rnd = axis(space.n_rnd, a);
                r.i0min = axis(space.i0min, b);
                r.i0max = axis(space.i0max, c);
                if (!(r.i0min > 0.0) || r.i0max < r.i0min) continue;
                r.beta = schedule_beta(r.i0min, r.i0max, cycles);
                records.push_back(r);
            }
    if (records.empty()) throw ConfigError("grid has no feasible point");
    return detail::evaluate_candidates(graph, std::move(records), cycles, eval_runs, seed, threads);
}

}  // namespace ssa
