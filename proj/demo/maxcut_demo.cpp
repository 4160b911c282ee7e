// Minimal library use: determine parameters for a random complete graph and
// compare SSA, SSAU and single-flip SA over a few seeds.

#include <cstdio>

#include "ssa/ssa.hpp"

int main() {
    const ssa::WeightedGraph graph = ssa::gen_complete_pm1(200, 0.5, 7);
    const ssa::IsingModel model = ssa::maxcut_to_ising(graph);
    const ssa::LocalEnergyStats stats = ssa::local_energy_stats(model);

    const ssa::AnnealParams shared = ssa::determine_params(stats, 1000, ssa::NoiseMode::kShared);
    const ssa::AnnealParams per_spin = ssa::determine_params(stats, 1000, ssa::NoiseMode::kPerSpin);
    std::printf("n_rnd %.3f  I0min %.3f  I0max %.3f  beta %.6f\n", shared.n_rnd, shared.i0min, shared.i0max,
                shared.beta);

    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const double ssa_cut = ssa::cut_value(graph, ssa::run_ssa(model, shared, seed).final_sigma);
        const double ssau_cut = ssa::cut_value(graph, ssa::run_ssa(model, per_spin, seed).final_sigma);
        const double sa_cut = ssa::cut_value(graph, ssa::run_sa(model, ssa::SaConfig{}, seed).final_sigma);
        std::printf("seed %llu: SSA %.0f  SSAU %.0f  SA %.0f\n", static_cast<unsigned long long>(seed), ssa_cut,
                    ssau_cut, sa_cut);
    }
    return 0;
}
