// ssa: MAX-CUT annealing experiments from the command line.
//
//   ssa params --input G1
//   ssa bench  --input G1 --algo ssau --trials 100 --out g1.json
//   ssa solve  --gen-complete 2000 --minus-frac 0.5 --trace k2000_trace.csv
//   ssa search --input G58 --trials 1000 --out g58_search.json
//   ssa gen    --gen-complete 200 --minus-frac 0.5 --out k200.txt

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ssa/ssa.hpp"

namespace {

struct Options {
    std::string input;
    std::size_t gen_complete = 0;
    double minus_frac = 0.5;
    std::uint64_t graph_seed = 1;
    std::string algo = "ssa";
    std::size_t cycles = 1000;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    std::string out;
    std::string trace;
    unsigned threads = 1;
    ssa::Constants constants;
    double alpha = 0.0;
    std::size_t eval_runs = 1;
    std::vector<double> range_n_rnd{0.0, 1000.0};
    std::vector<double> range_i0min{0.0, 1000.0};
    std::vector<double> range_i0max{0.0, 1000.0};
};

struct Instance {
    std::string id;
    ssa::WeightedGraph graph;
};

void add_instance_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--input", o.input, "Gset-format instance file");
    cmd->add_option("--gen-complete", o.gen_complete, "use a complete +-1 graph on N nodes instead of --input");
    cmd->add_option("--minus-frac", o.minus_frac, "fraction of -1 weights for --gen-complete")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--graph-seed", o.graph_seed, "seed for --gen-complete")->capture_default_str();
}

void add_param_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--cycles", o.cycles, "annealing cycles")->capture_default_str()->check(CLI::Range(2ul, 1ul << 31));
    cmd->add_option("--c-noise", o.constants.noise, "n_rnd = c * mean(s_i)")->capture_default_str();
    cmd->add_option("--c-i0min", o.constants.i0min, "I0min = c * max(s_i) + min|mu_i|")->capture_default_str();
    cmd->add_option("--c-i0max", o.constants.i0max, "I0max = c * max(s_i) + min|mu_i|")->capture_default_str();
    cmd->add_option("--alpha", o.alpha, "accumulator resolution")->capture_default_str()->check(CLI::NonNegativeNumber);
}

void add_run_flags(CLI::App* cmd, Options& o, std::size_t default_trials) {
    o.trials = default_trials;
    cmd->add_option("--trials", o.trials, "independent runs")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "master seed; trial k uses derive_seed(seed, k)")->capture_default_str();
    cmd->add_option("--out", o.out, "report file (.json for JSON, otherwise CSV)");
    cmd->add_option("--threads", o.threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
}

Instance load_instance(const Options& o) {
    if (!o.input.empty() && o.gen_complete > 0) throw ssa::ConfigError("--input and --gen-complete are exclusive");
    if (!o.input.empty()) return {std::filesystem::path(o.input).filename().string(), ssa::read_gset(o.input)};
    if (o.gen_complete > 0)
        return {"complete-" + std::to_string(o.gen_complete), ssa::gen_complete_pm1(o.gen_complete, o.minus_frac, o.graph_seed)};
    throw ssa::ConfigError("one of --input or --gen-complete is required");
}

std::map<std::string, std::string> flag_record(const CLI::App* cmd) {
    std::map<std::string, std::string> flags;
    flags["command"] = cmd->get_name();
    for (const CLI::Option* opt : cmd->get_options()) {
        if (opt->get_name() == "--help" || opt->get_lnames().empty()) continue;
        const auto& results = opt->results();
        std::string value;
        if (!results.empty()) {
            for (std::size_t k = 0; k < results.size(); ++k) value += (k ? "," : "") + results[k];
        } else {
            value = opt->get_default_str();
        }
        flags["--" + opt->get_lnames().front()] = value;
    }
    return flags;
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string range(double lo, double hi) { return "[" + fixed(lo, 2) + ", " + fixed(hi, 2) + "]"; }

int cmd_params(const Options& o, const CLI::App* cmd) {
    const Instance inst = load_instance(o);
    const ssa::IsingModel model = ssa::maxcut_to_ising(inst.graph);
    const auto t0 = std::chrono::steady_clock::now();
    const ssa::LocalEnergyStats stats = ssa::local_energy_stats(model);
    const ssa::AnnealParams p = ssa::determine_params(stats, o.cycles, ssa::NoiseMode::kPerSpin, o.alpha, o.constants);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto [lo_nrnd, hi_nrnd] = std::minmax_element(p.n_rnd_per_spin.begin(), p.n_rnd_per_spin.end());

    std::cout << "graph\tn\tedges\t|mu_i|\ts_i\tn_rnd\tI0min\tI0max\tbeta\tn_rnd_i\n";
    std::cout << inst.id << '\t' << inst.graph.n << '\t' << inst.graph.edges.size() << '\t'
              << range(stats.min_abs_mu, stats.max_abs_mu) << '\t' << range(stats.min_s, stats.max_s) << '\t'
              << fixed(p.n_rnd, 2) << '\t' << fixed(p.i0min, 2) << '\t' << fixed(p.i0max, 2) << '\t'
              << fixed(p.beta, 6) << '\t' << range(*lo_nrnd, *hi_nrnd) << '\n';

    if (!o.out.empty()) {
        nlohmann::ordered_json j;
        j["tool_version"] = std::string(ssa::kToolVersion);
        j["graph"] = inst.id;
        j["n"] = inst.graph.n;
        j["edges"] = inst.graph.edges.size();
        j["cycles"] = o.cycles;
        j["constants"] = {{"noise", o.constants.noise}, {"i0min", o.constants.i0min}, {"i0max", o.constants.i0max}};
        j["alpha"] = o.alpha;
        j["flags"] = flag_record(cmd);
        j["abs_mu"] = {stats.min_abs_mu, stats.max_abs_mu};
        j["s"] = {stats.min_s, stats.max_s};
        j["mean_s"] = stats.mean_s;
        j["n_rnd"] = p.n_rnd;
        j["i0min"] = p.i0min;
        j["i0max"] = p.i0max;
        j["beta"] = p.beta;
        j["n_rnd_i"] = {*lo_nrnd, *hi_nrnd};
        j["elapsed_s"] = elapsed;
        ssa::detail::write_atomically(o.out, j.dump(2) + "\n");
    }
    return 0;
}

ssa::TrialReport run_trials(const Options& o, const Instance& inst, const ssa::IsingModel& model,
                            const CLI::App* cmd, std::optional<ssa::RunResult>& first) {
    ssa::NoiseMode mode;
    if (o.algo == "ssa")
        mode = ssa::NoiseMode::kShared;
    else if (o.algo == "ssau")
        mode = ssa::NoiseMode::kPerSpin;
    else if (o.algo != "sa")
        throw ssa::ConfigError("unknown --algo '" + o.algo + "' (expected sa, ssa or ssau)");

    std::optional<ssa::AnnealParams> params;
    if (o.algo != "sa") params = ssa::determine_params(model, o.cycles, mode, o.alpha, o.constants);
    const ssa::SaConfig sa{1.0, 1.0 / 1000.0, o.cycles};
    const bool want_trace = !o.trace.empty();

    ssa::TrialReport report;
    report.graph = inst.id;
    report.algo = o.algo;
    report.cycles = o.cycles;
    report.seed = o.seed;
    report.constants = o.constants;
    report.alpha = o.alpha;
    report.flags = flag_record(cmd);
    report.seeds.resize(o.trials);
    report.cuts.resize(o.trials);
    std::vector<ssa::RunResult> results(o.trials);

    const auto t0 = std::chrono::steady_clock::now();
    const unsigned inner_threads = o.trials == 1 ? o.threads : 1u;
    ssa::parallel_for(o.trials, o.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const std::uint64_t seed = ssa::rng::derive_seed(o.seed, k);
            const bool trace = want_trace && k == 0;
            ssa::RunResult r = params ? ssa::run_ssa(model, *params, seed, trace, inner_threads)
                                      : ssa::run_sa(model, sa, seed, trace);
            r.cut = ssa::cut_value(inst.graph, r.final_sigma);
            report.seeds[k] = seed;
            report.cuts[k] = *r.cut;
            if (k == 0) results[0] = std::move(r);
        }
    });
    report.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.summarize();
    first = std::move(results[0]);
    return report;
}

int cmd_bench(const Options& o, const CLI::App* cmd, bool solve) {
    const Instance inst = load_instance(o);
    const ssa::IsingModel model = ssa::maxcut_to_ising(inst.graph);
    std::optional<ssa::RunResult> first;
    std::cerr << "running " << o.trials << " x " << o.algo << " on " << inst.id << " (" << o.cycles << " cycles)\n";
    const ssa::TrialReport report = run_trials(o, inst, model, cmd, first);

    if (!o.out.empty()) ssa::write_report(report, ssa::format_for(o.out), o.out);
    if (!o.trace.empty()) ssa::write_trace(first->trace, o.algo == "sa" ? "T" : "I0", o.trace);

    if (solve) {
        std::cout << "graph\talgo\tcycles\tseed\tcut\tenergy\n";
        std::cout << inst.id << '\t' << o.algo << '\t' << o.cycles << '\t' << report.seeds[0] << '\t'
                  << ssa::detail::format_real(*first->cut) << '\t' << ssa::detail::format_real(first->final_energy) << '\n';
    } else {
        std::cout << ssa::report_csv(report);
    }
    std::cerr << "done in " << fixed(report.elapsed_s, 3) << " s\n";
    return 0;
}

int cmd_search(const Options& o, const CLI::App* cmd) {
    const Instance inst = load_instance(o);
    ssa::SearchMeta meta;
    meta.graph = inst.id;
    meta.cycles = o.cycles;
    meta.eval_runs = o.eval_runs;
    meta.seed = o.seed;
    meta.space.trials = o.trials;
    meta.space.n_rnd = {o.range_n_rnd.at(0), o.range_n_rnd.at(1)};
    meta.space.i0min = {o.range_i0min.at(0), o.range_i0min.at(1)};
    meta.space.i0max = {o.range_i0max.at(0), o.range_i0max.at(1)};
    meta.flags = flag_record(cmd);
    std::cerr << "searching " << o.trials << " candidates x " << o.eval_runs << " runs on " << inst.id << "\n";
    const auto t0 = std::chrono::steady_clock::now();
    const ssa::SearchReport report = ssa::random_search(inst.graph, meta.space, o.cycles, o.eval_runs, o.seed, o.threads);
    meta.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.out.empty()) ssa::write_search_report(report, meta, ssa::format_for(o.out), o.out);
    const ssa::AnnealParams& b = report.best_params;
    std::cout << "graph\ttrials\tbest_trial\tn_rnd\tI0min\tI0max\tbeta\tbest_mean_cut\telapsed_s\n";
    std::cout << inst.id << '\t' << report.records.size() << '\t' << report.best_index << '\t'
              << ssa::detail::format_real(b.n_rnd) << '\t' << ssa::detail::format_real(b.i0min) << '\t'
              << ssa::detail::format_real(b.i0max) << '\t' << ssa::detail::format_real(b.beta) << '\t'
              << ssa::detail::format_real(report.best_mean_cut) << '\t' << fixed(meta.elapsed_s, 3) << '\n';
    return 0;
}

int cmd_gen(const Options& o) {
    if (o.gen_complete < 2) throw ssa::ConfigError("gen needs --gen-complete N with N >= 2");
    const ssa::WeightedGraph g = ssa::gen_complete_pm1(o.gen_complete, o.minus_frac, o.graph_seed);
    if (o.out.empty())
        std::cout << ssa::format_gset(g);
    else
        ssa::write_gset(g, o.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic simulated annealing for MAX-CUT with closed-form parameters"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ssa::kToolVersion));
    Options o;

    auto* params = app.add_subcommand("params", "print local-energy statistics and the determined parameters");
    add_instance_flags(params, o);
    add_param_flags(params, o);
    params->add_option("--out", o.out, "also write the row as JSON");

    auto* solve = app.add_subcommand("solve", "single anneal; prints cut and energy");
    auto* bench = app.add_subcommand("bench", "repeated anneals; writes a trial report");
    for (auto* cmd : {solve, bench}) {
        add_instance_flags(cmd, o);
        add_param_flags(cmd, o);
        cmd->add_option("--algo", o.algo, "sa, ssa or ssau")->capture_default_str()->check(CLI::IsMember({"sa", "ssa", "ssau"}));
        cmd->add_option("--trace", o.trace, "per-cycle trace CSV of the first trial");
    }
    add_run_flags(bench, o, 100);
    solve->add_option("--seed", o.seed, "master seed; the run uses derive_seed(seed, 0)")->capture_default_str();
    solve->add_option("--out", o.out, "report file (.json for JSON, otherwise CSV)");
    solve->add_option("--threads", o.threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);

    auto* search = app.add_subcommand("search", "random hyperparameter search baseline");
    add_instance_flags(search, o);
    search->add_option("--cycles", o.cycles, "annealing cycles")->capture_default_str()->check(CLI::Range(2ul, 1ul << 31));
    add_run_flags(search, o, 1000);
    search->add_option("--eval-runs", o.eval_runs, "anneals per candidate")->capture_default_str()->check(CLI::PositiveNumber);
    search->add_option("--range-n-rnd", o.range_n_rnd, "lo hi")->expected(2)->capture_default_str();
    search->add_option("--range-i0min", o.range_i0min, "lo hi")->expected(2)->capture_default_str();
    search->add_option("--range-i0max", o.range_i0max, "lo hi")->expected(2)->capture_default_str();

    auto* gen = app.add_subcommand("gen", "write a complete +-1 instance in Gset format");
    gen->add_option("--gen-complete", o.gen_complete, "node count")->required();
    gen->add_option("--minus-frac", o.minus_frac, "fraction of -1 weights")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    gen->add_option("--seed", o.graph_seed, "generator seed")->capture_default_str();
    gen->add_option("--out", o.out, "output path (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (params->parsed()) return cmd_params(o, params);
        if (solve->parsed()) {
            o.trials = 1;
            return cmd_bench(o, solve, true);
        }
        if (bench->parsed()) return cmd_bench(o, bench, false);
        if (search->parsed()) return cmd_search(o, search);
        if (gen->parsed()) return cmd_gen(o);
    } catch (const ssa::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 1;
}
