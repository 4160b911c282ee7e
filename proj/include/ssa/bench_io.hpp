#pragma once

// Instance files, synthetic instances, trial statistics and report files.
//
// Gset text format (1-based node indices, integer tokens):
//
//   <n> <m>
//   <u> <v> <w>      repeated m times
//
// Blank lines and lines starting with '%' or '#' are ignored.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ssa/errors.hpp"
#include "ssa/hyperparams.hpp"
#include "ssa/ising.hpp"
#include "ssa/rng.hpp"
#include "ssa/search.hpp"

namespace ssa {

inline constexpr std::string_view kToolVersion = "0.3.0";

// ---------------------------------------------------------------------------
// Gset parsing and writing

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
        const std::size_t start = pos;
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '\r') ++pos;
        if (pos > start) tokens.push_back(line.substr(start, pos - start));
    }
    return tokens;
}

inline long long parse_integer(std::string_view token, std::size_t line_no, const char* what) {
    long long value = 0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (!token.empty() && token.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw ParseError(line_no, std::string("non-integer ") + what + " token '" + std::string(token) + "'");
    return value;
}

/// Shortest text that parses back to the same double (17 significant digits
/// at most).
inline std::string format_real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// Writes via a temporary sibling and renames, so a failure never leaves a
/// partial file at `path`.
inline void write_atomically(const std::filesystem::path& path, const std::string& contents) {
    std::filesystem::path tmp = path;
    tmp += ".partial";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << contents;
        out.flush();
        if (!out) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw IoError("write to " + tmp.string() + " failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move output into place at " + path.string());
    }
}

}  // namespace detail

inline WeightedGraph parse_gset(std::string_view text) {
    WeightedGraph graph;
    std::size_t declared_edges = 0;
    bool have_header = false;
    std::vector<std::pair<std::size_t, std::size_t>> seen;
    std::vector<std::size_t> edge_lines;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        const std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;
        const auto tokens = detail::split_ws(line);
        if (tokens.empty() || tokens.front().front() == '%' || tokens.front().front() == '#') continue;
        if (!have_header) {
            if (tokens.size() != 2) throw ParseError(line_no, "header must be '<n> <m>', found " + std::to_string(tokens.size()) + " tokens");
            const long long n = detail::parse_integer(tokens[0], line_no, "node-count");
            const long long m = detail::parse_integer(tokens[1], line_no, "edge-count");
            if (n < 1) throw ParseError(line_no, "node count must be positive");
            if (m < 0) throw ParseError(line_no, "edge count must be non-negative");
            graph.n = static_cast<std::size_t>(n);
            declared_edges = static_cast<std::size_t>(m);
            graph.edges.reserve(declared_edges);
            seen.reserve(declared_edges);
            have_header = true;
            continue;
        }
        if (tokens.size() != 3) throw ParseError(line_no, "edge line must be '<u> <v> <w>', found " + std::to_string(tokens.size()) + " tokens");
        if (graph.edges.size() == declared_edges)
            throw ParseError(line_no, "more edge lines than the declared " + std::to_string(declared_edges));
        const long long u = detail::parse_integer(tokens[0], line_no, "node");
        const long long v = detail::parse_integer(tokens[1], line_no, "node");
        const long long w = detail::parse_integer(tokens[2], line_no, "weight");
        const auto n = static_cast<long long>(graph.n);
        if (u < 1 || u > n || v < 1 || v > n)
            throw ParseError(line_no, "node index out of [1, " + std::to_string(graph.n) + "]");
        if (u == v) throw ParseError(line_no, "self-loop at node " + std::to_string(u));
        graph.edges.push_back({static_cast<std::size_t>(u - 1), static_cast<std::size_t>(v - 1), static_cast<double>(w)});
        seen.emplace_back(std::min(u, v) - 1, std::max(u, v) - 1);
        edge_lines.push_back(line_no);
    }
    if (!have_header) throw ParseError(line_no, "missing '<n> <m>' header");
    if (graph.edges.size() != declared_edges)
        throw ParseError(line_no, "header declares " + std::to_string(declared_edges) + " edges, found " +
                                      std::to_string(graph.edges.size()));
    // Duplicates are reported against the line of the later occurrence.
    std::vector<std::size_t> order(seen.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return seen[a] < seen[b]; });
    for (std::size_t k = 1; k < order.size(); ++k) {
        const auto& pair = seen[order[k]];
        if (pair == seen[order[k - 1]])
            throw ParseError(std::max(edge_lines[order[k]], edge_lines[order[k - 1]]),
                             "duplicate edge (" + std::to_string(pair.first + 1) + ", " + std::to_string(pair.second + 1) + ")");
    }
    return graph;
}

inline WeightedGraph read_gset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_gset(buf.str());
    } catch (const ParseError& e) {
        throw e.with_source(path.string());
    }
}

/// Inverse of parse_gset. Weights must be integral.
inline std::string format_gset(const WeightedGraph& graph) {
    std::string out;
    out.reserve(graph.edges.size() * 16 + 32);
    out += std::to_string(graph.n) + " " + std::to_string(graph.edges.size()) + "\n";
    for (const Edge& e : graph.edges) {
        if (e.w != std::floor(e.w)) throw MalformedInput("Gset format needs integer weights");
        out += std::to_string(e.u + 1);
        out += ' ';
        out += std::to_string(e.v + 1);
        out += ' ';
        out += std::to_string(static_cast<long long>(e.w));
        out += '\n';
    }
    return out;
}

inline void write_gset(const WeightedGraph& graph, const std::filesystem::path& path) {
    detail::write_atomically(path, format_gset(graph));
}

// ---------------------------------------------------------------------------
// Synthetic instances

/// Complete graph on n nodes, edges in (i < j) lexicographic order, with
/// round(minus_fraction * n(n-1)/2) of them weighted -1 (chosen by a seeded
/// partial Fisher-Yates shuffle) and the rest +1.
inline WeightedGraph gen_complete_pm1(std::size_t n, double minus_fraction, std::uint64_t seed) {
    if (n < 2) throw ConfigError("complete graph needs n >= 2");
    if (!(minus_fraction >= 0.0 && minus_fraction <= 1.0)) throw ConfigError("minus fraction must lie in [0, 1]");
    const std::size_t m = n * (n - 1) / 2;
    const auto minus = static_cast<std::size_t>(std::llround(minus_fraction * static_cast<double>(m)));
    WeightedGraph graph;
    graph.n = n;
    graph.edges.reserve(m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) graph.edges.push_back({i, j, 1.0});
    std::vector<std::uint32_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0u);
    const rng::CounterRng gen(seed);
    for (std::size_t k = 0; k < minus; ++k) {
        const std::size_t pick = k + rng::to_index(gen.words(rng::Stream::kGenerator, k)[0], m - k);
        std::swap(perm[k], perm[pick]);
        graph.edges[perm[k]].w = -1.0;
    }
    return graph;
}

// ---------------------------------------------------------------------------
// Trial statistics and reports

struct TrialStats {
    double mean = 0.0;
    double std = 0.0;  // population standard deviation
    double best = 0.0;
};

inline TrialStats trial_stats(std::span<const double> cuts) {
    if (cuts.empty()) throw ConfigError("trial statistics need at least one value");
    TrialStats s;
    const double count = static_cast<double>(cuts.size());
    s.mean = compensated_sum(cuts) / count;
    std::vector<double> sq;
    sq.reserve(cuts.size());
    for (double c : cuts) sq.push_back((c - s.mean) * (c - s.mean));
    s.std = std::sqrt(compensated_sum(sq) / count);
    s.best = cuts[0];
    for (double c : cuts) s.best = std::max(s.best, c);
    return s;
}

struct TrialReport {
    std::string graph;
    std::string algo;  // sa | ssa | ssau | searched-ssa
    std::size_t trials = 0;
    std::size_t cycles = 0;
    double mean_cut = 0.0;
    double std_cut = 0.0;
    double best_cut = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> seeds;
    std::vector<double> cuts;
    double elapsed_s = 0.0;
    Constants constants;
    double alpha = 0.0;
    std::string tool_version{kToolVersion};
    std::map<std::string, std::string> flags;

    /// Sets mean/std/best from `cuts`.
    void summarize() {
        const TrialStats s = trial_stats(cuts);
        mean_cut = s.mean;
        std_cut = s.std;
        best_cut = s.best;
        trials = cuts.size();
    }

    friend bool operator==(const TrialReport& a, const TrialReport& b) {
        return a.graph == b.graph && a.algo == b.algo && a.trials == b.trials && a.cycles == b.cycles &&
               a.mean_cut == b.mean_cut && a.std_cut == b.std_cut && a.best_cut == b.best_cut &&
               a.seed == b.seed && a.seeds == b.seeds && a.cuts == b.cuts && a.elapsed_s == b.elapsed_s &&
               a.constants.noise == b.constants.noise && a.constants.i0min == b.constants.i0min &&
               a.constants.i0max == b.constants.i0max && a.alpha == b.alpha &&
               a.tool_version == b.tool_version && a.flags == b.flags;
    }
};

enum class ReportFormat { kCsv, kJson };

/// Format from the file extension: ".json" selects JSON, anything else CSV.
inline ReportFormat format_for(const std::filesystem::path& path) {
    return path.extension() == ".json" ? ReportFormat::kJson : ReportFormat::kCsv;
}

inline nlohmann::ordered_json to_json(const TrialReport& r) {
    nlohmann::ordered_json j;
    j["tool_version"] = r.tool_version;
    j["graph"] = r.graph;
    j["algo"] = r.algo;
    j["trials"] = r.trials;
    j["cycles"] = r.cycles;
    j["mean_cut"] = r.mean_cut;
    j["std_cut"] = r.std_cut;
    j["best_cut"] = r.best_cut;
    j["std_definition"] = "population";
    j["seed"] = r.seed;
    j["seed_rule"] = "trial k uses mix64(seed + 0x9E3779B97F4A7C15 * (k + 1))";
    j["elapsed_s"] = r.elapsed_s;
    j["constants"] = {{"noise", r.constants.noise}, {"i0min", r.constants.i0min}, {"i0max", r.constants.i0max}};
    j["alpha"] = r.alpha;
    j["flags"] = r.flags;
    j["seeds"] = r.seeds;
    j["cuts"] = r.cuts;
    return j;
}

inline TrialReport trial_report_from_json(const nlohmann::json& j) {
    TrialReport r;
    try {
        r.tool_version = j.at("tool_version").get<std::string>();
        r.graph = j.at("graph").get<std::string>();
        r.algo = j.at("algo").get<std::string>();
        r.trials = j.at("trials").get<std::size_t>();
        r.cycles = j.at("cycles").get<std::size_t>();
        r.mean_cut = j.at("mean_cut").get<double>();
        r.std_cut = j.at("std_cut").get<double>();
        r.best_cut = j.at("best_cut").get<double>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.elapsed_s = j.at("elapsed_s").get<double>();
        r.constants.noise = j.at("constants").at("noise").get<double>();
        r.constants.i0min = j.at("constants").at("i0min").get<double>();
        r.constants.i0max = j.at("constants").at("i0max").get<double>();
        r.alpha = j.at("alpha").get<double>();
        r.flags = j.at("flags").get<std::map<std::string, std::string>>();
        r.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        r.cuts = j.at("cuts").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw MalformedInput(std::string("report JSON: ") + e.what());
    }
    return r;
}

inline constexpr std::string_view kReportCsvHeader = "graph,algo,trials,cycles,mean_cut,std_cut,best_cut,elapsed_s";

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

/// '#'-prefixed audit lines placed ahead of a CSV header.
inline std::string csv_preamble(const std::string& tool_version, std::uint64_t seed, const Constants& c,
                                double alpha, const std::map<std::string, std::string>& flags) {
    std::string out;
    out += "# tool_version=" + tool_version + "\n";
    out += "# seed=" + std::to_string(seed) + "\n";
    out += "# constants noise=" + format_real(c.noise) + " i0min=" + format_real(c.i0min) +
           " i0max=" + format_real(c.i0max) + " alpha=" + format_real(alpha) + "\n";
    out += "# std_definition=population\n";
    if (!flags.empty()) {
        out += "# flags";
        for (const auto& [k, v] : flags) out += " " + k + "=" + v;
        out += "\n";
    }
    return out;
}

}  // namespace detail

inline std::string report_csv(const TrialReport& r) {
    std::string out = detail::csv_preamble(r.tool_version, r.seed, r.constants, r.alpha, r.flags);
    out += kReportCsvHeader;
    out += "\n";
    out += detail::csv_field(r.graph) + "," + detail::csv_field(r.algo) + "," + std::to_string(r.trials) + "," +
           std::to_string(r.cycles) + "," + detail::format_real(r.mean_cut) + "," +
           detail::format_real(r.std_cut) + "," + detail::format_real(r.best_cut) + "," +
           detail::format_real(r.elapsed_s) + "\n";
    return out;
}

/// Companion per-trial table: trial,seed,cut.
inline std::string report_trials_csv(const TrialReport& r) {
    std::string out = detail::csv_preamble(r.tool_version, r.seed, r.constants, r.alpha, r.flags);
    out += "trial,seed,cut\n";
    for (std::size_t k = 0; k < r.cuts.size(); ++k)
        out += std::to_string(k) + "," + std::to_string(k < r.seeds.size() ? r.seeds[k] : 0) + "," +
               detail::format_real(r.cuts[k]) + "\n";
    return out;
}

/// Writes the report; CSV also writes `<stem>.trials.csv` next to it when
/// `with_trials` is set.
inline void write_report(const TrialReport& report, ReportFormat format, const std::filesystem::path& path,
                         bool with_trials = true) {
    if (format == ReportFormat::kJson) {
        detail::write_atomically(path, to_json(report).dump(2) + "\n");
        return;
    }
    detail::write_atomically(path, report_csv(report));
    if (with_trials) {
        std::filesystem::path companion = path;
        companion.replace_extension(".trials.csv");
        detail::write_atomically(companion, report_trials_csv(report));
    }
}

inline TrialReport read_report_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw MalformedInput(path.string() + ": " + e.what());
    }
    return trial_report_from_json(j);
}

// Search reports

struct SearchMeta {
    std::string graph;
    std::size_t cycles = 0;
    std::size_t eval_runs = 1;
    std::uint64_t seed = 0;
    SearchSpace space;
    double elapsed_s = 0.0;
    std::map<std::string, std::string> flags;
};

inline nlohmann::ordered_json to_json(const SearchReport& report, const SearchMeta& meta) {
    nlohmann::ordered_json j;
    j["tool_version"] = std::string(kToolVersion);
    j["graph"] = meta.graph;
    j["cycles"] = meta.cycles;
    j["eval_runs"] = meta.eval_runs;
    j["seed"] = meta.seed;
    j["trials"] = report.records.size();
    j["ranges"] = {{"n_rnd", {meta.space.n_rnd.lo, meta.space.n_rnd.hi}},
                   {"i0min", {meta.space.i0min.lo, meta.space.i0min.hi}},
                   {"i0max", {meta.space.i0max.lo, meta.space.i0max.hi}}};
    j["elapsed_s"] = meta.elapsed_s;
    j["flags"] = meta.flags;
    j["total_runs"] = report.total_runs;
    j["best_index"] = report.best_index;
    j["best_mean_cut"] = report.best_mean_cut;
    j["best"] = {{"n_rnd", report.best_params.n_rnd},
                 {"i0min", report.best_params.i0min},
                 {"i0max", report.best_params.i0max},
                 {"beta", report.best_params.beta}};
    auto records = nlohmann::ordered_json::array();
    for (const SearchRecord& r : report.records)
        records.push_back({{"n_rnd", r.n_rnd}, {"i0min", r.i0min}, {"i0max", r.i0max}, {"beta", r.beta}, {"mean_cut", r.mean_cut}});
    j["records"] = std::move(records);
    return j;
}

inline SearchReport search_report_from_json(const nlohmann::json& j, std::size_t cycles) {
    SearchReport report;
    try {
        for (const auto& r : j.at("records"))
            report.records.push_back({r.at("n_rnd").get<double>(), r.at("i0min").get<double>(),
                                      r.at("i0max").get<double>(), r.at("beta").get<double>(),
                                      r.at("mean_cut").get<double>()});
        report.best_index = j.at("best_index").get<std::size_t>();
        report.best_mean_cut = j.at("best_mean_cut").get<double>();
        report.total_runs = j.at("total_runs").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw MalformedInput(std::string("search report JSON: ") + e.what());
    }
    if (report.records.empty()) throw MalformedInput("search report has no records");
    report.best_params = params_from_record(report.records.at(report.best_index), cycles);
    return report;
}

inline std::string search_csv(const SearchReport& report, const SearchMeta& meta) {
    std::string out = detail::csv_preamble(std::string(kToolVersion), meta.seed, Constants{}, 0.0, meta.flags);
    out += "trial,n_rnd,i0min,i0max,beta,mean_cut,best\n";
    for (std::size_t k = 0; k < report.records.size(); ++k) {
        const SearchRecord& r = report.records[k];
        out += std::to_string(k) + "," + detail::format_real(r.n_rnd) + "," + detail::format_real(r.i0min) + "," +
               detail::format_real(r.i0max) + "," + detail::format_real(r.beta) + "," +
               detail::format_real(r.mean_cut) + "," + (k == report.best_index ? "1" : "0") + "\n";
    }
    return out;
}

inline void write_search_report(const SearchReport& report, const SearchMeta& meta, ReportFormat format,
                                const std::filesystem::path& path) {
    if (format == ReportFormat::kJson)
        detail::write_atomically(path, to_json(report, meta).dump(2) + "\n");
    else
        detail::write_atomically(path, search_csv(report, meta));
}

/// Per-cycle trace as CSV: t,control,energy.
inline void write_trace(const std::vector<TraceRecord>& trace, std::string_view control_name,
                        const std::filesystem::path& path) {
    std::string out = "t," + std::string(control_name) + ",energy\n";
    for (const TraceRecord& r : trace)
        out += std::to_string(r.t) + "," + detail::format_real(r.control) + "," + detail::format_real(r.energy) + "\n";
    detail::write_atomically(path, out);
}

}  // namespace ssa
