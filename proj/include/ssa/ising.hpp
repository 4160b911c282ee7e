#pragma once

// Ising problem representation, the MAX-CUT mapping and energy evaluation.
//
//   H(sigma) = - sum_i h_i sigma_i - sum_{i<j} J_ij sigma_i sigma_j
//
// Couplings are stored as a symmetric compressed-row structure, so both
// (i, j) and (j, i) appear and each row can be scanned on its own.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ssa/errors.hpp"

namespace ssa {

struct Edge {
    std::size_t u = 0;
    std::size_t v = 0;
    double w = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected weighted graph with 0-based node indices.
struct WeightedGraph {
    std::size_t n = 0;
    std::vector<Edge> edges;

    /// Throws MalformedInput on out-of-range indices, self-loops or repeated
    /// unordered pairs.
    void validate() const {
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        pairs.reserve(edges.size());
        for (const Edge& e : edges) {
            if (e.u >= n || e.v >= n)
                throw MalformedInput("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                                     ") out of range for n = " + std::to_string(n));
            if (e.u == e.v) throw MalformedInput("self-loop at node " + std::to_string(e.u));
            pairs.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
        }
        std::sort(pairs.begin(), pairs.end());
        const auto dup = std::adjacent_find(pairs.begin(), pairs.end());
        if (dup != pairs.end())
            throw MalformedInput("duplicate edge (" + std::to_string(dup->first) + ", " +
                                 std::to_string(dup->second) + ")");
    }

    double total_weight() const {
        double total = 0.0;
        for (const Edge& e : edges) total += e.w;
        return total;
    }

    friend bool operator==(const WeightedGraph&, const WeightedGraph&) = default;
};

/// A configuration sigma in {-1, +1}^n.
class SpinState {
public:
    SpinState() = default;

    explicit SpinState(std::size_t n, int value = 1) : spins_(n, checked(value)) {}

    SpinState(std::initializer_list<int> values) {
        spins_.reserve(values.size());
        for (int v : values) spins_.push_back(checked(v));
    }

    explicit SpinState(std::span<const int> values) {
        spins_.reserve(values.size());
        for (int v : values) spins_.push_back(checked(v));
    }

    std::size_t size() const { return spins_.size(); }
    int operator[](std::size_t i) const { return spins_[i]; }

    void set(std::size_t i, int value) { spins_[i] = checked(value); }
    void flip(std::size_t i) { spins_[i] = static_cast<std::int8_t>(-spins_[i]); }

    std::span<const std::int8_t> values() const { return spins_; }

    friend bool operator==(const SpinState&, const SpinState&) = default;

private:
    static std::int8_t checked(int v) {
        if (v != 1 && v != -1) throw MalformedInput("spin value must be -1 or +1, got " + std::to_string(v));
        return static_cast<std::int8_t>(v);
    }

    std::vector<std::int8_t> spins_;
};

struct Coupling {
    std::size_t i = 0;
    std::size_t j = 0;
    double value = 0.0;
};

/// Biases h and symmetric zero-diagonal couplings J.
class IsingModel {
public:
    struct Entry {
        std::uint32_t col;
        double value;
    };

    IsingModel() = default;

    /// `couplings` lists each unordered pair at most once; J_ji is implied.
    IsingModel(std::size_t n, std::vector<double> h, std::span<const Coupling> couplings)
        : n_(n), h_(std::move(h)) {
        if (h_.size() != n_)
            throw DimensionError("bias vector has length " + std::to_string(h_.size()) + ", expected " +
                                 std::to_string(n_));
        std::vector<std::size_t> degree(n_, 0);
        for (const Coupling& c : couplings) {
            if (c.i >= n_ || c.j >= n_)
                throw MalformedInput("coupling (" + std::to_string(c.i) + ", " + std::to_string(c.j) +
                                     ") out of range");
            if (c.i == c.j) throw MalformedInput("diagonal coupling at " + std::to_string(c.i));
            ++degree[c.i];
            ++degree[c.j];
        }
        offsets_.assign(n_ + 1, 0);
        for (std::size_t i = 0; i < n_; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
        entries_.resize(offsets_[n_]);
        std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
        for (const Coupling& c : couplings) {
            entries_[fill[c.i]++] = {static_cast<std::uint32_t>(c.j), c.value};
            entries_[fill[c.j]++] = {static_cast<std::uint32_t>(c.i), c.value};
        }
        for (std::size_t i = 0; i < n_; ++i) {
            auto first = entries_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
            auto last = entries_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
            std::sort(first, last, [](const Entry& a, const Entry& b) { return a.col < b.col; });
            const auto dup = std::adjacent_find(first, last, [](const Entry& a, const Entry& b) {
                return a.col == b.col;
            });
            if (dup != last)
                throw MalformedInput("duplicate coupling (" + std::to_string(std::min<std::size_t>(i, dup->col)) +
                                     ", " + std::to_string(std::max<std::size_t>(i, dup->col)) + ")");
        }
    }

    std::size_t size() const { return n_; }
    std::span<const double> h() const { return h_; }
    double h(std::size_t i) const { return h_[i]; }

    /// Nonzero-structure of row i, sorted by column.
    std::span<const Entry> row(std::size_t i) const {
        return {entries_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }

    /// J_ij, zero when absent.
    double coupling(std::size_t i, std::size_t j) const {
        const auto r = row(i);
        const auto it = std::lower_bound(r.begin(), r.end(), j,
                                         [](const Entry& e, std::size_t col) { return e.col < col; });
        return (it != r.end() && it->col == j) ? it->value : 0.0;
    }

    std::size_t stored_entries() const { return entries_.size(); }

    /// Copy with every J_ij (not h) multiplied by `factor`.
    IsingModel scaled_couplings(double factor) const {
        IsingModel copy = *this;
        for (Entry& e : copy.entries_) e.value *= factor;
        return copy;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> h_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Entry> entries_;
};

namespace detail {

inline void check_length(std::size_t expected, const SpinState& sigma) {
    if (sigma.size() != expected)
        throw DimensionError("spin state has length " + std::to_string(sigma.size()) + ", expected " +
                             std::to_string(expected));
}

inline void check_index(std::size_t n, std::size_t i) {
    if (i >= n) throw DimensionError("spin index " + std::to_string(i) + " out of range [0, " + std::to_string(n) + ")");
}

}  // namespace detail

/// h = 0 and J_ij = -w_ij: minimum energy is maximum cut.
inline IsingModel maxcut_to_ising(const WeightedGraph& graph) {
    graph.validate();
    std::vector<Coupling> couplings;
    couplings.reserve(graph.edges.size());
    for (const Edge& e : graph.edges) couplings.push_back({e.u, e.v, -e.w});
    return IsingModel(graph.n, std::vector<double>(graph.n, 0.0), couplings);
}

inline double energy(const IsingModel& model, const SpinState& sigma) {
    detail::check_length(model.size(), sigma);
    double bias = 0.0;
    double pair = 0.0;
    for (std::size_t i = 0; i < model.size(); ++i) {
        bias += model.h(i) * sigma[i];
        double row_sum = 0.0;
        for (const auto& e : model.row(i))
            if (e.col > i) row_sum += e.value * sigma[e.col];
        pair += sigma[i] * row_sum;
    }
    return -bias - pair;
}

/// h_i + sum_j J_ij sigma_j.
inline double local_field(const IsingModel& model, const SpinState& sigma, std::size_t i) {
    detail::check_length(model.size(), sigma);
    detail::check_index(model.size(), i);
    double field = model.h(i);
    for (const auto& e : model.row(i)) field += e.value * sigma[e.col];
    return field;
}

/// -h_i sigma_i - sum_j J_ij sigma_j sigma_i, i.e. -sigma_i * local_field.
inline double local_energy(const IsingModel& model, const SpinState& sigma, std::size_t i) {
    const double field = local_field(model, sigma, i);
    return -sigma[i] * field;
}

/// Sum of w over edges whose endpoints have different spins.
inline double cut_value(const WeightedGraph& graph, const SpinState& sigma) {
    detail::check_length(graph.n, sigma);
    double cut = 0.0;
    for (const Edge& e : graph.edges)
        if (sigma[e.u] != sigma[e.v]) cut += e.w;
    return cut;
}

}  // namespace ssa
