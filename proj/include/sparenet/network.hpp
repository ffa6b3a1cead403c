#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sparenet {

// A degree-like quantity: a non-negative count, or infinity. Infinity is the
// minimum over an empty node set and compares greater than every finite value.
class DegreeValue {
public:
    constexpr DegreeValue() : raw_(0) {}

    static constexpr DegreeValue finite(std::int64_t v) {
        if (v < 0) throw std::invalid_argument("DegreeValue: negative degree");
        return DegreeValue(v);
    }

    static constexpr DegreeValue infinity() { return DegreeValue(kInfinity); }

    constexpr bool is_infinite() const { return raw_ == kInfinity; }

    constexpr std::int64_t value() const {
        if (is_infinite()) throw std::logic_error("DegreeValue: value() of infinity");
        return raw_;
    }

    friend constexpr auto operator<=>(DegreeValue a, DegreeValue b) = default;

private:
    static constexpr std::int64_t kInfinity = INT64_MAX;
    constexpr explicit DegreeValue(std::int64_t raw) : raw_(raw) {}
    std::int64_t raw_;
};

enum class Side { unit, spare };

// Tagged node reference into one side of the bipartition.
struct NodeId {
    Side side;
    int index;

    friend constexpr bool operator==(NodeId, NodeId) = default;
};

constexpr NodeId unit_node(int i) { return NodeId{Side::unit, i}; }
constexpr NodeId spare_node(int i) { return NodeId{Side::spare, i}; }

// Immutable bipartite spare-sharing topology: functional units on one side,
// spare units on the other, an edge (u, s) meaning spare s can replace unit u.
// Safe to share across threads after construction.
class SpareNetwork {
public:
    SpareNetwork(int n_units, int n_spares,
                 const std::vector<std::pair<int, int>>& edge_list)
        : n_units_(n_units), n_spares_(n_spares) {
        if (n_units < 1) throw std::invalid_argument("SpareNetwork: need at least one functional unit");
        if (n_spares < 0) throw std::invalid_argument("SpareNetwork: negative spare count");
        unit_adj_.resize(static_cast<std::size_t>(n_units));
        spare_adj_.resize(static_cast<std::size_t>(n_spares));
        for (const auto& [u, s] : edge_list) {
            if (u < 0 || u >= n_units)
                throw std::out_of_range("SpareNetwork: edge (" + std::to_string(u) + ", " +
                                        std::to_string(s) + "): unit index out of range");
            if (s < 0 || s >= n_spares)
                throw std::out_of_range("SpareNetwork: edge (" + std::to_string(u) + ", " +
                                        std::to_string(s) + "): spare index out of range");
            unit_adj_[static_cast<std::size_t>(u)].push_back(s);
        }
        for (auto& adj : unit_adj_) {
            std::sort(adj.begin(), adj.end());
            adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
        }
        n_edges_ = 0;
        for (int u = 0; u < n_units; ++u) {
            for (int s : unit_adj_[static_cast<std::size_t>(u)]) {
                spare_adj_[static_cast<std::size_t>(s)].push_back(u);
            }
            n_edges_ += static_cast<int>(unit_adj_[static_cast<std::size_t>(u)].size());
        }
    }

    int unit_count() const { return n_units_; }
    int spare_count() const { return n_spares_; }
    int edge_count() const { return n_edges_; }

    const std::vector<int>& unit_adj(int u) const {
        check_unit(u);
        return unit_adj_[static_cast<std::size_t>(u)];
    }

    const std::vector<int>& spare_adj(int s) const {
        check_spare(s);
        return spare_adj_[static_cast<std::size_t>(s)];
    }

    int unit_degree(int u) const { return static_cast<int>(unit_adj(u).size()); }
    int spare_degree(int s) const { return static_cast<int>(spare_adj(s).size()); }

    bool has_edge(int u, int s) const {
        check_unit(u);
        check_spare(s);
        const auto& adj = unit_adj_[static_cast<std::size_t>(u)];
        return std::binary_search(adj.begin(), adj.end(), s);
    }

    // Edge set in ascending (unit, spare) order.
    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        out.reserve(static_cast<std::size_t>(n_edges_));
        for (int u = 0; u < n_units_; ++u)
            for (int s : unit_adj_[static_cast<std::size_t>(u)]) out.emplace_back(u, s);
        return out;
    }

    void check_unit(int u) const {
        if (u < 0 || u >= n_units_)
            throw std::out_of_range("SpareNetwork: unit index " + std::to_string(u) + " out of range");
    }

    void check_spare(int s) const {
        if (s < 0 || s >= n_spares_)
            throw std::out_of_range("SpareNetwork: spare index " + std::to_string(s) + " out of range");
    }

    friend bool operator==(const SpareNetwork&, const SpareNetwork&) = default;

private:
    int n_units_;
    int n_spares_;
    int n_edges_ = 0;
    std::vector<std::vector<int>> unit_adj_;
    std::vector<std::vector<int>> spare_adj_;
};

inline SpareNetwork make_network(int n_units, int n_spares,
                                 const std::vector<std::pair<int, int>>& edges) {
    return SpareNetwork(n_units, n_spares, edges);
}

// The four-unit, three-spare running example used throughout the docs and
// tests: u0-s0, u1-s0, u1-s1, u2-s1, u3-s1, u3-s2.
inline SpareNetwork reference_network() {
    return SpareNetwork(4, 3, {{0, 0}, {1, 0}, {1, 1}, {2, 1}, {3, 1}, {3, 2}});
}

// Mutable run-time view of a network under repair. Consuming a spare removes
// it with all of its edges; units always stay in the graph. Single-owner:
// never share one instance across threads.
class SystemState {
public:
    explicit SystemState(const SpareNetwork& net) : net_(&net) { init(); }

    const SpareNetwork& topology() const { return *net_; }

    bool is_consumed(int s) const {
        net_->check_spare(s);
        return consumed_[static_cast<std::size_t>(s)] != 0;
    }

    int consumed_count() const { return consumed_count_; }

    int live_unit_degree(int u) const {
        net_->check_unit(u);
        return live_unit_deg_[static_cast<std::size_t>(u)];
    }

    int live_spare_degree(int s) const {
        net_->check_spare(s);
        return consumed_[static_cast<std::size_t>(s)] ? 0 : net_->spare_degree(s);
    }

    // Live neighbors in ascending index order.
    std::vector<int> live_unit_neighbors(int u) const {
        std::vector<int> out;
        for (int s : net_->unit_adj(u))
            if (!consumed_[static_cast<std::size_t>(s)]) out.push_back(s);
        return out;
    }

    std::vector<int> live_spare_neighbors(int s) const {
        net_->check_spare(s);
        if (consumed_[static_cast<std::size_t>(s)]) return {};
        return net_->spare_adj(s);
    }

    int fault_count(int u) const {
        net_->check_unit(u);
        return fault_counts_[static_cast<std::size_t>(u)];
    }

    const std::vector<int>& fault_counts() const { return fault_counts_; }

    int total_faults() const { return consumed_count_; }

    // Repair a fault at `unit` with `spare`: the spare is consumed together
    // with all of its edges, and the unit is fault-free again.
    void apply_repair(int unit, int spare) {
        if (!net_->has_edge(unit, spare) || consumed_[static_cast<std::size_t>(spare)])
            throw std::invalid_argument("apply_repair: spare " + std::to_string(spare) +
                                        " is not a live neighbor of unit " + std::to_string(unit));
        consumed_[static_cast<std::size_t>(spare)] = 1;
        ++consumed_count_;
        for (int u : net_->spare_adj(spare)) --live_unit_deg_[static_cast<std::size_t>(u)];
        ++fault_counts_[static_cast<std::size_t>(unit)];
    }

    // Exact inverse of the matching apply_repair call.
    void undo_repair(int unit, int spare) {
        net_->check_unit(unit);
        net_->check_spare(spare);
        if (!consumed_[static_cast<std::size_t>(spare)] ||
            fault_counts_[static_cast<std::size_t>(unit)] <= 0)
            throw std::invalid_argument("undo_repair: no matching repair to undo");
        consumed_[static_cast<std::size_t>(spare)] = 0;
        --consumed_count_;
        for (int u : net_->spare_adj(spare)) ++live_unit_deg_[static_cast<std::size_t>(u)];
        --fault_counts_[static_cast<std::size_t>(unit)];
    }

    void reset() {
        std::fill(consumed_.begin(), consumed_.end(), 0);
        std::fill(fault_counts_.begin(), fault_counts_.end(), 0);
        for (int u = 0; u < net_->unit_count(); ++u)
            live_unit_deg_[static_cast<std::size_t>(u)] = net_->unit_degree(u);
        consumed_count_ = 0;
    }

private:
    void init() {
        consumed_.assign(static_cast<std::size_t>(net_->spare_count()), 0);
        fault_counts_.assign(static_cast<std::size_t>(net_->unit_count()), 0);
        live_unit_deg_.resize(static_cast<std::size_t>(net_->unit_count()));
        for (int u = 0; u < net_->unit_count(); ++u)
            live_unit_deg_[static_cast<std::size_t>(u)] = net_->unit_degree(u);
        consumed_count_ = 0;
    }

    const SpareNetwork* net_;
    std::vector<char> consumed_;
    std::vector<int> live_unit_deg_;
    std::vector<int> fault_counts_;
    int consumed_count_ = 0;
};

inline DegreeValue live_degree(const SystemState& state, NodeId node) {
    if (node.side == Side::unit)
        return DegreeValue::finite(state.live_unit_degree(node.index));
    return DegreeValue::finite(state.live_spare_degree(node.index));
}

// Adjacency over live edges, ascending index order on the opposite side.
inline std::vector<NodeId> neighbors(const SystemState& state, NodeId node) {
    std::vector<NodeId> out;
    if (node.side == Side::unit) {
        for (int s : state.live_unit_neighbors(node.index)) out.push_back(spare_node(s));
    } else {
        for (int u : state.live_spare_neighbors(node.index)) out.push_back(unit_node(u));
    }
    return out;
}

// Minimum live degree over a node set; infinity for the empty set. All nodes
// must lie on the same side of the bipartition.
inline DegreeValue min_deg(const SystemState& state, std::span<const NodeId> nodes) {
    DegreeValue best = DegreeValue::infinity();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].side != nodes[0].side)
            throw std::invalid_argument("min_deg: mixed-side node set");
        best = std::min(best, live_degree(state, nodes[i]));
    }
    return best;
}

inline DegreeValue min_unit_degree(const SystemState& state) {
    DegreeValue best = DegreeValue::infinity();
    for (int u = 0; u < state.topology().unit_count(); ++u)
        best = std::min(best, DegreeValue::finite(state.live_unit_degree(u)));
    return best;
}

// Minimum live degree among a node's live neighbors, optionally leaving one
// opposite-side index out; infinity when the (remaining) neighborhood is empty.
inline DegreeValue min_adjacent_degree(const SystemState& state, NodeId node,
                                       std::optional<int> excluded = std::nullopt) {
    DegreeValue best = DegreeValue::infinity();
    if (node.side == Side::spare) {
        if (state.is_consumed(node.index)) return best;
        for (int u : state.topology().spare_adj(node.index)) {
            if (excluded && *excluded == u) continue;
            best = std::min(best, DegreeValue::finite(state.live_unit_degree(u)));
        }
    } else {
        for (int s : state.topology().unit_adj(node.index)) {
            if (state.is_consumed(s)) continue;
            if (excluded && *excluded == s) continue;
            best = std::min(best, DegreeValue::finite(state.live_spare_degree(s)));
        }
    }
    return best;
}

// Essentiality of a live spare: the live degree of the weakest functional
// unit in its neighborhood (smaller = more essential). `excluded_unit` leaves
// the currently faulty unit out of the neighborhood.
inline DegreeValue essentiality(const SystemState& state, int spare,
                                std::optional<int> excluded_unit = std::nullopt) {
    if (state.is_consumed(spare))
        throw std::invalid_argument("essentiality: spare " + std::to_string(spare) +
                                    " is already consumed");
    return min_adjacent_degree(state, spare_node(spare), excluded_unit);
}

}  // namespace sparenet
