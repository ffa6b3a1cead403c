#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "generators.hpp"
#include "network.hpp"
#include "rng.hpp"

namespace sparenet {

enum class EnhancementStrategy { random_random, spare_only, unit_only, full };

inline const char* strategy_name(EnhancementStrategy s) {
    switch (s) {
        case EnhancementStrategy::random_random: return "rand-rand";
        case EnhancementStrategy::spare_only: return "spare-only";
        case EnhancementStrategy::unit_only: return "unit-only";
        case EnhancementStrategy::full: return "full";
    }
    throw std::logic_error("strategy_name: bad enum value");
}

inline EnhancementStrategy parse_strategy(const std::string& name) {
    if (name == "rand-rand") return EnhancementStrategy::random_random;
    if (name == "spare-only") return EnhancementStrategy::spare_only;
    if (name == "unit-only") return EnhancementStrategy::unit_only;
    if (name == "full") return EnhancementStrategy::full;
    throw std::invalid_argument("unknown strategy: " + name +
                                " (expected rand-rand, spare-only, unit-only, full)");
}

struct EdgeSuggestion {
    int unit = -1;
    int spare = -1;
    // Rankings actually evaluated for this suggestion; empty for sides chosen
    // at random.
    std::vector<int> unit_rank_trace;
    std::vector<int> spare_rank_trace;
};

// Live spares ordered most exploitable first: descending essentiality
// (infinite, i.e. unconstrained, spares first), then ascending degree d(s),
// then ascending index.
inline std::vector<int> rank_spares(const SystemState& state) {
    const SpareNetwork& net = state.topology();
    std::vector<std::tuple<DegreeValue, int, int>> keys;
    keys.reserve(static_cast<std::size_t>(net.spare_count()));
    for (int s = 0; s < net.spare_count(); ++s) {
        if (state.is_consumed(s)) continue;
        keys.emplace_back(essentiality(state, s), state.live_spare_degree(s), s);
    }
    std::sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
        if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
        return std::get<2>(a) < std::get<2>(b);
    });
    std::vector<int> order;
    order.reserve(keys.size());
    for (const auto& k : keys) order.push_back(std::get<2>(k));
    return order;
}

// Units ordered most vulnerable first: ascending live degree, then descending
// minimum spare-side degree in the live neighborhood, then ascending index.
inline std::vector<int> rank_units(const SystemState& state) {
    const SpareNetwork& net = state.topology();
    std::vector<std::tuple<int, DegreeValue, int>> keys;
    keys.reserve(static_cast<std::size_t>(net.unit_count()));
    for (int u = 0; u < net.unit_count(); ++u)
        keys.emplace_back(state.live_unit_degree(u), min_adjacent_degree(state, unit_node(u)), u);
    std::sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
        if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) > std::get<1>(b);
        return std::get<2>(a) < std::get<2>(b);
    });
    std::vector<int> order;
    order.reserve(keys.size());
    for (const auto& k : keys) order.push_back(std::get<2>(k));
    return order;
}

namespace detail {

inline std::int64_t free_cell_count(const SpareNetwork& net) {
    return static_cast<std::int64_t>(net.unit_count()) *
               static_cast<std::int64_t>(net.spare_count()) -
           static_cast<std::int64_t>(net.edge_count());
}

}  // namespace detail

// Picks one missing edge per the strategy. FULL scans units in rank order and,
// within a unit, spares in rank order, because unit choice outranks spare
// choice; the other strategies randomize the unranked side uniformly.
inline EdgeSuggestion suggest_edge(const SpareNetwork& net, EnhancementStrategy strategy,
                                   SplitMix64& rng) {
    const std::int64_t free_cells = detail::free_cell_count(net);
    if (free_cells <= 0)
        throw std::invalid_argument("suggest_edge: network is complete, no edge can be added");
    SystemState fresh(net);
    EdgeSuggestion out;

    switch (strategy) {
        case EnhancementStrategy::random_random: {
            std::int64_t pick = static_cast<std::int64_t>(
                rng.bounded(static_cast<std::uint64_t>(free_cells)));
            for (int u = 0; u < net.unit_count() && out.unit < 0; ++u) {
                const std::int64_t free_here = net.spare_count() - net.unit_degree(u);
                if (pick < free_here) {
                    for (int s = 0; s < net.spare_count(); ++s) {
                        if (net.has_edge(u, s)) continue;
                        if (pick-- == 0) {
                            out.unit = u;
                            out.spare = s;
                            break;
                        }
                    }
                } else {
                    pick -= free_here;
                }
            }
            break;
        }
        case EnhancementStrategy::spare_only: {
            out.spare_rank_trace = rank_spares(fresh);
            for (int s : out.spare_rank_trace) {
                std::vector<int> open_units;
                for (int u = 0; u < net.unit_count(); ++u)
                    if (!net.has_edge(u, s)) open_units.push_back(u);
                if (open_units.empty()) continue;
                out.spare = s;
                out.unit = open_units[static_cast<std::size_t>(
                    rng.bounded(open_units.size()))];
                break;
            }
            break;
        }
        case EnhancementStrategy::unit_only: {
            out.unit_rank_trace = rank_units(fresh);
            for (int u : out.unit_rank_trace) {
                std::vector<int> open_spares;
                for (int s = 0; s < net.spare_count(); ++s)
                    if (!net.has_edge(u, s)) open_spares.push_back(s);
                if (open_spares.empty()) continue;
                out.unit = u;
                out.spare = open_spares[static_cast<std::size_t>(
                    rng.bounded(open_spares.size()))];
                break;
            }
            break;
        }
        case EnhancementStrategy::full: {
            out.unit_rank_trace = rank_units(fresh);
            out.spare_rank_trace = rank_spares(fresh);
            for (int u : out.unit_rank_trace) {
                for (int s : out.spare_rank_trace) {
                    if (!net.has_edge(u, s)) {
                        out.unit = u;
                        out.spare = s;
                        break;
                    }
                }
                if (out.unit >= 0) break;
            }
            break;
        }
    }
    if (out.unit < 0 || out.spare < 0)
        throw std::logic_error("suggest_edge: no free cell found despite incomplete network");
    return out;
}

inline SpareNetwork add_edge(const SpareNetwork& net, int unit, int spare) {
    if (net.has_edge(unit, spare))
        throw std::invalid_argument("add_edge: (" + std::to_string(unit) + ", " +
                                    std::to_string(spare) + ") already present");
    auto edges = net.edges();
    edges.emplace_back(unit, spare);
    return SpareNetwork(net.unit_count(), net.spare_count(), edges);
}

// Adds k edges one at a time, re-ranking after every addition.
inline SpareNetwork enhance(const SpareNetwork& net, int k, EnhancementStrategy strategy,
                            std::uint64_t seed) {
    if (k < 0) throw std::invalid_argument("enhance: negative edge count");
    if (k > detail::free_cell_count(net))
        throw std::invalid_argument("enhance: " + std::to_string(k) +
                                    " additions requested but only " +
                                    std::to_string(detail::free_cell_count(net)) +
                                    " cells are free");
    SplitMix64 rng(seed);
    SpareNetwork current = net;
    for (int i = 0; i < k; ++i) {
        const EdgeSuggestion pick = suggest_edge(current, strategy, rng);
        current = add_edge(current, pick.unit, pick.spare);
    }
    return current;
}

// Mixed-construction network: m_random random edges, then m_selected edges
// added by the FULL criteria.
inline SpareNetwork build_spectrum(int n_units, int n_spares, int m_random, int m_selected,
                                   std::uint64_t seed) {
    if (m_random < 0 || m_selected < 0)
        throw std::invalid_argument("build_spectrum: negative edge count");
    const std::int64_t cells =
        static_cast<std::int64_t>(n_units) * static_cast<std::int64_t>(n_spares);
    if (static_cast<std::int64_t>(m_random) + static_cast<std::int64_t>(m_selected) > cells)
        throw std::invalid_argument("build_spectrum: " +
                                    std::to_string(m_random + m_selected) +
                                    " edges requested but the grid only has " +
                                    std::to_string(cells) + " cells");
    SpareNetwork base = generate_random(n_units, n_spares, m_random, derive_seed(seed, 0));
    return enhance(base, m_selected, EnhancementStrategy::full, derive_seed(seed, 1));
}

}  // namespace sparenet
