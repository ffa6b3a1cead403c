#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "network.hpp"
#include "rng.hpp"

namespace sparenet {

// Uniform random topology: n_edges cells drawn without replacement from the
// n_units x n_spares grid, via a partial Fisher-Yates shuffle of cell ids.
inline SpareNetwork generate_random(int n_units, int n_spares, int n_edges,
                                    std::uint64_t seed) {
    if (n_units < 1) throw std::invalid_argument("generate_random: need at least one unit");
    if (n_spares < 0) throw std::invalid_argument("generate_random: negative spare count");
    if (n_edges < 0) throw std::invalid_argument("generate_random: negative edge count");
    const std::int64_t cells =
        static_cast<std::int64_t>(n_units) * static_cast<std::int64_t>(n_spares);
    if (n_edges > cells)
        throw std::invalid_argument("generate_random: " + std::to_string(n_edges) +
                                    " edges requested but the grid only has " +
                                    std::to_string(cells) + " cells");

    std::vector<std::int64_t> ids(static_cast<std::size_t>(cells));
    std::iota(ids.begin(), ids.end(), std::int64_t{0});
    SplitMix64 rng(seed);
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(n_edges));
    for (int k = 0; k < n_edges; ++k) {
        const std::uint64_t remaining = static_cast<std::uint64_t>(cells - k);
        const std::size_t j = static_cast<std::size_t>(k) +
                              static_cast<std::size_t>(rng.bounded(remaining));
        std::swap(ids[static_cast<std::size_t>(k)], ids[j]);
        const std::int64_t id = ids[static_cast<std::size_t>(k)];
        edges.emplace_back(static_cast<int>(id / n_spares), static_cast<int>(id % n_spares));
    }
    return SpareNetwork(n_units, n_spares, edges);
}

// Near-regular deterministic topology. Edge k nominally joins unit k mod
// n_units with spare k mod n_spares; when that cell is taken, the spare index
// advances cyclically to the first spare still free for the unit. Both sides
// end up with degree spread at most one whenever gcd-induced collisions allow.
inline SpareNetwork generate_balanced_ring(int n_units, int n_spares, int n_edges) {
    if (n_units < 1) throw std::invalid_argument("generate_balanced_ring: need at least one unit");
    if (n_spares < 0) throw std::invalid_argument("generate_balanced_ring: negative spare count");
    if (n_edges < 0) throw std::invalid_argument("generate_balanced_ring: negative edge count");
    const std::int64_t cells =
        static_cast<std::int64_t>(n_units) * static_cast<std::int64_t>(n_spares);
    if (n_edges > cells)
        throw std::invalid_argument("generate_balanced_ring: " + std::to_string(n_edges) +
                                    " edges requested but the grid only has " +
                                    std::to_string(cells) + " cells");

    std::vector<char> taken(static_cast<std::size_t>(cells), 0);
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(n_edges));
    for (int k = 0; k < n_edges; ++k) {
        const int u = k % n_units;
        int s = k % n_spares;
        // The unit has a free cell: its degree so far is at most
        // ceil(k / n_units) <= n_edges / n_units <= n_spares.
        while (taken[static_cast<std::size_t>(u) * static_cast<std::size_t>(n_spares) +
                     static_cast<std::size_t>(s)]) {
            s = (s + 1) % n_spares;
        }
        taken[static_cast<std::size_t>(u) * static_cast<std::size_t>(n_spares) +
              static_cast<std::size_t>(s)] = 1;
        edges.emplace_back(u, s);
    }
    return SpareNetwork(n_units, n_spares, edges);
}

}  // namespace sparenet
