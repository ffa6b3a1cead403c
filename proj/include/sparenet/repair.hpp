#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "matching.hpp"
#include "network.hpp"
#include "policy.hpp"
#include "rng.hpp"

namespace sparenet {

// Ordered fault pattern: slots[k] is the functional slot hit by the k-th
// fault. Repeats allowed; a repeat means the spare covering that slot failed.
struct FaultSequence {
    std::vector<int> slots;
};

struct RunOutcome {
    bool survived = false;
    std::optional<int> failed_at_step;  // 1-based
    std::vector<Decision> decisions;
    int ties_seen = 0;
};

inline void validate_sequence(const SpareNetwork& net, const FaultSequence& seq) {
    for (int u : seq.slots) net.check_unit(u);
}

// Plays the fault sequence against a fresh state, selecting a spare per fault
// under the policy. Stops at the first fault whose slot has no live spare.
// Deterministic per (seed, policy).
inline RunOutcome run_sequence(const SpareNetwork& net, const FaultSequence& seq,
                               const Policy& policy, std::uint64_t seed) {
    validate_sequence(net, seq);
    SystemState state(net);
    SplitMix64 rng(seed);
    RunOutcome out;
    out.decisions.reserve(seq.slots.size());
    for (std::size_t k = 0; k < seq.slots.size(); ++k) {
        const int unit = seq.slots[k];
        if (state.live_unit_degree(unit) == 0) {
            out.survived = false;
            out.failed_at_step = static_cast<int>(k) + 1;
            return out;
        }
        Decision d = select_spare(state, unit, policy, rng);
        state.apply_repair(unit, d.chosen_spare);
        out.ties_seen += d.tie_after_primary ? 1 : 0;
        out.decisions.push_back(std::move(d));
    }
    out.survived = true;
    return out;
}

// Replays a fixed spare assignment instead of a policy: spares[k] repairs the
// k-th fault. An entry is only consulted when the slot still has live spares;
// it must then name one of them. -1 marks entries expected to be unreachable.
inline RunOutcome run_sequence_scripted(const SpareNetwork& net, const FaultSequence& seq,
                                        std::span<const int> spares) {
    validate_sequence(net, seq);
    if (spares.size() != seq.slots.size())
        throw std::invalid_argument("run_sequence_scripted: script length " +
                                    std::to_string(spares.size()) + " does not match " +
                                    std::to_string(seq.slots.size()) + " faults");
    SystemState state(net);
    RunOutcome out;
    out.decisions.reserve(seq.slots.size());
    for (std::size_t k = 0; k < seq.slots.size(); ++k) {
        const int unit = seq.slots[k];
        Decision d;
        d.faulty_unit = unit;
        d.candidates = state.live_unit_neighbors(unit);
        if (d.candidates.empty()) {
            out.survived = false;
            out.failed_at_step = static_cast<int>(k) + 1;
            return out;
        }
        const int spare = spares[k];
        if (spare < 0 || !net.has_edge(unit, spare) || state.is_consumed(spare))
            throw std::invalid_argument("run_sequence_scripted: step " + std::to_string(k + 1) +
                                        ": spare " + std::to_string(spare) +
                                        " is not a live neighbor of unit " + std::to_string(unit));
        d.chosen_spare = spare;
        state.apply_repair(unit, spare);
        out.decisions.push_back(std::move(d));
    }
    out.survived = true;
    return out;
}

// Offline repairability of a fault tally: true iff each fault occurrence can
// be assigned a distinct spare adjacent to its slot in the original topology.
// Order never matters: any feasible assignment can be replayed in sequence
// order because assigned spares are pairwise distinct.
inline bool is_globally_repairable(const SpareNetwork& net, const std::vector<int>& fault_counts) {
    if (static_cast<int>(fault_counts.size()) != net.unit_count())
        throw std::invalid_argument("is_globally_repairable: tally size " +
                                    std::to_string(fault_counts.size()) + " does not match " +
                                    std::to_string(net.unit_count()) + " units");
    std::int64_t total = 0;
    for (std::size_t u = 0; u < fault_counts.size(); ++u) {
        if (fault_counts[u] < 0)
            throw std::invalid_argument("is_globally_repairable: negative tally for unit " +
                                        std::to_string(u));
        total += fault_counts[u];
    }
    if (total > net.spare_count()) return false;
    std::vector<std::vector<int>> left_adj;
    left_adj.reserve(static_cast<std::size_t>(total));
    for (int u = 0; u < net.unit_count(); ++u)
        for (int k = 0; k < fault_counts[static_cast<std::size_t>(u)]; ++k)
            left_adj.push_back(net.unit_adj(u));
    return max_bipartite_matching(left_adj, net.spare_count()) == static_cast<int>(total);
}

}  // namespace sparenet
