#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "network.hpp"
#include "rng.hpp"

namespace sparenet {

enum class PolicyKind { random, pe, pp, pe_pp, pp_pe };
enum class TieBreak { seeded_random, lowest_index };

struct Policy {
    PolicyKind kind = PolicyKind::pe_pp;
    TieBreak tie_break = TieBreak::seeded_random;
    // PE rates a spare by the weakest unit it still protects; the unit being
    // repaired right now is about to be fault-free either way, so it is left
    // out of that neighborhood unless this flag is cleared.
    bool essentiality_excludes_faulty = true;
};

inline const char* policy_kind_name(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::random: return "random";
        case PolicyKind::pe: return "pe";
        case PolicyKind::pp: return "pp";
        case PolicyKind::pe_pp: return "pe+pp";
        case PolicyKind::pp_pe: return "pp+pe";
    }
    throw std::logic_error("policy_kind_name: bad enum value");
}

inline PolicyKind parse_policy_kind(const std::string& name) {
    if (name == "random") return PolicyKind::random;
    if (name == "pe") return PolicyKind::pe;
    if (name == "pp") return PolicyKind::pp;
    if (name == "pe+pp") return PolicyKind::pe_pp;
    if (name == "pp+pe") return PolicyKind::pp_pe;
    throw std::invalid_argument("unknown policy: " + name +
                                " (expected random, pe, pp, pe+pp, pp+pe)");
}

inline const char* tie_break_name(TieBreak mode) {
    return mode == TieBreak::seeded_random ? "seeded" : "lowest";
}

inline TieBreak parse_tie_break(const std::string& name) {
    if (name == "seeded") return TieBreak::seeded_random;
    if (name == "lowest") return TieBreak::lowest_index;
    throw std::invalid_argument("unknown tie-break mode: " + name + " (expected seeded or lowest)");
}

// One recorded spare choice. candidates is the full live neighborhood of the
// faulty unit at decision time; the tie flags cover only the ranking stages
// the policy actually evaluated.
struct Decision {
    int faulty_unit = -1;
    int chosen_spare = -1;
    std::vector<int> candidates;
    bool tie_after_primary = false;
    bool tie_after_secondary = false;
};

// A fault struck a unit whose live neighborhood is empty.
struct ImmediateReplacementFailure : std::runtime_error {
    int unit;
    explicit ImmediateReplacementFailure(int u)
        : std::runtime_error("no live spare can replace unit " + std::to_string(u)), unit(u) {}
};

// Live neighborhood of a unit in ascending spare order.
inline std::vector<int> candidate_spares(const SystemState& state, int unit) {
    return state.live_unit_neighbors(unit);
}

namespace detail {

// In-place compaction of `cand` to the entries with the best score under
// `better`. Keeps ascending order.
template <typename ScoreFn, typename Better>
inline void keep_best(std::vector<int>& cand, ScoreFn score, Better better) {
    auto best = score(cand[0]);
    std::size_t kept = 1;
    for (std::size_t i = 1; i < cand.size(); ++i) {
        auto sc = score(cand[i]);
        if (better(sc, best)) {
            best = sc;
            cand[0] = cand[i];
            kept = 1;
        } else if (!better(best, sc)) {
            cand[kept++] = cand[i];
        }
    }
    cand.resize(kept);
}

inline void stage_pe(const SystemState& state, int unit, const Policy& policy,
                     std::vector<int>& cand) {
    std::optional<int> excluded;
    if (policy.essentiality_excludes_faulty) excluded = unit;
    keep_best(
        cand, [&](int s) { return essentiality(state, s, excluded); },
        [](DegreeValue a, DegreeValue b) { return a > b; });
}

inline void stage_pp(const SystemState& state, std::vector<int>& cand) {
    keep_best(
        cand, [&](int s) { return state.live_spare_degree(s); },
        [](int a, int b) { return a < b; });
}

// Runs the policy's ranking stages over the non-empty candidate list and
// resolves the final tie. Mutates `cand` down to the stage survivors.
inline int resolve_choice(const SystemState& state, int unit, const Policy& policy,
                          SplitMix64& rng, std::vector<int>& cand, bool& tie_primary,
                          bool& tie_secondary) {
    tie_primary = false;
    tie_secondary = false;
    const PolicyKind kind = policy.kind;
    if (kind != PolicyKind::random) {
        if (kind == PolicyKind::pe || kind == PolicyKind::pe_pp)
            stage_pe(state, unit, policy, cand);
        else
            stage_pp(state, cand);
        tie_primary = cand.size() > 1;
        if (tie_primary && (kind == PolicyKind::pe_pp || kind == PolicyKind::pp_pe)) {
            if (kind == PolicyKind::pe_pp)
                stage_pp(state, cand);
            else
                stage_pe(state, unit, policy, cand);
            tie_secondary = cand.size() > 1;
        }
    }
    if (cand.size() == 1 || policy.tie_break == TieBreak::lowest_index) return cand.front();
    return cand[static_cast<std::size_t>(rng.bounded(cand.size()))];
}

// Allocation-free variant for simulation inner loops. Returns -1 when the
// unit has no live neighbor. tie_primary, when given, reports a survivor tie
// after the first ranking stage.
inline int pick_spare(const SystemState& state, int unit, const Policy& policy,
                      SplitMix64& rng, std::vector<int>& scratch,
                      bool* tie_primary = nullptr) {
    scratch.clear();
    for (int s : state.topology().unit_adj(unit))
        if (!state.is_consumed(s)) scratch.push_back(s);
    if (scratch.empty()) {
        if (tie_primary) *tie_primary = false;
        return -1;
    }
    bool t1 = false;
    bool t2 = false;
    const int chosen = resolve_choice(state, unit, policy, rng, scratch, t1, t2);
    if (tie_primary) *tie_primary = t1;
    return chosen;
}

}  // namespace detail

// Applies the policy to one fault at `unit` and reports the choice together
// with the candidate set and tie flags. Throws ImmediateReplacementFailure
// when no live spare is adjacent. With LOWEST_INDEX tie-breaking the result
// is a pure function of the state and `rng` is never drawn from.
inline Decision select_spare(const SystemState& state, int unit, const Policy& policy,
                             SplitMix64& rng) {
    state.topology().check_unit(unit);
    Decision d;
    d.faulty_unit = unit;
    d.candidates = state.live_unit_neighbors(unit);
    if (d.candidates.empty()) throw ImmediateReplacementFailure(unit);
    std::vector<int> cand = d.candidates;
    d.chosen_spare = detail::resolve_choice(state, unit, policy, rng, cand,
                                            d.tie_after_primary, d.tie_after_secondary);
    return d;
}

}  // namespace sparenet
