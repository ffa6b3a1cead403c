#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "network.hpp"
#include "policy.hpp"
#include "repair.hpp"
#include "rng.hpp"

namespace sparenet {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

enum class CurveEstimator { mc_policy, exact_policy, exact_offline };

inline const char* estimator_name(CurveEstimator e) {
    switch (e) {
        case CurveEstimator::mc_policy: return "mc_policy";
        case CurveEstimator::exact_policy: return "exact_policy";
        case CurveEstimator::exact_offline: return "exact_offline";
    }
    throw std::logic_error("estimator_name: bad enum value");
}

struct CurvePoint {
    int faults = 0;
    double repairability = 0.0;
    double ci_half_width = 0.0;
    std::uint64_t trials = 0;
};

// Repairability by fault count, f consecutive from 0. Always starts at 1,
// never increases, and is 0 for every f beyond the spare count.
struct Curve {
    CurveEstimator estimator = CurveEstimator::mc_policy;
    std::vector<CurvePoint> points;

    int max_faults() const { return static_cast<int>(points.size()) - 1; }

    double at(int f) const {
        if (f < 0 || f > max_faults())
            throw std::out_of_range("Curve::at: f=" + std::to_string(f) +
                                    " outside [0, " + std::to_string(max_faults()) + "]");
        return points[static_cast<std::size_t>(f)].repairability;
    }
};

struct BudgetExceeded : std::runtime_error {
    std::uint64_t required;
    BudgetExceeded(std::uint64_t required_count, std::uint64_t budget)
        : std::runtime_error("enumeration requires " + std::to_string(required_count) +
                             " nodes but the budget is " + std::to_string(budget)),
          required(required_count) {}
};

struct McStats {
    std::uint64_t decisions = 0;
    std::uint64_t tie_decisions = 0;
};

namespace detail {

using u128 = unsigned __int128;

inline u128 checked_mul(u128 a, u128 b) {
    u128 r = 0;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("exact enumeration exceeds 128-bit arithmetic");
    return r;
}

inline u128 checked_add(u128 a, u128 b) {
    u128 r = 0;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("exact enumeration exceeds 128-bit arithmetic");
    return r;
}

inline double ratio(u128 num, u128 den) {
    if (num == 0) return 0.0;
    if (num == den) return 1.0;
    return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

// C(n, k) with saturation at cap; used only for budget prechecks.
inline std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    u128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > cap) return UINT64_MAX;
    }
    return static_cast<std::uint64_t>(r);
}

struct McAccumulator {
    std::vector<std::uint64_t> survival_hist;  // index = survival time T
    std::uint64_t decisions = 0;
    std::uint64_t tie_decisions = 0;

    explicit McAccumulator(int f_max)
        : survival_hist(static_cast<std::size_t>(f_max) + 1, 0) {}
};

inline void run_mc_trials(const SpareNetwork& net, const Policy& policy, int f_max,
                          std::uint64_t seed, std::uint64_t t_begin, std::uint64_t t_end,
                          McAccumulator& acc) {
    const int n_units = net.unit_count();
    SystemState state(net);
    std::vector<int> scratch;
    for (std::uint64_t t = t_begin; t < t_end; ++t) {
        state.reset();
        SplitMix64 rng(derive_seed(seed, t));
        int survival = f_max;
        for (int step = 0; step < f_max; ++step) {
            const int unit = rng.bounded_int(n_units);
            bool tie = false;
            const int spare = pick_spare(state, unit, policy, rng, scratch, &tie);
            if (spare < 0) {
                survival = step;
                break;
            }
            state.apply_repair(unit, spare);
            ++acc.decisions;
            acc.tie_decisions += tie ? 1 : 0;
        }
        ++acc.survival_hist[static_cast<std::size_t>(survival)];
    }
}

}  // namespace detail

// Monte Carlo repairability curve: `trials` sequences of f_max uniform slot
// draws, survival time recorded per trajectory, repairability(f) = fraction
// of trajectories surviving at least f faults. Each trial runs on its own
// derived seed, so the result is bit-identical for any worker count.
inline Curve estimate_curve_mc(const SpareNetwork& net, const Policy& policy, int f_max,
                               std::uint64_t trials, std::uint64_t seed, int workers = 1,
                               McStats* stats = nullptr) {
    if (f_max < 0) throw std::invalid_argument("estimate_curve_mc: negative f_max");
    if (trials < 1) throw std::invalid_argument("estimate_curve_mc: need at least one trial");

    detail::McAccumulator total(f_max);
    const std::uint64_t n_workers =
        std::min<std::uint64_t>(std::max(workers, 1), std::max<std::uint64_t>(trials / 1024, 1));
    if (n_workers <= 1) {
        detail::run_mc_trials(net, policy, f_max, seed, 0, trials, total);
    } else {
        constexpr std::uint64_t kChunk = 1024;
        std::atomic<std::uint64_t> next_chunk{0};
        std::vector<detail::McAccumulator> parts(n_workers, detail::McAccumulator(f_max));
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (std::uint64_t w = 0; w < n_workers; ++w) {
            pool.emplace_back([&, w] {
                for (;;) {
                    const std::uint64_t lo = next_chunk.fetch_add(1) * kChunk;
                    if (lo >= trials) break;
                    detail::run_mc_trials(net, policy, f_max, seed, lo,
                                          std::min(trials, lo + kChunk), parts[w]);
                }
            });
        }
        for (auto& th : pool) th.join();
        // Integer merges commute, so scheduling cannot change the totals.
        for (const auto& part : parts) {
            for (std::size_t i = 0; i < total.survival_hist.size(); ++i)
                total.survival_hist[i] += part.survival_hist[i];
            total.decisions += part.decisions;
            total.tie_decisions += part.tie_decisions;
        }
    }
    if (stats) {
        stats->decisions = total.decisions;
        stats->tie_decisions = total.tie_decisions;
    }

    Curve curve;
    curve.estimator = CurveEstimator::mc_policy;
    curve.points.resize(static_cast<std::size_t>(f_max) + 1);
    std::uint64_t at_least = 0;
    for (int f = f_max; f >= 0; --f) {
        at_least += total.survival_hist[static_cast<std::size_t>(f)];
        const double p = static_cast<double>(at_least) / static_cast<double>(trials);
        CurvePoint& pt = curve.points[static_cast<std::size_t>(f)];
        pt.faults = f;
        pt.repairability = p;
        pt.ci_half_width = 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
        pt.trials = trials;
    }
    return curve;
}

namespace detail {

// Saturating n^f for budget prechecks.
inline std::uint64_t pow_capped(std::uint64_t n, int f, std::uint64_t cap) {
    u128 r = 1;
    for (int i = 0; i < f; ++i) {
        r *= n;
        if (r > cap) return UINT64_MAX;
    }
    return static_cast<std::uint64_t>(r);
}

}  // namespace detail

// Exhaustive policy curve: walks the full |N_U|^f_max sequence tree once,
// sharing prefixes, and counts surviving prefixes per depth. Requires a
// deterministic policy, hence lowest-index tie-breaking.
inline Curve exact_curve_policy(const SpareNetwork& net, const Policy& policy, int f_max,
                                std::uint64_t budget = kDefaultEnumerationBudget) {
    if (f_max < 0) throw std::invalid_argument("exact_curve_policy: negative f_max");
    if (policy.tie_break != TieBreak::lowest_index)
        throw std::invalid_argument("exact_curve_policy: policy must use lowest-index tie-breaking");
    const int n = net.unit_count();
    const std::uint64_t required = detail::pow_capped(static_cast<std::uint64_t>(n), f_max, budget);
    if (required == UINT64_MAX || required > budget) throw BudgetExceeded(required, budget);

    std::vector<std::uint64_t> surviving(static_cast<std::size_t>(f_max) + 1, 0);
    surviving[0] = 1;
    SystemState state(net);
    std::vector<int> scratch;
    SplitMix64 unused_rng(0);

    if (n == 1) {
        // Single branch per level; iterate instead of recursing.
        for (int depth = 0; depth < f_max; ++depth) {
            const int spare = detail::pick_spare(state, 0, policy, unused_rng, scratch);
            if (spare < 0) break;
            state.apply_repair(0, spare);
            surviving[static_cast<std::size_t>(depth) + 1] = 1;
        }
    } else {
        auto dfs = [&](auto&& self, int depth) -> void {
            if (depth == f_max) return;
            for (int u = 0; u < n; ++u) {
                const int spare = detail::pick_spare(state, u, policy, unused_rng, scratch);
                if (spare < 0) continue;
                ++surviving[static_cast<std::size_t>(depth) + 1];
                state.apply_repair(u, spare);
                self(self, depth + 1);
                state.undo_repair(u, spare);
            }
        };
        dfs(dfs, 0);
    }

    Curve curve;
    curve.estimator = CurveEstimator::exact_policy;
    curve.points.resize(static_cast<std::size_t>(f_max) + 1);
    double denom = 1.0;
    for (int f = 0; f <= f_max; ++f) {
        CurvePoint& pt = curve.points[static_cast<std::size_t>(f)];
        pt.faults = f;
        pt.repairability = static_cast<double>(surviving[static_cast<std::size_t>(f)]) / denom;
        pt.ci_half_width = 0.0;
        pt.trials = detail::pow_capped(static_cast<std::uint64_t>(n), f, UINT64_MAX - 1);
        denom *= static_cast<double>(n);
    }
    return curve;
}

// Exact offline-optimal curve: enumerates fault multisets, tests each with
// the matching oracle, and weights feasible multisets by the number of
// ordered sequences they represent. Equals the fraction of ordered length-f
// sequences whose tally is globally repairable.
inline Curve exact_curve_offline(const SpareNetwork& net, int f_max,
                                 std::uint64_t budget = kDefaultEnumerationBudget) {
    if (f_max < 0) throw std::invalid_argument("exact_curve_offline: negative f_max");
    const int n = net.unit_count();
    const std::uint64_t multisets = detail::binomial_capped(
        static_cast<std::uint64_t>(f_max) + static_cast<std::uint64_t>(n) - 1,
        static_cast<std::uint64_t>(f_max), budget);
    if (multisets == UINT64_MAX || multisets > budget) throw BudgetExceeded(multisets, budget);

    std::vector<detail::u128> numerator(static_cast<std::size_t>(f_max) + 1, 0);

    if (n == 1) {
        // The only size-f multiset is f faults on unit 0, feasible up to its degree.
        const int d = net.unit_degree(0);
        for (int f = 0; f <= std::min(f_max, d); ++f) numerator[static_cast<std::size_t>(f)] = 1;
    } else {
        // match_right[s] = unit occupying spare s; grown one occurrence at a
        // time along the DFS path, so each feasibility test is a single
        // augmenting-path attempt on a matching that is already maximum.
        std::vector<int> match_right(static_cast<std::size_t>(net.spare_count()), -1);
        std::vector<std::vector<int>> left_adj;
        left_adj.reserve(static_cast<std::size_t>(n));
        for (int u = 0; u < n; ++u) left_adj.push_back(net.unit_adj(u));
        std::vector<char> used;
        auto augment = [&](int u) {
            used.assign(static_cast<std::size_t>(net.spare_count()), 0);
            return detail::try_kuhn(u, left_adj, match_right, used);
        };

        auto dfs = [&](auto&& self, int u, int used_faults, detail::u128 orderings) -> void {
            if (u == n) {
                numerator[static_cast<std::size_t>(used_faults)] =
                    detail::checked_add(numerator[static_cast<std::size_t>(used_faults)], orderings);
                return;
            }
            const std::vector<int> snapshot = match_right;
            self(self, u + 1, used_faults, orderings);
            detail::u128 with_c = orderings;
            for (int c = 1; used_faults + c <= f_max; ++c) {
                // multinomial update: orderings(counts + e_u) =
                // orderings(counts) * (used + c) / c, exact at every step.
                with_c = detail::checked_mul(with_c,
                                             static_cast<detail::u128>(used_faults + c)) /
                         static_cast<detail::u128>(c);
                if (!augment(u)) break;
                self(self, u + 1, used_faults + c, with_c);
            }
            match_right = snapshot;
        };
        dfs(dfs, 0, 0, 1);
    }

    Curve curve;
    curve.estimator = CurveEstimator::exact_offline;
    curve.points.resize(static_cast<std::size_t>(f_max) + 1);
    detail::u128 denom = 1;
    for (int f = 0; f <= f_max; ++f) {
        CurvePoint& pt = curve.points[static_cast<std::size_t>(f)];
        pt.faults = f;
        pt.repairability = detail::ratio(numerator[static_cast<std::size_t>(f)], denom);
        pt.ci_half_width = 0.0;
        pt.trials = detail::binomial_capped(
            static_cast<std::uint64_t>(f) + static_cast<std::uint64_t>(n) - 1,
            static_cast<std::uint64_t>(f), UINT64_MAX - 1);
        denom = detail::checked_mul(denom, static_cast<detail::u128>(n));
    }
    return curve;
}

// Largest k such that EVERY continuation of k faults survives from the given
// state under the policy. Minimax over fault choices with the policy fixed;
// states keyed by the consumed-spare set (fault history does not affect the
// future, only consumption does).
inline int adversarial_survival_from(SystemState& state, const Policy& policy,
                                     std::uint64_t budget = kDefaultEnumerationBudget) {
    if (policy.tie_break != TieBreak::lowest_index)
        throw std::invalid_argument("adversarial_survival: policy must use lowest-index tie-breaking");
    const SpareNetwork& net = state.topology();
    if (net.spare_count() > 64)
        throw std::invalid_argument("adversarial_survival: more than 64 spares is out of range");
    const int n = net.unit_count();

    std::unordered_map<std::uint64_t, int> memo;
    std::uint64_t visited = 0;
    std::vector<int> scratch;
    SplitMix64 unused_rng(0);

    auto mask_of = [&] {
        std::uint64_t m = 0;
        for (int s = 0; s < net.spare_count(); ++s)
            if (state.is_consumed(s)) m |= std::uint64_t{1} << s;
        return m;
    };

    auto dfs = [&](auto&& self) -> int {
        const std::uint64_t key = mask_of();
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        if (++visited > budget) throw BudgetExceeded(visited, budget);
        int worst = INT32_MAX;
        for (int u = 0; u < n && worst > 0; ++u) {
            const int spare = detail::pick_spare(state, u, policy, unused_rng, scratch);
            if (spare < 0) {
                worst = 0;
                break;
            }
            state.apply_repair(u, spare);
            worst = std::min(worst, 1 + self(self));
            state.undo_repair(u, spare);
        }
        memo.emplace(key, worst);
        return worst;
    };
    return dfs(dfs);
}

inline int adversarial_survival(const SpareNetwork& net, const Policy& policy,
                                std::uint64_t budget = kDefaultEnumerationBudget) {
    SystemState state(net);
    return adversarial_survival_from(state, policy, budget);
}

// hundred_point: largest f with survival guaranteed under any policy, equal
// to the minimum unit degree. zero_point: smallest f with failure guaranteed,
// one past the spare count.
struct StructuralPoints {
    int hundred_point = 0;
    int zero_point = 0;
};

inline StructuralPoints structural_points(const SpareNetwork& net) {
    SystemState fresh(net);
    return StructuralPoints{static_cast<int>(min_unit_degree(fresh).value()),
                            net.spare_count() + 1};
}

// Arithmetic mean of repairability over f in [f_lo, f_hi], both inclusive.
inline double mean_repairability(const Curve& curve, int f_lo, int f_hi) {
    if (f_lo < 0 || f_hi > curve.max_faults() || f_lo > f_hi)
        throw std::invalid_argument("mean_repairability: range [" + std::to_string(f_lo) + ", " +
                                    std::to_string(f_hi) + "] not within curve");
    double sum = 0.0;
    for (int f = f_lo; f <= f_hi; ++f) sum += curve.at(f);
    return sum / static_cast<double>(f_hi - f_lo + 1);
}

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace detail

inline std::string curve_csv(const Curve& curve) {
    std::string out = "f,repairability,ci95,trials,estimator\n";
    for (const CurvePoint& pt : curve.points) {
        out += std::to_string(pt.faults);
        out += ',';
        out += detail::format_double(pt.repairability);
        out += ',';
        out += detail::format_double(pt.ci_half_width);
        out += ',';
        out += std::to_string(pt.trials);
        out += ',';
        out += estimator_name(curve.estimator);
        out += '\n';
    }
    return out;
}

}  // namespace sparenet
