#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "curves.hpp"
#include "enhance.hpp"
#include "generators.hpp"
#include "network.hpp"
#include "policy.hpp"
#include "rng.hpp"

namespace sparenet {

enum class Preset { algo_compare, enhance_compare, spectrum, scaling };

inline const char* preset_name(Preset p) {
    switch (p) {
        case Preset::algo_compare: return "algo-compare";
        case Preset::enhance_compare: return "enhance-compare";
        case Preset::spectrum: return "spectrum";
        case Preset::scaling: return "scaling";
    }
    throw std::logic_error("preset_name: bad enum value");
}

inline Preset parse_preset(const std::string& name) {
    if (name == "algo-compare") return Preset::algo_compare;
    if (name == "enhance-compare") return Preset::enhance_compare;
    if (name == "spectrum") return Preset::spectrum;
    if (name == "scaling") return Preset::scaling;
    throw std::invalid_argument("unknown preset: " + name +
                                " (expected algo-compare, enhance-compare, spectrum, scaling)");
}

struct ExperimentConfig {
    Preset preset = Preset::algo_compare;
    int n_networks = 100;
    std::uint64_t trials = 10000;
    std::uint64_t master_seed = 1;
    int workers = 1;
    std::string out_dir;
};

struct ConditionResult {
    std::string condition;
    int n_units = 0;
    int n_spares = 0;
    int f_max = 0;
    int baseline = -1;  // index of this condition's comparison baseline, -1 if self
    double mean_repairability = 0.0;  // ensemble mean of per-network scalar means
    double ci95 = 0.0;
    double improvement_pct = 0.0;
    std::uint64_t decisions = 0;
    std::uint64_t tie_decisions = 0;
    std::vector<double> mean_curve;     // ensemble mean per f
    std::vector<double> mean_curve_ci;  // 1.96 * sd / sqrt(n_networks) per f
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<ConditionResult> conditions;
};

namespace detail {

struct ConditionSpec {
    std::string name;
    int n_units = 0;
    int n_spares = 0;
    int f_max = 0;
    int baseline = -1;
    Policy policy;
    std::function<SpareNetwork(int)> make_network;  // network index -> topology
};

// Seed streams, all derived from the master seed: 1 = topology ensembles,
// 2 = Monte Carlo evaluation, 3 = enhancement randomness. Every (stream,
// condition, network) triple gets an independent generator, so results never
// depend on evaluation order or worker count.
inline std::uint64_t net_seed(std::uint64_t master, std::uint64_t group, int i) {
    return derive_seed(derive_seed(master, 1, group), static_cast<std::uint64_t>(i));
}

inline std::uint64_t mc_seed(std::uint64_t master, std::size_t condition, int i) {
    return derive_seed(derive_seed(master, 2, condition), static_cast<std::uint64_t>(i));
}

inline std::uint64_t enhance_seed(std::uint64_t master, std::size_t condition, int i) {
    return derive_seed(derive_seed(master, 3, condition), static_cast<std::uint64_t>(i));
}

inline std::vector<ConditionSpec> build_conditions(const ExperimentConfig& cfg) {
    std::vector<ConditionSpec> specs;
    const std::uint64_t master = cfg.master_seed;
    switch (cfg.preset) {
        case Preset::algo_compare: {
            // One shared random ensemble, five selection policies.
            const char* names[] = {"random", "pe", "pp", "pe+pp", "pp+pe"};
            for (std::size_t c = 0; c < 5; ++c) {
                ConditionSpec spec;
                spec.name = names[c];
                spec.n_units = 15;
                spec.n_spares = 10;
                spec.f_max = 10;
                spec.baseline = 0;
                spec.policy = Policy{parse_policy_kind(names[c]), TieBreak::seeded_random, true};
                spec.make_network = [master](int i) {
                    return generate_random(15, 10, 40, net_seed(master, 0, i));
                };
                specs.push_back(std::move(spec));
            }
            break;
        }
        case Preset::enhance_compare: {
            // One shared 20-edge ensemble; four ways of adding 5 edges.
            const Policy eval{PolicyKind::random, TieBreak::seeded_random, true};
            auto base = [master](int i) {
                return generate_random(15, 10, 20, net_seed(master, 0, i));
            };
            specs.push_back({"original", 15, 10, 10, 0, eval, base});
            const EnhancementStrategy strategies[] = {
                EnhancementStrategy::random_random, EnhancementStrategy::spare_only,
                EnhancementStrategy::unit_only, EnhancementStrategy::full};
            for (EnhancementStrategy strat : strategies) {
                const std::size_t c = specs.size();
                ConditionSpec spec;
                spec.name = strategy_name(strat);
                spec.n_units = 15;
                spec.n_spares = 10;
                spec.f_max = 10;
                spec.baseline = 0;
                spec.policy = eval;
                spec.make_network = [master, base, strat, c](int i) {
                    return enhance(base(i), 5, strat, enhance_seed(master, c, i));
                };
                specs.push_back(std::move(spec));
            }
            break;
        }
        case Preset::spectrum: {
            // 45 edges built from a sliding random/selected mix, sharing the
            // random stream so each condition extends the same prefix.
            const Policy eval{PolicyKind::random, TieBreak::seeded_random, true};
            const struct {
                const char* name;
                int m_random;
                int m_selected;
            } mixes[] = {{"random45", 45, 0},
                         {"rand35+sel10", 35, 10},
                         {"rand30+sel15", 30, 15},
                         {"sel45", 0, 45}};
            for (const auto& mix : mixes) {
                ConditionSpec spec;
                spec.name = mix.name;
                spec.n_units = 15;
                spec.n_spares = 10;
                spec.f_max = 10;
                spec.baseline = 0;
                spec.policy = eval;
                const int m_random = mix.m_random;
                const int m_selected = mix.m_selected;
                spec.make_network = [master, m_random, m_selected](int i) {
                    return build_spectrum(15, 10, m_random, m_selected, net_seed(master, 0, i));
                };
                specs.push_back(std::move(spec));
            }
            ConditionSpec ring;
            ring.name = "balanced-ring45";
            ring.n_units = 15;
            ring.n_spares = 10;
            ring.f_max = 10;
            ring.baseline = 0;
            ring.policy = eval;
            ring.make_network = [](int) { return generate_balanced_ring(15, 10, 45); };
            specs.push_back(std::move(ring));
            break;
        }
        case Preset::scaling: {
            // Proportionally scaled sizes; per size, the raw ensemble and its
            // FULL enhancement share base networks.
            const Policy eval{PolicyKind::random, TieBreak::seeded_random, true};
            const struct {
                int n_units, n_spares, n_edges, k_extra;
            } sizes[] = {{15, 10, 20, 5}, {30, 20, 40, 10}, {60, 40, 80, 20}};
            for (std::size_t g = 0; g < 3; ++g) {
                const auto sz = sizes[g];
                const std::string tag =
                    std::to_string(sz.n_units) + "x" + std::to_string(sz.n_spares);
                auto base = [master, g, sz](int i) {
                    return generate_random(sz.n_units, sz.n_spares, sz.n_edges,
                                           net_seed(master, g, i));
                };
                const int base_index = static_cast<int>(specs.size());
                specs.push_back({tag + "-original", sz.n_units, sz.n_spares, sz.n_spares,
                                 base_index, eval, base});
                ConditionSpec full;
                full.name = tag + "-full";
                full.n_units = sz.n_units;
                full.n_spares = sz.n_spares;
                full.f_max = sz.n_spares;
                full.baseline = base_index;
                full.policy = eval;
                const std::size_t c = specs.size();
                full.make_network = [master, base, sz, c](int i) {
                    return enhance(base(i), sz.k_extra, EnhancementStrategy::full,
                                   enhance_seed(master, c, i));
                };
                specs.push_back(std::move(full));
            }
            break;
        }
    }
    return specs;
}

struct JobResult {
    Curve curve;
    double scalar_mean = 0.0;  // mean repairability over f = 1..n_spares
    McStats stats;
};

inline void parallel_for(std::size_t n_jobs, int workers, const std::function<void(std::size_t)>& body) {
    const int n_threads = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), n_jobs));
    if (n_threads <= 1) {
        for (std::size_t j = 0; j < n_jobs; ++j) body(j);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int w = 0; w < n_threads; ++w) {
        pool.emplace_back([&] {
            try {
                for (;;) {
                    const std::size_t j = next.fetch_add(1);
                    if (j >= n_jobs) break;
                    body(j);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n_jobs);
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace detail

// Runs one experiment preset: for every condition and generated network, a
// Monte Carlo curve; writes curves/<condition>/<network>.csv, an ensemble
// mean curve mean_<condition>.csv, and summary.csv under config.out_dir.
// Byte-identical output for a given master seed, whatever config.workers is.
inline ExperimentResult run_experiment(const ExperimentConfig& config) {
    if (config.n_networks < 1)
        throw std::invalid_argument("run_experiment: need at least one network");
    if (config.trials < 1) throw std::invalid_argument("run_experiment: need at least one trial");
    if (config.out_dir.empty()) throw std::invalid_argument("run_experiment: output directory not set");

    const std::vector<detail::ConditionSpec> specs = detail::build_conditions(config);
    const std::size_t n_cond = specs.size();
    const std::size_t n_nets = static_cast<std::size_t>(config.n_networks);

    std::vector<detail::JobResult> jobs(n_cond * n_nets);
    detail::parallel_for(jobs.size(), config.workers, [&](std::size_t j) {
        const std::size_t c = j / n_nets;
        const int i = static_cast<int>(j % n_nets);
        const detail::ConditionSpec& spec = specs[c];
        const SpareNetwork net = spec.make_network(i);
        detail::JobResult& out = jobs[j];
        out.curve = estimate_curve_mc(net, spec.policy, spec.f_max, config.trials,
                                      detail::mc_seed(config.master_seed, c, i), 1, &out.stats);
        out.scalar_mean = mean_repairability(out.curve, 1, spec.n_spares);
    });

    namespace fs = std::filesystem;
    const fs::path root(config.out_dir);
    fs::create_directories(root / "curves");

    ExperimentResult result;
    result.config = config;
    result.conditions.resize(n_cond);

    for (std::size_t c = 0; c < n_cond; ++c) {
        const detail::ConditionSpec& spec = specs[c];
        ConditionResult& cond = result.conditions[c];
        cond.condition = spec.name;
        cond.n_units = spec.n_units;
        cond.n_spares = spec.n_spares;
        cond.f_max = spec.f_max;
        cond.baseline = spec.baseline;

        const fs::path cond_dir = root / "curves" / spec.name;
        fs::create_directories(cond_dir);

        const std::size_t n_points = static_cast<std::size_t>(spec.f_max) + 1;
        std::vector<double> sum(n_points, 0.0);
        std::vector<double> sum_sq(n_points, 0.0);
        double scalar_sum = 0.0;
        double scalar_sum_sq = 0.0;
        for (std::size_t i = 0; i < n_nets; ++i) {
            const detail::JobResult& job = jobs[c * n_nets + i];
            detail::write_text_file(cond_dir / (std::to_string(i) + ".csv"),
                                    curve_csv(job.curve));
            for (std::size_t f = 0; f < n_points; ++f) {
                const double v = job.curve.points[f].repairability;
                sum[f] += v;
                sum_sq[f] += v * v;
            }
            scalar_sum += job.scalar_mean;
            scalar_sum_sq += job.scalar_mean * job.scalar_mean;
            cond.decisions += job.stats.decisions;
            cond.tie_decisions += job.stats.tie_decisions;
        }

        const double n = static_cast<double>(n_nets);
        auto ensemble_ci = [n](double s, double sq) {
            if (n < 2) return 0.0;
            const double mean = s / n;
            const double var = std::max(0.0, (sq - n * mean * mean) / (n - 1.0));
            return 1.96 * std::sqrt(var / n);
        };
        cond.mean_curve.resize(n_points);
        cond.mean_curve_ci.resize(n_points);
        std::string mean_csv = "f,repairability,ci95,trials,estimator\n";
        for (std::size_t f = 0; f < n_points; ++f) {
            cond.mean_curve[f] = sum[f] / n;
            cond.mean_curve_ci[f] = ensemble_ci(sum[f], sum_sq[f]);
            mean_csv += std::to_string(f);
            mean_csv += ',';
            mean_csv += detail::format_double(cond.mean_curve[f]);
            mean_csv += ',';
            mean_csv += detail::format_double(cond.mean_curve_ci[f]);
            mean_csv += ',';
            mean_csv += std::to_string(n_nets);
            mean_csv += ",ensemble_mc\n";
        }
        detail::write_text_file(root / ("mean_" + spec.name + ".csv"), mean_csv);

        cond.mean_repairability = scalar_sum / n;
        cond.ci95 = ensemble_ci(scalar_sum, scalar_sum_sq);
    }

    for (std::size_t c = 0; c < n_cond; ++c) {
        ConditionResult& cond = result.conditions[c];
        const int b = cond.baseline;
        if (b < 0 || static_cast<std::size_t>(b) == c) {
            cond.improvement_pct = 0.0;
            continue;
        }
        const double base = result.conditions[static_cast<std::size_t>(b)].mean_repairability;
        cond.improvement_pct =
            base > 0.0 ? 100.0 * (cond.mean_repairability - base) / base : 0.0;
    }

    std::string summary =
        "preset,n_networks,trials,master_seed,f_lo,f_hi,condition,n_units,n_spares,"
        "mean_repairability,ci95,improvement_pct,decisions,tie_decisions\n";
    for (const ConditionResult& cond : result.conditions) {
        summary += preset_name(config.preset);
        summary += ',';
        summary += std::to_string(config.n_networks);
        summary += ',';
        summary += std::to_string(config.trials);
        summary += ',';
        summary += std::to_string(config.master_seed);
        summary += ",1,";
        summary += std::to_string(cond.n_spares);
        summary += ',';
        summary += cond.condition;
        summary += ',';
        summary += std::to_string(cond.n_units);
        summary += ',';
        summary += std::to_string(cond.n_spares);
        summary += ',';
        summary += detail::format_double(cond.mean_repairability);
        summary += ',';
        summary += detail::format_double(cond.ci95);
        summary += ',';
        summary += detail::format_double(cond.improvement_pct);
        summary += ',';
        summary += std::to_string(cond.decisions);
        summary += ',';
        summary += std::to_string(cond.tie_decisions);
        summary += '\n';
    }
    detail::write_text_file(root / "summary.csv", summary);
    return result;
}

}  // namespace sparenet
