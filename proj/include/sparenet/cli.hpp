#pragma once

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "codec.hpp"
#include "curves.hpp"
#include "enhance.hpp"
#include "experiments.hpp"
#include "generators.hpp"
#include "network.hpp"
#include "policy.hpp"
#include "repair.hpp"

namespace sparenet {

namespace detail {

inline std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::string token;
    std::istringstream stream(text);
    while (std::getline(stream, token, ',')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(token, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad integer in list: '" + token + "'");
        }
        while (used < token.size() && (token[used] == ' ' || token[used] == '\t')) ++used;
        if (used != token.size())
            throw std::invalid_argument("bad integer in list: '" + token + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty integer list");
    return out;
}

inline void emit_text(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
    } else {
        write_text_file(path, text);
    }
}

}  // namespace detail

// Full command surface; returns the process exit status. `args` excludes the
// program name.
inline int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"spare-sharing network toolkit"};
    app.name("sparenet");
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a network file");
    int gen_units = 0;
    int gen_spares = 0;
    int gen_edges = 0;
    std::uint64_t gen_seed = 1;
    bool gen_ring = false;
    std::string gen_out;
    gen->add_option("--units", gen_units, "functional unit count")->required();
    gen->add_option("--spares", gen_spares, "spare unit count")->required();
    gen->add_option("--edges", gen_edges, "edge count")->required();
    gen->add_option("--seed", gen_seed, "random seed (default 1)");
    gen->add_flag("--ring", gen_ring, "balanced ring construction instead of random");
    gen->add_option("-o,--out", gen_out, "output file (default stdout)");

    // eval
    auto* eval = app.add_subcommand("eval", "Monte Carlo repairability curve");
    std::string eval_net;
    std::string eval_policy = "pe+pp";
    std::string eval_tiebreak = "seeded";
    int eval_fmax = -1;
    std::uint64_t eval_trials = 10000;
    std::uint64_t eval_seed = 1;
    int eval_threads = 1;
    std::string eval_csv;
    eval->add_option("--net", eval_net, "network file")->required();
    eval->add_option("--policy", eval_policy, "random | pe | pp | pe+pp | pp+pe");
    eval->add_option("--tiebreak", eval_tiebreak, "seeded | lowest");
    eval->add_option("--fmax", eval_fmax, "curve length (default: spare count)");
    eval->add_option("--trials", eval_trials, "Monte Carlo trials (default 10000)");
    eval->add_option("--seed", eval_seed, "master seed (default 1)");
    eval->add_option("--threads", eval_threads, "worker threads (default 1)");
    eval->add_option("--csv", eval_csv, "output file (default stdout)");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "exact offline-optimal repairability curve");
    std::string oracle_net;
    int oracle_fmax = -1;
    std::uint64_t oracle_budget = kDefaultEnumerationBudget;
    std::string oracle_csv;
    oracle->add_option("--net", oracle_net, "network file")->required();
    oracle->add_option("--fmax", oracle_fmax, "curve length (default: spare count + 1)");
    oracle->add_option("--budget", oracle_budget, "enumeration budget (default 10^7)");
    oracle->add_option("--csv", oracle_csv, "output file (default stdout)");

    // trace
    auto* trace = app.add_subcommand("trace", "replay one fault sequence step by step");
    std::string trace_net;
    std::string trace_faults;
    std::string trace_policy = "pe+pp";
    std::string trace_tiebreak = "seeded";
    std::string trace_script;
    std::uint64_t trace_seed = 1;
    trace->add_option("--net", trace_net, "network file")->required();
    trace->add_option("--faults", trace_faults, "comma-separated unit ids, e.g. 3,2,0")->required();
    auto* trace_policy_opt =
        trace->add_option("--policy", trace_policy, "random | pe | pp | pe+pp | pp+pe");
    trace->add_option("--tiebreak", trace_tiebreak, "seeded | lowest");
    auto* trace_script_opt = trace->add_option(
        "--script", trace_script, "comma-separated spare ids overriding the policy");
    trace->add_option("--seed", trace_seed, "seed for policy randomness (default 1)");
    trace_script_opt->excludes(trace_policy_opt);

    // enhance
    auto* enh = app.add_subcommand("enhance", "add edges to a network file");
    std::string enh_net;
    int enh_add = 0;
    std::string enh_strategy = "full";
    std::uint64_t enh_seed = 1;
    std::string enh_out;
    enh->add_option("--net", enh_net, "network file")->required();
    enh->add_option("--add", enh_add, "number of edges to add")->required();
    enh->add_option("--strategy", enh_strategy, "rand-rand | spare-only | unit-only | full");
    enh->add_option("--seed", enh_seed, "random seed (default 1)");
    enh->add_option("-o,--out", enh_out, "output file (default stdout)");

    // experiment
    auto* exp = app.add_subcommand("experiment", "run a preset ensemble study");
    std::string exp_preset;
    std::string exp_out;
    int exp_networks = 100;
    std::uint64_t exp_trials = 10000;
    std::uint64_t exp_seed = 1;
    int exp_threads = 1;
    exp->add_option("--preset", exp_preset,
                    "algo-compare | enhance-compare | spectrum | scaling")
        ->required();
    exp->add_option("--out", exp_out, "output directory")->required();
    exp->add_option("--networks", exp_networks, "ensemble size (default 100)");
    exp->add_option("--trials", exp_trials, "Monte Carlo trials per network (default 10000)");
    exp->add_option("--seed", exp_seed, "master seed (default 1)");
    exp->add_option("--threads", exp_threads, "worker threads (default 1)");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("sparenet");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (gen->parsed()) {
            const SpareNetwork net =
                gen_ring ? generate_balanced_ring(gen_units, gen_spares, gen_edges)
                         : generate_random(gen_units, gen_spares, gen_edges, gen_seed);
            detail::emit_text(serialize_network(net), gen_out);
        } else if (eval->parsed()) {
            const SpareNetwork net = load_network(eval_net);
            Policy policy{parse_policy_kind(eval_policy), parse_tie_break(eval_tiebreak), true};
            const int f_max = eval_fmax >= 0 ? eval_fmax : net.spare_count();
            const Curve curve =
                estimate_curve_mc(net, policy, f_max, eval_trials, eval_seed, eval_threads);
            detail::emit_text(curve_csv(curve), eval_csv);
        } else if (oracle->parsed()) {
            const SpareNetwork net = load_network(oracle_net);
            const int f_max = oracle_fmax >= 0 ? oracle_fmax : net.spare_count() + 1;
            const Curve curve = exact_curve_offline(net, f_max, oracle_budget);
            detail::emit_text(curve_csv(curve), oracle_csv);
        } else if (trace->parsed()) {
            const SpareNetwork net = load_network(trace_net);
            FaultSequence seq{detail::parse_int_list(trace_faults)};
            RunOutcome outcome;
            if (!trace_script.empty()) {
                outcome = run_sequence_scripted(net, seq, detail::parse_int_list(trace_script));
            } else {
                Policy policy{parse_policy_kind(trace_policy), parse_tie_break(trace_tiebreak),
                              true};
                outcome = run_sequence(net, seq, policy, trace_seed);
            }
            for (std::size_t k = 0; k < outcome.decisions.size(); ++k) {
                std::cout << "step " << (k + 1) << ": fault u" << seq.slots[k] << " -> spare s"
                          << outcome.decisions[k].chosen_spare << "\n";
            }
            if (!outcome.survived) {
                // The trace ran fine; a failing sequence is a result, not an error.
                const std::size_t k = static_cast<std::size_t>(*outcome.failed_at_step);
                std::cout << "step " << k << ": fault u" << seq.slots[k - 1] << " -> FAIL\n";
            }
        } else if (enh->parsed()) {
            const SpareNetwork net = load_network(enh_net);
            const SpareNetwork enhanced =
                enhance(net, enh_add, parse_strategy(enh_strategy), enh_seed);
            detail::emit_text(serialize_network(enhanced), enh_out);
        } else if (exp->parsed()) {
            ExperimentConfig config;
            config.preset = parse_preset(exp_preset);
            config.n_networks = exp_networks;
            config.trials = exp_trials;
            config.master_seed = exp_seed;
            config.workers = exp_threads;
            config.out_dir = exp_out;
            run_experiment(config);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace sparenet
