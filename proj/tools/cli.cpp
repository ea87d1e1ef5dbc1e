#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "latmove/errors.hpp"
#include "latmove/experiment.hpp"
#include "latmove/io.hpp"
#include "latmove/reachability.hpp"
#include "latmove/spectral.hpp"
#include "latmove/synthetic.hpp"
#include "latmove/traces.hpp"

namespace latmove::cli {

namespace {

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::string current;
    std::istringstream in(csv);
    while (std::getline(in, current, ',')) {
        if (!current.empty()) out.push_back(current);
    }
    return out;
}

std::vector<double> parse_fractions(const std::string& csv) {
    std::vector<double> out;
    for (const auto& tok : split_list(csv)) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ValidationError("malformed budget list entry: " + tok);
        }
    }
    return out;
}

struct InputFlags {
    std::string access, flows, probs, posture, traces;

    DatasetPaths paths() const {
        DatasetPaths p;
        if (!access.empty()) p.access = access;
        if (!flows.empty()) p.flows = flows;
        if (!probs.empty()) p.probabilities = probs;
        if (!posture.empty()) p.posture = posture;
        if (!traces.empty()) p.traces = traces;
        return p;
    }
};

void add_input_flags(CLI::App* cmd, InputFlags& in, bool access, bool flows, bool probs,
                     bool posture, bool traces = false) {
    if (access) cmd->add_option("--access", in.access, "access.csv path")->required();
    if (flows) cmd->add_option("--flows", in.flows, "flows.csv path")->required();
    if (probs) cmd->add_option("--probs", in.probs, "probabilities.csv path")->required();
    if (posture) cmd->add_option("--posture", in.posture, "posture.csv path")->required();
    if (traces) cmd->add_option("--traces", in.traces, "traces.csv path")->required();
}

RunConfig base_config(const std::string& subcommand, const InputFlags& in) {
    RunConfig config;
    config.set_string("tool", "latmove");
    config.set_string("subcommand", subcommand);
    if (!in.access.empty()) config.set_string("access", in.access);
    if (!in.flows.empty()) config.set_string("flows", in.flows);
    if (!in.probs.empty()) config.set_string("probs", in.probs);
    if (!in.posture.empty()) config.set_string("posture", in.posture);
    if (!in.traces.empty()) config.set_string("traces", in.traces);
    return config;
}

CompromiseProbabilities probs_or_zero(const Dataset& ds) {
    if (ds.probabilities) return *ds.probabilities;
    return CompromiseProbabilities(ds.index->app_count(), ds.index->host_count());
}

SecurityPosture posture_or_zero(const Dataset& ds) {
    if (ds.posture) return *ds.posture;
    return SecurityPosture::zeros(ds.index->host_count());
}

int run_parsed(int argc, const char* const* argv) {
    CLI::App app{"Tripartite lateral-movement reachability and hardening toolkit"};
    app.require_subcommand(1);

    // --- gen-synthetic ---------------------------------------------------
    auto* gen = app.add_subcommand("gen-synthetic", "Generate a synthetic tripartite dataset");
    SyntheticSpec spec;
    std::string gen_out;
    double p_fraction = 0.1;
    std::string degree_model = "power-law";
    std::string trace_origin;
    int trace_branching = 4, trace_rounds = 8;
    gen->add_option("--users", spec.users, "number of users");
    gen->add_option("--hosts", spec.hosts, "number of hosts");
    gen->add_option("--apps", spec.apps, "number of applications");
    gen->add_option("--edges", spec.user_host_edges, "number of user-host access edges");
    gen->add_option("--flows", spec.flows, "number of host-application-host flows");
    gen->add_option("--seed", spec.seed, "master seed");
    gen->add_option("--p-fraction", p_fraction, "nonzero fraction of P");
    gen->add_option("--degree-model", degree_model, "power-law | uniform");
    gen->add_option("--exponent", spec.exponent, "power-law exponent");
    gen->add_option("--trace-origin", trace_origin, "also emit traces.csv from this host");
    gen->add_option("--trace-branching", trace_branching, "trace replication factor");
    gen->add_option("--trace-rounds", trace_rounds, "trace replication rounds");
    gen->add_option("--out", gen_out, "output directory")->required();

    // --- reach ------------------------------------------------------------
    auto* reach = app.add_subcommand("reach", "Compute cascade reachability");
    InputFlags reach_in;
    add_input_flags(reach, reach_in, true, true, true, true);
    std::string reach_graph = "tripartite";
    std::string compromised;
    std::size_t num_seeds = 0;
    std::uint64_t reach_seed = 0;
    int max_hops = 0;
    reach->add_option("--graph", reach_graph, "tripartite | user-host | host-app");
    reach->add_option("--compromised", compromised, "comma-separated seed host ids");
    reach->add_option("--num-seeds", num_seeds, "number of random seed hosts");
    reach->add_option("--seed", reach_seed, "seed for random compromise draw");
    reach->add_option("--max-hops", max_hops, "cascade hop limit (default: host count)");

    // --- segment ----------------------------------------------------------
    auto* seg = app.add_subcommand("segment", "Plan user-host segmentation");
    InputFlags seg_in;
    add_input_flags(seg, seg_in, true, false, false, false);
    std::size_t q = 0;
    std::string seg_strategy = "score";
    std::string seg_out;
    seg->add_option("--q", q, "number of edges to segment")->required();
    seg->add_option("--strategy", seg_strategy, "score | score-recalc | user-first | host-first");
    seg->add_option("--out", seg_out, "output directory")->required();

    // --- harden-edges -----------------------------------------------------
    auto* he = app.add_subcommand("harden-edges", "Plan host-application edge hardening");
    InputFlags he_in;
    add_input_flags(he, he_in, false, true, true, false);
    std::size_t eta = 0;
    std::string he_strategy = "phi";
    double he_eps = 1e-5;
    std::string he_out;
    he->add_option("--eta", eta, "number of edges to harden")->required();
    he->add_option("--strategy", he_strategy, "phi | phi-recalc | max-p");
    he->add_option("--eps", he_eps, "residual compromise probability");
    he->add_option("--out", he_out, "output directory")->required();

    // --- harden-nodes -----------------------------------------------------
    auto* hn = app.add_subcommand("harden-nodes", "Plan host hardening");
    InputFlags hn_in;
    add_input_flags(hn, hn_in, false, true, true, true);
    std::size_t zeta = 0;
    std::string hn_score = "rho";
    double alpha = 1.0;
    double hn_eps = 1e-5;
    std::string hn_out;
    hn->add_option("--zeta", zeta, "number of hosts to harden")->required();
    hn->add_option("--score", hn_score, "rho | rho-a | rho-j");
    hn->add_option("--alpha", alpha, "target hardening level");
    hn->add_option("--eps", hn_eps, "residual probability used by rho");
    hn->add_option("--out", hn_out, "output directory")->required();

    // --- experiment ---------------------------------------------------------
    auto* exp = app.add_subcommand("experiment", "Reachability-versus-budget experiment");
    InputFlags exp_in;
    add_input_flags(exp, exp_in, true, true, true, true);
    std::string exp_kind = "seg";
    std::string exp_budgets = "0,0.05,0.1,0.15";
    std::string exp_strategies;
    std::size_t trials = 10;
    std::uint64_t exp_seed = 0;
    double exp_eps = 1e-5;
    std::string seg_strategy_j = "host-first", edge_strategy_j = "phi", node_strategy_j = "rho";
    std::string exp_out;
    exp->add_option("--kind", exp_kind, "seg | edge | node | joint");
    exp->add_option("--budgets", exp_budgets, "comma-separated budget fractions in [0,1]");
    exp->add_option("--strategies", exp_strategies, "comma-separated strategy names");
    exp->add_option("--trials", trials, "number of randomized trials");
    exp->add_option("--seed", exp_seed, "master seed");
    exp->add_option("--eps", exp_eps, "residual compromise probability");
    exp->add_option("--seg-strategy", seg_strategy_j, "joint: segmentation strategy");
    exp->add_option("--edge-strategy", edge_strategy_j, "joint: edge hardening strategy");
    exp->add_option("--node-strategy", node_strategy_j, "joint: node hardening strategy");
    exp->add_option("--out", exp_out, "output directory")->required();

    // --- benchmark ----------------------------------------------------------
    auto* bench = app.add_subcommand("benchmark", "Trace-replay containment benchmark");
    InputFlags bench_in;
    add_input_flags(bench, bench_in, false, true, false, false, true);
    std::string bench_budgets = "0,0.01,0.02,0.05,0.1";
    std::string bench_out;
    bench->add_option("--budgets", bench_budgets, "comma-separated hardened-edge fractions");
    bench->add_option("--out", bench_out, "output directory")->required();

    try {
        app.parse(argc, const_cast<char**>(argv));
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help and friends print to stdout and succeed.
            return app.exit(e);
        }
        std::ostringstream ignored;
        app.exit(e, ignored, std::cerr);
        return 1;
    }

    if (gen->parsed()) {
        spec.degree_model =
            degree_model == "uniform" ? DegreeModel::Uniform : DegreeModel::PowerLaw;
        if (degree_model != "uniform" && degree_model != "power-law") {
            throw ValidationError("unknown degree model: " + degree_model);
        }
        auto [graph, flows] = gen_synthetic_tripartite(spec);
        const auto p = gen_random_P(spec.apps, spec.hosts, p_fraction, spec.seed);
        const auto a = gen_random_posture(spec.hosts, spec.seed);
        write_synthetic_dataset(graph, flows, p, a, gen_out);
        if (!trace_origin.empty()) {
            const auto origin = graph.index().host_index(trace_origin);
            const auto traces =
                gen_attack_traces(flows, origin, trace_branching, trace_rounds, spec.seed);
            write_traces_csv(traces, graph.index(), std::filesystem::path(gen_out) / "traces.csv");
        }
        return 0;
    }

    if (reach->parsed()) {
        const auto ds = load_dataset(reach_in.paths());
        const auto& g = ds.graph.value();
        const auto& flows = ds.flows.value();
        const auto p = probs_or_zero(ds);
        const auto a = posture_or_zero(ds);
        const std::size_t n = ds.index->host_count();

        std::vector<std::uint8_t> r0(n, 0);
        if (!compromised.empty()) {
            for (const auto& id : split_list(compromised)) r0[ds.index->host_index(id)] = 1;
        } else if (num_seeds > 0) {
            r0 = pick_initial_compromise(n, num_seeds, reach_seed);
        } else {
            throw ValidationError("provide --compromised or --num-seeds");
        }
        const int hops = max_hops > 0 ? max_hops : static_cast<int>(n);

        double fraction = 0.0;
        if (reach_graph == "user-host") {
            fraction = reachability_fraction(
                user_host_cascade(induced_host_matrix(g), r0, hops).final_state());
        } else if (reach_graph == "host-app") {
            fraction = reachability_fraction(
                host_app_cascade(propagation_operator(flows, p), a, r0, hops).final_state());
        } else if (reach_graph == "tripartite") {
            fraction = reachability_fraction(
                tripartite_cascade(induced_host_matrix(g), propagation_operator(flows, p), a,
                                   r0, hops)
                    .final_state());
        } else {
            throw ValidationError("unknown graph kind: " + reach_graph);
        }
        std::printf("%s\n", format_double(fraction).c_str());
        return 0;
    }

    if (seg->parsed()) {
        const auto ds = load_dataset(seg_in.paths());
        const auto& g = ds.graph.value();
        SegmentationPlan plan = [&] {
            const auto strategy = segmentation_strategy_from(seg_strategy);
            switch (strategy) {
                case SegmentationStrategy::GreedyScore: return greedy_segment(g, q, false);
                case SegmentationStrategy::GreedyScoreRecalc: return greedy_segment(g, q, true);
                case SegmentationStrategy::UserFirst:
                    return degree_first_segment(g, q, DegreeFirstMode::UserFirst);
                case SegmentationStrategy::HostFirst:
                    return degree_first_segment(g, q, DegreeFirstMode::HostFirst);
            }
            throw ValidationError("unknown strategy");
        }();
        auto config = base_config("segment", seg_in);
        config.set_integer("q", static_cast<long long>(q));
        config.set_string("strategy", seg_strategy);
        config.set_number("lambda_before", plan.lambda_before);
        config.set_number("lambda_after_removal", plan.lambda_after_removal);
        config.set_number("lambda_after_accounts", plan.lambda_after_accounts);
        write_segmentation_plan(plan, g.index(), config, seg_out);
        return 0;
    }

    if (he->parsed()) {
        const auto ds = load_dataset(he_in.paths());
        const auto& flows = ds.flows.value();
        const auto p = probs_or_zero(ds);
        const EpsilonMap eps(he_eps);
        EdgeHardeningPlan plan = [&] {
            const auto strategy = edge_strategy_from(he_strategy);
            switch (strategy) {
                case EdgeHardeningStrategy::GreedyPhi:
                    return greedy_edge_harden(flows, p, eta, eps, false);
                case EdgeHardeningStrategy::GreedyPhiRecalc:
                    return greedy_edge_harden(flows, p, eta, eps, true);
                case EdgeHardeningStrategy::MaxPHeuristic:
                    return max_p_heuristic_harden(flows, p, eta, eps);
            }
            throw ValidationError("unknown strategy");
        }();
        auto config = base_config("harden-edges", he_in);
        config.set_integer("eta", static_cast<long long>(eta));
        config.set_string("strategy", he_strategy);
        config.set_number("eps", he_eps);
        write_edge_plan(plan, *ds.index, config, he_out);
        return 0;
    }

    if (hn->parsed()) {
        const auto ds = load_dataset(hn_in.paths());
        const auto& flows = ds.flows.value();
        const auto p = probs_or_zero(ds);
        const auto a = posture_or_zero(ds);
        const EpsilonMap eps(hn_eps);
        const auto j_op = propagation_operator(flows, p);
        const auto y = leading_eigenpair_nonnegative(j_op, kDefaultEigTolerance,
                                                     kPlannerEigMaxIterations);

        std::vector<double> scores;
        if (hn_score == "rho") {
            scores = node_scores(flows, p, j_op, y, NodeScoreKind::Rho, a, eps);
        } else if (hn_score == "rho-a") {
            scores = node_scores(flows, p, j_op, y, NodeScoreKind::RhoPosture, a, eps);
        } else if (hn_score == "rho-j") {
            scores = node_scores(flows, p, j_op, y, NodeScoreKind::RhoRowSum, a, eps);
        } else {
            throw ValidationError("unknown node score kind: " + hn_score);
        }
        const auto plan = greedy_node_harden(scores, zeta, {}, a, alpha);
        auto config = base_config("harden-nodes", hn_in);
        config.set_integer("zeta", static_cast<long long>(zeta));
        config.set_string("score", hn_score);
        config.set_number("alpha", alpha);
        write_node_plan(plan, *ds.index, config, hn_out);
        return 0;
    }

    if (exp->parsed()) {
        const auto ds = load_dataset(exp_in.paths());
        const auto& g = ds.graph.value();
        const auto& flows = ds.flows.value();
        const auto p = probs_or_zero(ds);
        const auto a = posture_or_zero(ds);
        const auto budgets = parse_fractions(exp_budgets);

        TrialProtocol protocol;
        protocol.trials = trials;
        protocol.seed = exp_seed;
        protocol.epsilon = exp_eps;

        ExperimentResult result;
        if (exp_kind == "seg") {
            std::vector<SegmentationStrategy> strategies;
            const auto names = exp_strategies.empty()
                                   ? std::vector<std::string>{"greedy-score", "greedy-score-recalc",
                                                              "user-first", "host-first"}
                                   : split_list(exp_strategies);
            for (const auto& name : names) strategies.push_back(segmentation_strategy_from(name));
            result = run_segmentation_experiment(g, flows, p, a, strategies, budgets, protocol);
        } else if (exp_kind == "edge" || exp_kind == "node") {
            const auto kind = exp_kind == "edge" ? HardeningKind::Edge : HardeningKind::Node;
            const auto names =
                exp_strategies.empty()
                    ? (kind == HardeningKind::Edge
                           ? std::vector<std::string>{"greedy-phi", "greedy-phi-recalc", "max-p"}
                           : std::vector<std::string>{"rho", "rho-j", "min-a"})
                    : split_list(exp_strategies);
            result = run_hardening_experiment(g, flows, p, a, kind, names, budgets, protocol);
        } else if (exp_kind == "joint") {
            result = run_joint_experiment(g, flows, p, a,
                                          segmentation_strategy_from(seg_strategy_j),
                                          edge_strategy_from(edge_strategy_j),
                                          node_strategy_from(node_strategy_j), budgets, protocol);
        } else {
            throw ValidationError("unknown experiment kind: " + exp_kind);
        }

        auto config = base_config("experiment", exp_in);
        config.set_string("kind", exp_kind);
        config.set_list("budgets", budgets);
        config.set_integer("trials", static_cast<long long>(trials));
        config.set_integer("seed", static_cast<long long>(exp_seed));
        config.set_number("eps", exp_eps);
        if (exp_kind == "joint") {
            config.set_string("seg_strategy", seg_strategy_j);
            config.set_string("edge_strategy", edge_strategy_j);
            config.set_string("node_strategy", node_strategy_j);
        } else if (!exp_strategies.empty()) {
            config.set_string("strategies", exp_strategies);
        }
        write_experiment_results(result, config, exp_out);
        return 0;
    }

    if (bench->parsed()) {
        const auto ds = load_dataset(bench_in.paths());
        const auto& flows = ds.flows.value();
        const auto& traces = ds.traces.value();
        const auto budgets = parse_fractions(bench_budgets);

        // Trace replay per the benchmark protocol: P starts as all-ones.
        CompromiseProbabilities ones(
            ds.index->app_count(), ds.index->host_count(),
            std::vector<double>(ds.index->app_count() * ds.index->host_count(), 1.0));
        const EpsilonMap eps;
        const auto eligible = eligible_edges(flows, ones, eps);

        std::map<std::string, std::vector<BenchmarkPoint>> curves;
        std::vector<EdgeHardeningPlan> greedy_prefixes;
        EdgeHardeningPlan full = greedy_edge_harden(flows, ones, eligible.size(), eps, false);
        for (double f : budgets) {
            const auto count = static_cast<std::size_t>(
                std::llround(f * static_cast<double>(eligible.size())));
            EdgeHardeningPlan prefix{{}, {}, {}, ones, {}, {}};
            for (std::size_t z = 0; z < std::min(count, full.hardened_edges.size()); ++z) {
                prefix.hardened_edges.push_back(full.hardened_edges[z]);
                prefix.epsilons.push_back(full.epsilons[z]);
                prefix.old_values.push_back(full.old_values[z]);
            }
            greedy_prefixes.push_back(std::move(prefix));
        }
        curves["greedy-phi"] = run_trace_benchmark(traces, flows, greedy_prefixes);

        std::vector<EdgeHardeningPlan> baseline_prefixes;
        for (double f : budgets) {
            const auto target = static_cast<std::size_t>(
                std::llround(f * static_cast<double>(eligible.size())));
            EdgeHardeningPlan plan{{}, {}, {}, ones, {}, {}};
            if (target > 0) {
                std::size_t pairs = std::max<std::size_t>(1, target / flows.app_count());
                plan = baseline_host_pair_harden(flows, ones, pairs, eps);
                while (plan.hardened_edges.size() < target) {
                    auto bigger = baseline_host_pair_harden(flows, ones, ++pairs, eps);
                    if (bigger.hardened_edges.size() == plan.hardened_edges.size()) break;
                    plan = std::move(bigger);
                }
            }
            baseline_prefixes.push_back(std::move(plan));
        }
        curves["host-pair-baseline"] = run_trace_benchmark(traces, flows, baseline_prefixes);

        auto config = base_config("benchmark", bench_in);
        config.set_list("budgets", budgets);
        write_benchmark_results(curves, config, bench_out);
        return 0;
    }

    return 0;
}

} // namespace

int run(int argc, const char* const* argv) {
    try {
        return run_parsed(argc, argv);
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

} // namespace latmove::cli
