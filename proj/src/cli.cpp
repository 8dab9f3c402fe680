#include "gnd/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "gnd/adversary.hpp"
#include "gnd/errors.hpp"
#include "gnd/fractional_solver.hpp"
#include "gnd/instance_io.hpp"
#include "gnd/online_solver.hpp"
#include "gnd/oracles.hpp"
#include "gnd/report_io.hpp"
#include "gnd/verifier.hpp"

namespace gnd::cli {

namespace fs = std::filesystem;

namespace {

struct RunOptions {
    std::string instance_path;
    std::string family;
    std::string cost_kind = "power";
    std::uint64_t seed = 0;
    std::vector<int> size;
    std::string solver = "integral-approx";
    std::string oracle = "auto";
    double epsilon = 0.01;
    std::optional<double> tau_override;
    bool certify = false;
    bool query_trace = false;
    std::string out_dir = ".";
};

Oracle make_oracle(const std::string& name) {
    if (name == "auto") return Oracle{OracleKind::Auto};
    if (name == "exhaustive") return Oracle{OracleKind::Exhaustive};
    if (name == "shortest-path") return Oracle{OracleKind::ShortestPath};
    if (name == "steiner") return Oracle{OracleKind::Steiner};
    if (name == "subset") return Oracle{OracleKind::Subset};
    throw ValidationError("unknown oracle: " + name);
}

Instance obtain_instance(const RunOptions& opt) {
    if (!opt.instance_path.empty()) return load_instance(opt.instance_path);
    if (opt.family.empty())
        throw ValidationError("either --instance or --generate is required");
    GenParams params;
    params.family = opt.family;
    params.cost_kind = opt.cost_kind;
    params.seed = opt.seed;
    if (!opt.size.empty()) {
        if (opt.family == "explicit") {
            params.resources = opt.size[0];
            if (opt.size.size() > 1) params.requests = opt.size[1];
            if (opt.size.size() > 2) params.max_replies = opt.size[2];
        } else {
            params.nodes = opt.size[0];
            if (opt.size.size() > 1) params.requests = opt.size[1];
            if (opt.size.size() > 2) params.extra_edges = opt.size[2];
        }
    }
    return random_instance(params);
}

bool pure_power(const Instance& inst) {
    for (const auto& r : inst.resources)
        if (!std::holds_alternative<PowerCost>(r.cost)) return false;
    return true;
}

void write_file(const fs::path& path, const std::string& body) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << body;
    if (body.empty() || body.back() != '\n') out << "\n";
}

int cmd_run(const RunOptions& opt) {
    Instance inst = obtain_instance(opt);
    Oracle oracle = make_oracle(opt.oracle);
    const double tau = opt.tau_override.value_or(oracle.tau_for(inst));
    fs::create_directories(opt.out_dir);
    const fs::path out(opt.out_dir);
    save_instance(inst, out / "instance.json");

    bool cert_ok = true;
    if (opt.solver == "fractional") {
        if (!pure_power(inst))
            throw ValidationError("the fractional solver needs a power-cost instance");
        if (tau > 1.0)
            throw ValidationError("the fractional solver needs an exact (tau = 1) oracle");
        FractionalReport report = run_fractional(inst, opt.epsilon, oracle, opt.query_trace);
        write_file(out / "fractional_report.json", fractional_report_to_json(report, inst));
        if (opt.certify) {
            Certificate cert = certify_fractional(report, inst);
            write_file(out / "certificate.json", certificate_to_json(cert));
            cert_ok = cert.accepted();
        }
        std::cout << "fractional objective " << report.primal_objective << " with "
                  << report.total_queries << " oracle queries\n";
    } else {
        if (opt.solver != "integral-exact" && opt.solver != "integral-approx")
            throw ValidationError("unknown solver: " + opt.solver);
        const CostMode mode = opt.solver == "integral-exact" ? CostMode::ExactOracle
                                                             : CostMode::ApproxOracle;
        if (mode == CostMode::ExactOracle && tau > 1.0)
            throw ValidationError("integral-exact needs an exact (tau = 1) oracle");
        SolverConfig cfg = SolverConfig::for_instance(inst, tau, mode);
        RunTrace trace;
        if (pure_power(inst)) {
            trace = run_power(inst, cfg, oracle);
        } else {
            if (mode == CostMode::ExactOracle)
                throw ValidationError(
                    "integral-exact runs on power costs; reductions use integral-approx");
            trace = run_rep(inst, tau, oracle);
        }
        std::ofstream jl(out / "trace.jsonl");
        if (!jl) throw ValidationError("cannot write " + (out / "trace.jsonl").string());
        write_trace_jsonl(trace, inst, jl);
        std::ofstream csv(out / "summary.csv");
        if (!csv) throw ValidationError("cannot write " + (out / "summary.csv").string());
        write_trace_csv(trace, csv);
        if (opt.certify) {
            Certificate cert = certify_run(trace, inst, cfg);
            write_file(out / "certificate.json", certificate_to_json(cert));
            cert_ok = cert.accepted();
        }
        std::cout << "cost " << (trace.original_cost ? *trace.original_cost
                                                     : trace.power_objective)
                  << " over " << trace.steps.size() << " requests\n";
    }
    return cert_ok ? 0 : 2;
}

int cmd_adversary(int depth, double alpha, const std::string& out_dir) {
    AdversaryRunReport report = run_tree_adversary(depth, alpha);
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "adversary_report.json", adversary_report_to_json(report));
    save_instance(report.tree.instance, fs::path(out_dir) / "instance.json");
    std::cout << "online " << report.online_cost << " offline " << report.offline_cost
              << " ratio " << report.ratio << "\n";
    const double need = static_cast<double>(depth) / 2.0;
    if (report.ratio < need) {
        std::cerr << "ratio " << report.ratio << " fell below q/2 = " << need << "\n";
        return 2;
    }
    return 0;
}

struct SweepOptions {
    std::string family = "explicit";
    std::string cost_kind = "power";
    int count = 10;
    std::uint64_t seed0 = 1;
    std::string solver = "integral-approx";
    std::vector<double> epsilons;
    std::string out_dir = ".";
};

int cmd_sweep(const SweepOptions& opt) {
    fs::create_directories(opt.out_dir);
    std::ofstream csv(fs::path(opt.out_dir) / "sweep.csv");
    csv << "seed,family,cost_kind,solver,epsilon,tau,alpha_max,q,cost,opt,ratio,bound,queries,"
           "flagged\n";
    std::vector<double> eps = opt.epsilons.empty() ? std::vector<double>{0.01} : opt.epsilons;
    Oracle oracle{OracleKind::Auto};
    for (int k = 0; k < opt.count; ++k) {
        const std::uint64_t seed = opt.seed0 + static_cast<std::uint64_t>(k);
        for (double epsilon : eps) {
            try {
                GenParams params;
                params.family = opt.family;
                params.cost_kind = opt.cost_kind;
                params.seed = seed;
                Instance inst = random_instance(params);
                const double tau = oracle.tau_for(inst);
                const double opt_value = brute_force_opt(inst).opt;
                double cost = 0.0, bound = 0.0, alpha_max = 1.0, q = 0.0;
                long queries = 0;
                if (opt.solver == "fractional") {
                    FractionalReport rep = run_fractional(inst, epsilon, oracle);
                    cost = rep.primal_objective;
                    alpha_max = rep.alpha_max;
                    bound = std::pow(1.0 + epsilon, alpha_max + 1.0) *
                            std::pow(alpha_max, alpha_max);
                    queries = rep.total_queries;
                } else {
                    const CostMode mode = opt.solver == "integral-exact"
                                              ? CostMode::ExactOracle
                                              : CostMode::ApproxOracle;
                    SolverConfig cfg = SolverConfig::for_instance(inst, tau, mode);
                    alpha_max = cfg.alpha_max;
                    RunTrace trace = pure_power(inst) ? run_power(inst, cfg, oracle)
                                                      : run_rep(inst, tau, oracle);
                    cost = trace.original_cost.value_or(trace.power_objective);
                    q = trace.q_max;
                    if (trace.original_cost)
                        bound = 4.0 * (std::max(q, 1.0) * tau +
                                       std::pow(std::exp(1.0) * tau * alpha_max, alpha_max));
                    else
                        bound = 2.0 * std::pow(std::exp(1.0) * alpha_max * tau, alpha_max);
                    queries = static_cast<long>(trace.steps.size());
                }
                const double ratio = opt_value > 0.0 ? cost / opt_value : 0.0;
                const bool flagged = ratio > bound * (1.0 + 1e-9);
                csv << seed << "," << opt.family << "," << opt.cost_kind << "," << opt.solver
                    << "," << epsilon << "," << tau << "," << alpha_max << "," << q << ","
                    << cost << "," << opt_value << "," << ratio << "," << bound << ","
                    << queries << "," << (flagged ? 1 : 0) << "\n";
            } catch (const std::exception& ex) {
                std::cerr << "seed " << seed << " failed: " << ex.what() << "\n";
            }
        }
    }
    return 0;
}

} // namespace

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"online generalized network design harness"};
    app.require_subcommand(1);

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "run a solver on one instance");
    run_cmd->add_option("--instance", run.instance_path, "instance file to load");
    run_cmd->add_option("--generate", run.family, "generator family (explicit|routing|steiner)");
    run_cmd->add_option("--seed", run.seed, "generator seed");
    run_cmd->add_option("--size", run.size, "generator size parameters")->expected(-1);
    run_cmd->add_option("--cost", run.cost_kind, "generator cost kind (power|dos|rep)");
    run_cmd->add_option("--solver", run.solver,
                        "integral-approx | integral-exact | fractional");
    run_cmd->add_option("--oracle", run.oracle,
                        "auto | exhaustive | shortest-path | steiner | subset");
    run_cmd->add_option("--epsilon", run.epsilon, "fractional discretization parameter");
    double tau_cli = 0.0;
    auto* tau_opt = run_cmd->add_option("--tau", tau_cli, "override the oracle guarantee");
    run_cmd->add_flag("--certify", run.certify, "emit a certificate and check it");
    run_cmd->add_flag("--query-trace", run.query_trace, "record every fractional oracle query");
    run_cmd->add_option("--out", run.out_dir, "output directory");

    int adv_depth = 1;
    double adv_alpha = 2.0;
    std::string adv_out = ".";
    auto* adv_cmd = app.add_subcommand("adversary", "drive the adaptive tree lower bound");
    adv_cmd->add_option("--q", adv_depth, "tree depth / number of requests")->required();
    adv_cmd->add_option("--alpha", adv_alpha, "cost exponent");
    adv_cmd->add_option("--out", adv_out, "output directory");

    SweepOptions sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "run a seeded grid and emit a CSV");
    sweep_cmd->add_option("--family", sweep.family, "generator family");
    sweep_cmd->add_option("--cost", sweep.cost_kind, "generator cost kind");
    sweep_cmd->add_option("--count", sweep.count, "number of seeds");
    sweep_cmd->add_option("--seed0", sweep.seed0, "first seed");
    sweep_cmd->add_option("--solver", sweep.solver, "solver to sweep");
    sweep_cmd->add_option("--epsilon", sweep.epsilons, "fractional epsilons")->expected(-1);
    sweep_cmd->add_option("--out", sweep.out_dir, "output directory");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& ex) {
        return app.exit(ex) == 0 ? 0 : 1;
    }

    try {
        if (run_cmd->parsed()) {
            if (tau_opt->count() > 0) run.tau_override = tau_cli;
            return cmd_run(run);
        }
        if (adv_cmd->parsed()) return cmd_adversary(adv_depth, adv_alpha, adv_out);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep);
    } catch (const AdversaryStuck& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 1;
}

int dispatch(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return dispatch(args);
}

} // namespace gnd::cli
