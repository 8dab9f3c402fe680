#include "gnd/online_solver.hpp"

#include <cmath>
#include <limits>

#include "gnd/errors.hpp"

namespace gnd {

double SolverConfig::rho_for(double alpha_max, double tau, CostMode mode) {
    const double base = mode == CostMode::ApproxOracle ? std::exp(1.0) * tau * alpha_max
                                                       : std::exp(1.0) * alpha_max;
    return std::exp((alpha_max - 1.0) * std::log(base));
}

SolverConfig SolverConfig::for_instance(const Instance& inst, double tau, CostMode mode) {
    SolverConfig cfg;
    cfg.alpha_max = PowerView::of(inst).alpha_max;
    cfg.tau = tau;
    cfg.mode = mode;
    cfg.rho = rho_for(cfg.alpha_max, tau, mode);
    return cfg;
}

PowerView PowerView::of(const Instance& inst) {
    PowerView view;
    view.alpha_max = 1.0;
    for (const auto& r : inst.resources) {
        const int begin = static_cast<int>(view.copies.size());
        for (const auto& g : power_copies(r.cost))
            view.copies.push_back({static_cast<int>(view.span.size()), g});
        view.span.push_back({begin, static_cast<int>(view.copies.size())});
        if (const auto* d = std::get_if<DoSCost>(&r.cost)) {
            view.q_max = std::max(view.q_max, q_value(*d));
        } else if (const auto* rep = std::get_if<RepCost>(&r.cost)) {
            // REP resources contribute their cheapest term's crossover load.
            double inner = std::numeric_limits<double>::infinity();
            for (const auto& t : rep->terms)
                inner = std::min(inner, rep->sigma == 0.0
                                            ? 0.0
                                            : std::pow(rep->sigma / t.xi, 1.0 / t.alpha));
            view.q_max = std::max(view.q_max, inner);
        }
    }
    for (const auto& c : view.copies) view.alpha_max = std::max(view.alpha_max, c.g.alpha);
    return view;
}

double modified_cost_exact(const PowerCost& g, double load, double w, const SolverConfig& cfg) {
    const double gradient = g.alpha * g.c * std::pow(load, g.alpha - 1.0) * w;
    const double penalty =
        cfg.rho / std::exp(cfg.alpha_max) * g.c * g.alpha * std::pow(w, g.alpha);
    return gradient + penalty;
}

double modified_cost_approx(const PowerCost& g, double load, double w, const SolverConfig& cfg) {
    if (g.alpha == 1.0) return cfg.rho * g.c * w;
    return modified_cost_exact(g, load, w, cfg);
}

OnlineSolver::OnlineSolver(const Instance& inst, const SolverConfig& cfg)
    : inst_(&inst), view_(PowerView::of(inst)), cfg_(cfg), loads_(zero_loads(inst)) {
    trace_.cfg = cfg_;
    trace_.q_max = view_.q_max;
}

const StepRecord& OnlineSolver::step(const Request& req, const Oracle& oracle) {
    StepRecord rec;
    rec.request = req.index;
    rec.queried.assign(inst_->size(), 0.0);
    for (std::size_t e = 0; e < inst_->size(); ++e) {
        const auto [begin, end] = view_.span[e];
        double psi = 0.0;
        for (int k = begin; k < end; ++k) {
            const PowerCost& g = view_.copies[k].g;
            psi += cfg_.mode == CostMode::ApproxOracle
                       ? modified_cost_approx(g, loads_[e], req.weights[e], cfg_)
                       : modified_cost_exact(g, loads_[e], req.weights[e], cfg_);
        }
        rec.queried[e] = psi;
    }
    OracleAnswer ans;
    try {
        ans = oracle.query(*inst_, req, rec.queried);
    } catch (const NoPath& ex) {
        throw UnsatisfiableRequest(ex.what());
    } catch (const Disconnected& ex) {
        throw UnsatisfiableRequest(ex.what());
    }
    rec.reply = ans.reply;
    rec.oracle_cost = ans.cost;
    const double e_rho = std::exp(1.0) * cfg_.rho;
    for (int e : rec.reply) {
        const double w = req.weights[e];
        const auto [begin, end] = view_.span[e];
        for (int k = begin; k < end; ++k) {
            const PowerCost& g = view_.copies[k].g;
            const double delta =
                eval_power(g, loads_[e] + w) - eval_power(g, loads_[e]);
            rec.marginal_increase += delta;
            rec.modified_increase += g.alpha == 1.0 ? e_rho * delta : delta;
        }
    }
    // Commit through apply_reply so the reply is validated exactly once.
    loads_ = apply_reply(loads_, *inst_, req, rec.reply);
    trace_.steps.push_back(std::move(rec));
    return trace_.steps.back();
}

RunTrace OnlineSolver::finish() && {
    trace_.final_loads = loads_;
    trace_.cost_linear = 0.0;
    trace_.cost_power = 0.0;
    for (const auto& c : view_.copies) {
        const double v = eval_power(c.g, loads_[c.origin]);
        (c.g.alpha == 1.0 ? trace_.cost_linear : trace_.cost_power) += v;
    }
    trace_.power_objective = trace_.cost_linear + trace_.cost_power;
    bool pure_power = true;
    for (const auto& r : inst_->resources)
        if (!std::holds_alternative<PowerCost>(r.cost)) pure_power = false;
    if (!pure_power) trace_.original_cost = total_cost(loads_, *inst_);
    return std::move(trace_);
}

RunTrace run_power(const Instance& inst, const SolverConfig& cfg, const Oracle& oracle) {
    for (const auto& r : inst.resources)
        if (!std::holds_alternative<PowerCost>(r.cost))
            throw ValidationError("run_power needs power-cost resources only");
    OnlineSolver solver(inst, cfg);
    for (const auto& req : inst.requests) solver.step(req, oracle);
    return std::move(solver).finish();
}

namespace {

RunTrace run_pipeline(const Instance& inst, double tau, const Oracle& oracle) {
    SolverConfig cfg = SolverConfig::for_instance(inst, tau, CostMode::ApproxOracle);
    OnlineSolver solver(inst, cfg);
    for (const auto& req : inst.requests) solver.step(req, oracle);
    return std::move(solver).finish();
}

} // namespace

RunTrace run_dos(const Instance& inst, double tau, const Oracle& oracle) {
    for (const auto& r : inst.resources)
        if (std::holds_alternative<RepCost>(r.cost))
            throw ValidationError("run_dos does not take REP resources; use run_rep");
    return run_pipeline(inst, tau, oracle);
}

RunTrace run_rep(const Instance& inst, double tau, const Oracle& oracle) {
    return run_pipeline(inst, tau, oracle);
}

} // namespace gnd
