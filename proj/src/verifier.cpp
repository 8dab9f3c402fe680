#include "gnd/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "gnd/errors.hpp"
#include "gnd/oracles.hpp"

namespace gnd {

namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kChainTol = 1e-7;

double rel_slack(double lhs, double rhs) {
    // Constraint lhs <= rhs; positive slack means satisfied.
    return (rhs - lhs) / std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
}

bool has_dummy(DualProgram program, double alpha) {
    switch (program) {
    case DualProgram::D:
        return false;
    case DualProgram::DPrime:
        return true;
    case DualProgram::DDoublePrime:
        return alpha > 1.0;
    }
    return false;
}

// Per-resource price of using e in request i under a dual solution: the
// copies' w*c*alpha*z terms plus, where a dummy exists, its weight
// (c*alpha/e^alpha_max)*w^alpha times the dummy's z.
std::vector<double> dual_prices(const Instance& inst, const PowerView& view,
                                const DualSolution& dual, const Request& req) {
    std::vector<double> price(inst.size(), 0.0);
    const double damp = std::exp(-view.alpha_max);
    for (std::size_t e = 0; e < inst.size(); ++e) {
        const double w = req.weights[e];
        const auto [begin, end] = view.span[e];
        double p = 0.0;
        for (int k = begin; k < end; ++k) {
            const PowerCost& g = view.copies[k].g;
            p += w * g.c * g.alpha * dual.z[k];
            if (has_dummy(dual.program, g.alpha))
                p += g.c * g.alpha * damp * std::pow(w, g.alpha) * dual.z_dummy[k];
        }
        price[e] = p;
    }
    return price;
}

std::vector<Reply> candidate_replies(const Instance& inst, const Request& req,
                                     std::size_t budget) {
    return minimal_replies(inst, req, budget);
}

std::vector<double> fill_beta(const PowerView& view) {
    std::vector<double> beta;
    beta.reserve(view.copies.size());
    for (const auto& c : view.copies)
        beta.push_back(c.g.alpha > 1.0 ? c.g.alpha / (c.g.alpha - 1.0)
                                       : std::numeric_limits<double>::infinity());
    return beta;
}

} // namespace

bool Certificate::accepted() const {
    if (status == "uncertified") return true;
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
}

BruteForceResult brute_force_opt(const Instance& inst, std::size_t budget) {
    return brute_force_opt(inst, budget,
                           [&](const LoadVector& loads) { return total_cost(loads, inst); });
}

BruteForceResult brute_force_opt(const Instance& inst, std::size_t budget,
                                 const std::function<double(const LoadVector&)>& objective) {
    std::vector<std::vector<Reply>> candidates;
    std::size_t combos = 1;
    for (const auto& req : inst.requests) {
        candidates.push_back(candidate_replies(inst, req, budget));
        if (candidates.back().empty())
            throw UnsatisfiableRequest("request " + std::to_string(req.index) +
                                       " has no valid reply");
        if (combos > budget / candidates.back().size())
            throw BudgetExceeded("reply combination count exceeds budget");
        combos *= candidates.back().size();
    }
    BruteForceResult best;
    best.opt = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> pick(inst.requests.size(), 0);
    while (true) {
        LoadVector loads = zero_loads(inst);
        for (std::size_t i = 0; i < inst.requests.size(); ++i)
            for (int e : candidates[i][pick[i]]) loads[e] += inst.requests[i].weights[e];
        const double value = objective(loads);
        if (value < best.opt) {
            best.opt = value;
            best.replies.clear();
            for (std::size_t i = 0; i < inst.requests.size(); ++i)
                best.replies.push_back(candidates[i][pick[i]]);
        }
        // Odometer over the candidate lists.
        std::size_t i = 0;
        for (; i < pick.size(); ++i) {
            if (++pick[i] < candidates[i].size()) break;
            pick[i] = 0;
        }
        if (i == pick.size()) break;
    }
    return best;
}

double exact_min_reply_cost(const Instance& inst, const Request& req,
                            std::span<const double> price, std::size_t budget) {
    if (std::holds_alternative<ExplicitReplies>(req.replies))
        return exhaustive_oracle(req, price).cost;
    if (const auto* rt = std::get_if<RoutePair>(&req.replies))
        return shortest_path_oracle(inst, *rt, price).cost;
    try {
        return subset_oracle(inst, req, price, budget).cost;
    } catch (const BudgetExceeded&) {
        throw RequiresExactOracle(
            "connectivity request too large to enumerate for an exact reply minimum");
    }
}

DualSolution build_dual_integral(const RunTrace& trace, const SolverConfig& cfg,
                                 const Instance& inst, std::size_t budget) {
    const PowerView view = PowerView::of(inst);
    DualSolution dual;
    dual.program = cfg.mode == CostMode::ApproxOracle ? DualProgram::DDoublePrime
                                                      : DualProgram::DPrime;
    dual.beta = fill_beta(view);
    dual.z.resize(view.copies.size(), 0.0);
    dual.z_dummy.assign(view.copies.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t k = 0; k < view.copies.size(); ++k) {
        const auto& copy = view.copies[k];
        const double load = trace.final_loads.empty() ? 0.0 : trace.final_loads[copy.origin];
        if (dual.program == DualProgram::DDoublePrime && copy.g.alpha == 1.0)
            dual.z[k] = 1.0;
        else
            dual.z[k] = std::pow(load, copy.g.alpha - 1.0) / cfg.rho;
        if (has_dummy(dual.program, copy.g.alpha)) dual.z_dummy[k] = 1.0;
    }
    for (const auto& req : inst.requests) {
        auto price = dual_prices(inst, view, dual, req);
        dual.y.push_back(exact_min_reply_cost(inst, req, price, budget));
    }
    return dual;
}

DualSolution make_fractional_dual(const Instance& inst, const LoadVector& loads, double delta,
                                  std::size_t budget) {
    const PowerView view = PowerView::of(inst);
    DualSolution dual;
    dual.program = DualProgram::D;
    dual.beta = fill_beta(view);
    dual.z.resize(view.copies.size(), 0.0);
    dual.z_dummy.assign(view.copies.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t k = 0; k < view.copies.size(); ++k) {
        const auto& copy = view.copies[k];
        const double load = copy.origin < static_cast<int>(loads.size()) ? loads[copy.origin] : 0.0;
        dual.z[k] = delta * std::pow(load, copy.g.alpha - 1.0);
    }
    for (const auto& req : inst.requests) {
        auto price = dual_prices(inst, view, dual, req);
        dual.y.push_back(exact_min_reply_cost(inst, req, price, budget));
    }
    return dual;
}

DualSolution build_dual_fractional(const FractionalReport& report, const Instance& inst,
                                   double delta, std::size_t budget) {
    return make_fractional_dual(inst, report.final_loads, delta, budget);
}

CheckResult check_dual_feasible(const DualSolution& dual, const Instance& inst,
                                std::size_t budget) {
    const PowerView view = PowerView::of(inst);
    CheckResult res;
    res.name = "dual_feasible";
    res.pass = true;
    res.slack = std::numeric_limits<double>::infinity();
    auto record = [&](double slack, const std::string& what) {
        if (slack < res.slack) res.slack = slack;
        if (slack < -kFeasTol && res.pass) {
            res.pass = false;
            res.detail = what;
        }
    };
    for (std::size_t k = 0; k < view.copies.size(); ++k) {
        record(rel_slack(0.0, dual.z[k]), "z must be nonnegative");
        if (view.copies[k].g.alpha == 1.0)
            record(rel_slack(dual.z[k], 1.0), "z exceeds 1 on a linear resource");
        if (has_dummy(dual.program, view.copies[k].g.alpha)) {
            record(rel_slack(0.0, dual.z_dummy[k]), "dummy z must be nonnegative");
            record(rel_slack(dual.z_dummy[k], 1.0), "dummy z exceeds 1");
        }
    }
    for (std::size_t i = 0; i < inst.requests.size(); ++i) {
        const Request& req = inst.requests[i];
        record(rel_slack(0.0, dual.y[i]), "y must be nonnegative");
        auto price = dual_prices(inst, view, dual, req);
        for (const auto& reply : candidate_replies(inst, req, budget)) {
            double lhs = 0.0;
            for (int e : reply) lhs += price[e];
            record(rel_slack(dual.y[i], lhs),
                   "reply constraint violated for request " + std::to_string(req.index));
        }
    }
    if (res.pass) res.detail = "all reply and box constraints hold";
    return res;
}

double dual_objective(const DualSolution& dual, const Instance& inst) {
    const PowerView view = PowerView::of(inst);
    double value = 0.0;
    for (double yi : dual.y) value += yi;
    for (std::size_t k = 0; k < view.copies.size(); ++k) {
        const PowerCost& g = view.copies[k].g;
        if (g.alpha <= 1.0) continue; // no conjugate term for linear resources
        const double beta = dual.beta[k];
        value -= g.c * g.alpha / beta * std::pow(dual.z[k], beta);
    }
    return value;
}

double primal_objective_value(const Instance& inst,
                              const std::vector<std::vector<ReplyShare>>& x) {
    const PowerView view = PowerView::of(inst);
    LoadVector loads = zero_loads(inst);
    for (std::size_t i = 0; i < x.size() && i < inst.requests.size(); ++i)
        for (const auto& share : x[i])
            for (int e : share.reply) loads[e] += inst.requests[i].weights[e] * share.x;
    double value = 0.0;
    for (const auto& copy : view.copies) value += eval_power(copy.g, loads[copy.origin]);
    return value;
}

Certificate certify_run(const RunTrace& trace, const Instance& inst, const SolverConfig& cfg,
                        std::size_t budget) {
    Certificate cert;
    const PowerView view = PowerView::of(inst);
    const double e = std::exp(1.0);
    const double a = cfg.alpha_max;
    const double tau = cfg.tau;
    const bool approx = cfg.mode == CostMode::ApproxOracle;
    const bool pipeline = trace.original_cost.has_value();
    cert.primal_value = pipeline ? *trace.original_cost : trace.power_objective;
    try {
        DualSolution dual = build_dual_integral(trace, cfg, inst, budget);
        cert.dual_objective = dual_objective(dual, inst);
        cert.checks.push_back(check_dual_feasible(dual, inst, budget));

        // Lower side of the analysis chain.
        CheckResult lower;
        lower.name = "chain_lower";
        const double denom = std::pow(e * tau * a, a);
        const double lhs = approx
                               ? trace.cost_linear / tau + trace.cost_power / denom
                               : trace.power_objective / std::pow(e * a, a);
        lower.slack = rel_slack(lhs, cert.dual_objective);
        lower.pass = lower.slack >= -kChainTol;
        lower.detail = "scaled algorithm cost is below the dual objective";
        cert.checks.push_back(lower);

        // Upper side: dual objective against the strengthened optimum.
        const double opt_power =
            brute_force_opt(inst, budget,
                            [&](const LoadVector& loads) {
                                double v = 0.0;
                                for (const auto& c : view.copies)
                                    v += eval_power(c.g, loads[c.origin]);
                                return v;
                            })
                .opt;
        CheckResult upper;
        upper.name = "chain_upper";
        upper.slack = rel_slack(cert.dual_objective, (1.0 + a * std::exp(-a)) * opt_power);
        upper.pass = upper.slack >= -kChainTol;
        upper.detail = "dual objective is below (1 + a*e^-a) times the reduced optimum";
        cert.checks.push_back(upper);

        // Weak duality against the run's own solution viewed as a primal
        // point of the strengthened program.
        double strengthened = trace.power_objective;
        const double damp = std::exp(-a);
        for (const auto& step : trace.steps) {
            if (step.request < 0 || step.request >= static_cast<int>(inst.requests.size()))
                continue;
            const Request& req = inst.requests[step.request];
            for (int r : step.reply) {
                const auto [begin, end] = view.span[r];
                for (int k = begin; k < end; ++k) {
                    const PowerCost& g = view.copies[k].g;
                    if (has_dummy(dual.program, g.alpha))
                        strengthened +=
                            g.c * g.alpha * damp * std::pow(req.weights[r], g.alpha);
                }
            }
        }
        CheckResult weak;
        weak.name = "weak_duality_self";
        weak.slack = rel_slack(cert.dual_objective, strengthened);
        weak.pass = weak.slack >= -kChainTol;
        weak.detail = "dual objective is below the strengthened primal value";
        cert.checks.push_back(weak);

        // End-to-end competitive bound against the exact offline optimum.
        const double opt = brute_force_opt(inst, budget).opt;
        cert.opt = opt;
        cert.ratio = opt > 0.0 ? cert.primal_value / opt
                               : (cert.primal_value > 0.0
                                      ? std::numeric_limits<double>::infinity()
                                      : 1.0);
        if (pipeline)
            cert.bound = 4.0 * (std::max(trace.q_max, 1.0) * tau + std::pow(e * tau * a, a));
        else
            cert.bound = approx ? 2.0 * std::pow(e * a * tau, a) : 2.0 * std::pow(e * a, a);
        CheckResult comp;
        comp.name = "competitive_bound";
        comp.slack = rel_slack(cert.primal_value, cert.bound * opt);
        comp.pass = comp.slack >= -kFeasTol;
        comp.detail = "algorithm cost is within the theoretical factor of the optimum";
        cert.checks.push_back(comp);

        if (approx && !pipeline) {
            // Separate guarantees for the linear and superlinear parts.
            CheckResult lbound;
            lbound.name = "linear_cost_bound";
            lbound.slack = rel_slack(trace.cost_linear, 2.0 * tau * opt);
            lbound.pass = lbound.slack >= -kFeasTol;
            lbound.detail = "linear-resource cost is within 2*tau of the optimum";
            cert.checks.push_back(lbound);
            CheckResult hbound;
            hbound.name = "power_cost_bound";
            hbound.slack = rel_slack(trace.cost_power, 2.0 * denom * opt);
            hbound.pass = hbound.slack >= -kFeasTol;
            hbound.detail = "superlinear cost is within 2*(e*tau*a)^a of the optimum";
            cert.checks.push_back(hbound);
        }
    } catch (const BudgetExceeded&) {
        cert.status = "uncertified";
        cert.checks.clear();
    } catch (const RequiresExactOracle&) {
        cert.status = "uncertified";
        cert.checks.clear();
    }
    return cert;
}

Certificate certify_fractional(const FractionalReport& report, const Instance& inst,
                               std::size_t budget) {
    Certificate cert;
    cert.primal_value = report.primal_objective;
    const double a = report.alpha_max;
    const double eps = report.epsilon;

    CheckResult covering;
    covering.name = "covering_feasible";
    covering.slack = std::numeric_limits<double>::infinity();
    covering.pass = true;
    for (const auto& shares : report.supports) {
        double sum = 0.0;
        for (const auto& s : shares) sum += s.x;
        covering.slack = std::min(covering.slack, rel_slack(1.0, sum));
    }
    if (report.supports.empty()) covering.slack = 0.0;
    covering.pass = covering.slack >= -kFeasTol;
    covering.detail = "every request is fractionally covered";
    cert.checks.push_back(covering);

    CheckResult queries;
    queries.name = "query_bound";
    queries.slack = std::numeric_limits<double>::infinity();
    const double m = static_cast<double>(inst.size());
    const double n = static_cast<double>(inst.requests.size());
    const double log_arg = a * m * std::pow(n, a - 1.0) * std::pow(report.B, a + 1.0) /
                           std::pow(report.eta, a - 1.0);
    const double per_request_bound = 1.0 + std::log(log_arg) / std::log1p(eps);
    for (int q : report.queries_per_request)
        queries.slack = std::min(queries.slack, rel_slack(static_cast<double>(q),
                                                          per_request_bound));
    if (report.queries_per_request.empty()) queries.slack = 0.0;
    queries.pass = queries.slack >= -kFeasTol;
    queries.detail = "per-request oracle query count respects the discretization bound";
    cert.checks.push_back(queries);

    try {
        const double delta = std::pow(1.0 / (a * (1.0 + eps)), a - 1.0);
        DualSolution dual = build_dual_fractional(report, inst, delta, budget);
        cert.dual_objective = dual_objective(dual, inst);
        cert.checks.push_back(check_dual_feasible(dual, inst, budget));

        CheckResult weak;
        weak.name = "weak_duality_self";
        weak.slack = rel_slack(cert.dual_objective, report.primal_objective);
        weak.pass = weak.slack >= -kChainTol;
        weak.detail = "dual objective is below the fractional primal value";
        cert.checks.push_back(weak);

        if (!inst.requests.empty()) {
            const double opt = brute_force_opt(inst, budget).opt;
            cert.opt = opt;
            cert.bound = std::pow(1.0 + eps, a + 1.0) * std::pow(a, a);
            cert.ratio = opt > 0.0 ? report.primal_objective / opt : 0.0;
            CheckResult primal;
            primal.name = "fractional_bound";
            primal.slack = rel_slack(report.primal_objective, cert.bound * opt);
            primal.pass = primal.slack >= -kFeasTol;
            primal.detail = "fractional objective is within (1+eps)^(a+1)*a^a of the optimum";
            cert.checks.push_back(primal);
        }
    } catch (const BudgetExceeded&) {
        cert.status = "uncertified";
    } catch (const RequiresExactOracle&) {
        cert.status = "uncertified";
    }
    return cert;
}

std::vector<CheckResult> inequality_suite(std::uint64_t seed, int samples) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> value(0.0, 1000.0);
    std::uniform_real_distribution<double> exponent(1.0, 6.0);

    CheckResult split;
    split.name = "shifted_power_split";
    split.slack = std::numeric_limits<double>::infinity();
    const double e = std::exp(1.0);
    for (int s = 0; s < samples; ++s) {
        const double x = value(rng), y = value(rng), a = exponent(rng);
        const double lhs = std::pow(x + y, a - 1.0);
        const double rhs = e * std::pow(x, a - 1.0) + std::pow(a, a - 1.0) * std::pow(y, a - 1.0);
        split.slack = std::min(split.slack, rel_slack(lhs, rhs));
    }
    split.pass = split.slack >= -kFeasTol;
    split.detail = "(X+Y)^(a-1) <= e*X^(a-1) + a^(a-1)*Y^(a-1)";

    CheckResult young;
    young.name = "young_inequality";
    young.slack = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        const double x = value(rng), y = value(rng);
        double a = exponent(rng);
        if (a <= 1.0) a = std::nextafter(1.0, 2.0);
        const double b = a / (a - 1.0);
        const double lhs = x * y;
        const double rhs = std::pow(x, a) / a + std::pow(y, b) / b;
        young.slack = std::min(young.slack, rel_slack(lhs, rhs));
    }
    young.pass = young.slack >= -kFeasTol;
    young.detail = "A*B <= A^a/a + B^b/b for conjugate exponents";

    return {split, young};
}

} // namespace gnd
