#include "gnd/fractional_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gnd/errors.hpp"

namespace gnd {

namespace {

double max_alpha(const Instance& inst) {
    double a = 1.0;
    for (const auto& r : inst.resources) a = std::max(a, std::get<PowerCost>(r.cost).alpha);
    return a;
}

void require_power(const Instance& inst) {
    for (const auto& r : inst.resources)
        if (!std::holds_alternative<PowerCost>(r.cost))
            throw ValidationError("fractional solver needs power-cost resources only");
}

} // namespace

double init_eta(const Instance& inst, double epsilon) {
    require_power(inst);
    const double m = static_cast<double>(inst.size());
    const double alpha = max_alpha(inst);
    double B = 1.0;
    for (const auto& r : inst.resources) B = std::max(B, std::get<PowerCost>(r.cost).c);
    for (const auto& req : inst.requests)
        for (double w : req.weights) B = std::max(B, w);
    return epsilon / (std::pow(m, 1.0 + alpha) * B);
}

FractionalSolver::FractionalSolver(const Instance& inst, double epsilon, bool record_queries)
    : inst_(&inst), epsilon_(epsilon), record_(record_queries) {
    require_power(inst);
    if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");

    // Rescale so every positive coefficient is at least one; zero-cost
    // resources stay at zero and never drive a re-query.
    double min_pos = std::numeric_limits<double>::infinity();
    for (const auto& r : inst.resources) {
        const double c = std::get<PowerCost>(r.cost).c;
        if (c > 0.0) min_pos = std::min(min_pos, c);
    }
    scale_ = std::isfinite(min_pos) ? 1.0 / min_pos : 1.0;
    for (const auto& r : inst.resources) {
        PowerCost g = std::get<PowerCost>(r.cost);
        g.c *= scale_;
        scaled_.push_back(g);
    }
    alpha_max_ = max_alpha(inst);
    B_ = 1.0;
    for (const auto& g : scaled_) B_ = std::max(B_, g.c);
    for (const auto& req : inst.requests)
        for (double w : req.weights) B_ = std::max(B_, w);
    eta_ = epsilon_ / (std::pow(static_cast<double>(inst.size()), 1.0 + alpha_max_) * B_);

    loads_.assign(inst.size(), eta_);
    report_.epsilon = epsilon_;
    report_.eta = eta_;
    report_.scale = scale_;
    report_.B = B_;
    report_.alpha_max = alpha_max_;
}

void FractionalSolver::step(const Request& req, const Oracle& oracle) {
    // Gradient costs under the current loads (scaled coefficients).
    auto gradient_costs = [&](std::vector<double>& d) {
        d.resize(inst_->size());
        for (std::size_t e = 0; e < inst_->size(); ++e)
            d[e] = scaled_[e].alpha * scaled_[e].c *
                   std::pow(loads_[e], scaled_[e].alpha - 1.0) * req.weights[e];
    };
    // Live cost of a reply after advancing its variable for `t` more time.
    auto live_cost = [&](const Reply& reply, double t) {
        double s = 0.0;
        for (int e : reply)
            s += scaled_[e].alpha * scaled_[e].c *
                 std::pow(loads_[e] + req.weights[e] * t, scaled_[e].alpha - 1.0) *
                 req.weights[e];
        return s;
    };
    auto advance = [&](const Reply& reply, double t, std::map<Reply, double>& shares) {
        for (int e : reply) loads_[e] += req.weights[e] * t;
        shares[reply] += t;
    };

    // Every reply the oracle has revealed so far; their live costs are
    // recomputable from the loads, so switching between them is free. A new
    // query fires only once every known reply has crossed (1+eps) times the
    // cost the last query returned. Costs never decrease and all replies
    // stay at or above that floor, so the reply being raised is always a
    // (1+eps)-approximate min-cost reply.
    std::map<Reply, double> shares;
    std::vector<Reply> pool;
    std::vector<char> crossed; // pool member finished its window
    std::vector<double> d;
    double floor = 0.0;
    bool have_floor = false;
    int queries = 0;
    double elapsed = 0.0;
    Reply last_grown;
    while (elapsed < 1.0) {
        const double remaining = 1.0 - elapsed;
        const double window = (1.0 + epsilon_) * floor;
        int grow = -1;
        double grow_cost = std::numeric_limits<double>::infinity();
        if (have_floor) {
            for (std::size_t k = 0; k < pool.size(); ++k) {
                if (crossed[k]) continue;
                const double c = live_cost(pool[k], 0.0);
                if (c <= window && c < grow_cost) {
                    grow_cost = c;
                    grow = static_cast<int>(k);
                }
            }
        }
        if (grow < 0) {
            gradient_costs(d);
            OracleAnswer ans;
            try {
                ans = oracle.query(*inst_, req, d);
            } catch (const NoPath& ex) {
                throw UnsatisfiableRequest(ex.what());
            } catch (const Disconnected& ex) {
                throw UnsatisfiableRequest(ex.what());
            }
            ++queries;
            if (record_)
                report_.query_trace.push_back(
                    {req.index, elapsed, ans.cost,
                     last_grown.empty() ? 0.0 : live_cost(last_grown, 0.0), ans.reply});
            if (ans.cost > floor || !have_floor) {
                floor = ans.cost;
                have_floor = true;
                crossed.assign(pool.size(), 0); // the window moved up
            }
            if (std::find(pool.begin(), pool.end(), ans.reply) == pool.end()) {
                pool.push_back(ans.reply);
                crossed.push_back(0);
            }
            continue;
        }

        const Reply& p = pool[grow];
        double t = remaining;
        bool hit_window = false;
        if (floor > 0.0 && live_cost(p, remaining) > window) {
            // Find the crossing time, staying on the feasible side of it.
            double lo = 0.0, hi = remaining;
            for (int it = 0; it < 200 && hi - lo > 1e-10 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                (live_cost(p, mid) > window ? hi : lo) = mid;
            }
            t = lo > 0.0 ? lo : hi;
            hit_window = true;
        }
        advance(p, t, shares);
        elapsed += t;
        last_grown = p;
        if (hit_window) crossed[grow] = 1;
        if (t >= remaining) break;
    }

    report_.supports.emplace_back();
    for (const auto& [reply, x] : shares) report_.supports.back().push_back({reply, x});
    report_.queries_per_request.push_back(queries);
    report_.total_queries += queries;
}

FractionalReport FractionalSolver::finish() && {
    report_.final_loads = loads_;
    double primal = 0.0, initial = 0.0;
    for (std::size_t e = 0; e < inst_->size(); ++e) {
        const auto& g = std::get<PowerCost>(inst_->resources[e].cost);
        primal += eval_power(g, loads_[e]);
        initial += eval_power(g, eta_);
    }
    report_.primal_objective = primal;
    report_.initial_objective = initial;
    return std::move(report_);
}

FractionalReport run_fractional(const Instance& inst, double epsilon, const Oracle& oracle,
                                bool record_queries) {
    FractionalSolver solver(inst, epsilon, record_queries);
    for (const auto& req : inst.requests) solver.step(req, oracle);
    return std::move(solver).finish();
}

} // namespace gnd
