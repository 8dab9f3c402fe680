#include "gnd/report_io.hpp"

#include <json.hpp>

namespace gnd {

using nlohmann::json;

namespace {

json reply_ids(const Reply& reply, const Instance& inst) {
    json arr = json::array();
    for (int e : reply) arr.push_back(inst.resources[e].id);
    return arr;
}

} // namespace

void write_trace_jsonl(const RunTrace& trace, const Instance& inst, std::ostream& out) {
    for (const auto& step : trace.steps) {
        json rec;
        rec["request"] = step.request;
        rec["reply"] = reply_ids(step.reply, inst);
        rec["oracle_cost"] = step.oracle_cost;
        rec["marginal_increase"] = step.marginal_increase;
        json queried = json::object();
        for (std::size_t e = 0; e < step.queried.size(); ++e)
            queried[inst.resources[e].id] = step.queried[e];
        rec["queried_costs"] = queried;
        out << rec.dump() << "\n";
    }
    json summary;
    summary["summary"] = true;
    json loads = json::object();
    for (std::size_t e = 0; e < trace.final_loads.size(); ++e)
        loads[inst.resources[e].id] = trace.final_loads[e];
    summary["loads"] = loads;
    summary["cost_linear"] = trace.cost_linear;
    summary["cost_power"] = trace.cost_power;
    summary["power_objective"] = trace.power_objective;
    if (trace.original_cost) summary["original_cost"] = *trace.original_cost;
    summary["q_max"] = trace.q_max;
    summary["rho"] = trace.cfg.rho;
    summary["alpha_max"] = trace.cfg.alpha_max;
    summary["tau"] = trace.cfg.tau;
    summary["mode"] =
        trace.cfg.mode == CostMode::ApproxOracle ? "integral-approx" : "integral-exact";
    out << summary.dump() << "\n";
}

void write_trace_csv(const RunTrace& trace, std::ostream& out) {
    out << "request,marginal_cost,cumulative_cost\n";
    double cumulative = 0.0;
    for (const auto& step : trace.steps) {
        cumulative += step.marginal_increase;
        out << step.request << "," << step.marginal_increase << "," << cumulative << "\n";
    }
}

std::string certificate_to_json(const Certificate& cert) {
    json j;
    j["status"] = cert.status;
    j["primal_value"] = cert.primal_value;
    j["dual_objective"] = cert.dual_objective;
    if (cert.opt) j["opt"] = *cert.opt;
    j["ratio"] = cert.ratio;
    j["bound"] = cert.bound;
    j["pass"] = cert.accepted();
    j["checks"] = json::array();
    for (const auto& c : cert.checks)
        j["checks"].push_back(
            {{"name", c.name}, {"pass", c.pass}, {"slack", c.slack}, {"detail", c.detail}});
    return j.dump(2);
}

std::string fractional_report_to_json(const FractionalReport& report, const Instance& inst) {
    json j;
    j["epsilon"] = report.epsilon;
    j["eta"] = report.eta;
    j["scale"] = report.scale;
    j["B"] = report.B;
    j["alpha_max"] = report.alpha_max;
    j["primal_objective"] = report.primal_objective;
    j["initial_objective"] = report.initial_objective;
    j["total_queries"] = report.total_queries;
    j["queries_per_request"] = report.queries_per_request;
    json supports = json::array();
    for (const auto& shares : report.supports) {
        json per = json::array();
        for (const auto& s : shares)
            per.push_back({{"reply", reply_ids(s.reply, inst)}, {"x", s.x}});
        supports.push_back(per);
    }
    j["supports"] = supports;
    json loads = json::object();
    for (std::size_t e = 0; e < report.final_loads.size(); ++e)
        loads[inst.resources[e].id] = report.final_loads[e];
    j["final_loads"] = loads;
    if (!report.query_trace.empty()) {
        json qs = json::array();
        for (const auto& q : report.query_trace)
            qs.push_back({{"request", q.request},
                          {"elapsed", q.elapsed},
                          {"cost_at_selection", q.cost_at_selection},
                          {"live_cost_before", q.live_cost_before},
                          {"reply", reply_ids(q.reply, inst)}});
        j["query_trace"] = qs;
    }
    return j.dump(2);
}

std::string adversary_report_to_json(const AdversaryRunReport& report) {
    json j;
    j["depth"] = report.tree.depth;
    j["alpha"] = report.tree.alpha;
    j["sigma"] = report.tree.sigma;
    j["online_cost"] = report.online_cost;
    j["offline_cost"] = report.offline_cost;
    j["ratio"] = report.ratio;
    j["used_source_edges"] = report.used_source_edges;
    json sinks = json::array();
    for (int v : report.sinks) sinks.push_back(report.tree.instance.graph->nodes[v]);
    j["sinks"] = sinks;
    return j.dump(2);
}

} // namespace gnd
