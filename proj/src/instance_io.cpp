#include "gnd/instance_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "gnd/errors.hpp"

namespace gnd {

using nlohmann::json;

namespace {

CostFunction parse_cost(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "dos")
        return DoSCost{j.at("sigma").get<double>(), j.at("xi").get<double>(),
                       j.at("alpha").get<double>()};
    if (kind == "power")
        return PowerCost{j.at("c").get<double>(), j.at("alpha").get<double>()};
    if (kind == "rep") {
        RepCost r;
        r.sigma = j.at("sigma").get<double>();
        for (const auto& t : j.at("terms"))
            r.terms.push_back({t.at("xi").get<double>(), t.at("alpha").get<double>()});
        return r;
    }
    throw ValidationError("unknown cost kind: " + kind);
}

json cost_to_json(const CostFunction& f) {
    json j;
    if (const auto* d = std::get_if<DoSCost>(&f)) {
        j = {{"kind", "dos"}, {"sigma", d->sigma}, {"xi", d->xi}, {"alpha", d->alpha}};
    } else if (const auto* p = std::get_if<PowerCost>(&f)) {
        j = {{"kind", "power"}, {"c", p->c}, {"alpha", p->alpha}};
    } else {
        const auto& r = std::get<RepCost>(f);
        j["kind"] = "rep";
        j["sigma"] = r.sigma;
        j["terms"] = json::array();
        for (const auto& t : r.terms) j["terms"].push_back({{"xi", t.xi}, {"alpha", t.alpha}});
    }
    return j;
}

int require_node(const Graph& g, const std::string& name) {
    int idx = g.node_index(name);
    if (idx < 0) throw ValidationError("unknown node: " + name);
    return idx;
}

} // namespace

Instance parse_instance(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& ex) {
        throw ValidationError(std::string("instance is not valid JSON: ") + ex.what());
    }
    Instance inst;
    try {
        std::map<std::string, int> rid;
        for (const auto& jr : doc.at("resources")) {
            Resource r{jr.at("id").get<std::string>(), parse_cost(jr.at("cost"))};
            if (!rid.emplace(r.id, static_cast<int>(inst.resources.size())).second)
                throw ValidationError("duplicate resource id: " + r.id);
            inst.resources.push_back(std::move(r));
        }
        if (doc.contains("graph") && !doc["graph"].is_null()) {
            Graph g;
            g.directed = doc["graph"].at("directed").get<bool>();
            for (const auto& n : doc["graph"].at("nodes")) g.nodes.push_back(n.get<std::string>());
            for (const auto& je : doc["graph"].at("edges")) {
                Edge e;
                const std::string id = je.at("id").get<std::string>();
                auto it = rid.find(id);
                if (it == rid.end())
                    throw ValidationError("graph edge has no matching resource: " + id);
                e.resource = it->second;
                e.from = require_node(g, je.at("from").get<std::string>());
                e.to = require_node(g, je.at("to").get<std::string>());
                g.edges.push_back(e);
            }
            inst.graph = std::move(g);
        }
        int index = 0;
        for (const auto& jq : doc.at("requests")) {
            Request req;
            req.index = index++;
            req.weights.assign(inst.size(), 1.0);
            const auto& jrep = jq.at("replies");
            const std::string kind = jrep.at("kind").get<std::string>();
            if (kind == "explicit") {
                if (jq.contains("demand"))
                    throw ValidationError("explicit requests carry weights, not a demand");
                ExplicitReplies ex;
                for (const auto& jset : jrep.at("sets")) {
                    std::vector<int> members;
                    for (const auto& jid : jset) {
                        auto it = rid.find(jid.get<std::string>());
                        if (it == rid.end())
                            throw ValidationError("reply references unknown resource: " +
                                                  jid.get<std::string>());
                        members.push_back(it->second);
                    }
                    ex.options.push_back(normalize_reply(std::move(members)));
                }
                req.replies = std::move(ex);
                if (jq.contains("weights")) {
                    for (const auto& [id, w] : jq.at("weights").items()) {
                        auto it = rid.find(id);
                        if (it == rid.end())
                            throw ValidationError("weight for unknown resource: " + id);
                        req.weights[it->second] = w.get<double>();
                    }
                }
                // Every resource a reply could use needs an explicit weight.
                const auto& ex2 = std::get<ExplicitReplies>(req.replies);
                for (const auto& opt : ex2.options)
                    for (int e : opt)
                        if (!jq.contains("weights") ||
                            !jq.at("weights").contains(inst.resources[e].id))
                            throw ValidationError("missing weight for resource " +
                                                  inst.resources[e].id);
            } else if (kind == "route" || kind == "connect") {
                if (jq.contains("weights"))
                    throw ValidationError("graph requests use a uniform demand, not weights");
                if (!inst.graph) throw ValidationError("graph request without a graph");
                const double demand = jq.value("demand", 1.0);
                req.weights.assign(inst.size(), demand);
                if (kind == "route") {
                    RoutePair rt;
                    rt.source = require_node(*inst.graph, jrep.at("source").get<std::string>());
                    rt.sink = require_node(*inst.graph, jrep.at("sink").get<std::string>());
                    rt.demand = demand;
                    req.replies = rt;
                } else {
                    ConnectSet cs;
                    cs.demand = demand;
                    for (const auto& t : jrep.at("terminals"))
                        cs.terminals.push_back(require_node(*inst.graph, t.get<std::string>()));
                    req.replies = std::move(cs);
                }
            } else {
                throw ValidationError("unknown reply kind: " + kind);
            }
            inst.requests.push_back(std::move(req));
        }
    } catch (const json::exception& ex) {
        throw ValidationError(std::string("malformed instance document: ") + ex.what());
    }
    inst.validate();
    return inst;
}

Instance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open instance file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

std::string instance_to_json(const Instance& inst) {
    json doc;
    doc["resources"] = json::array();
    for (const auto& r : inst.resources)
        doc["resources"].push_back({{"id", r.id}, {"cost", cost_to_json(r.cost)}});
    if (inst.graph) {
        json jg;
        jg["directed"] = inst.graph->directed;
        jg["nodes"] = inst.graph->nodes;
        jg["edges"] = json::array();
        for (const auto& e : inst.graph->edges)
            jg["edges"].push_back({{"id", inst.resources[e.resource].id},
                                   {"from", inst.graph->nodes[e.from]},
                                   {"to", inst.graph->nodes[e.to]}});
        doc["graph"] = jg;
    }
    doc["requests"] = json::array();
    for (const auto& req : inst.requests) {
        json jq;
        if (const auto* ex = std::get_if<ExplicitReplies>(&req.replies)) {
            json sets = json::array();
            std::vector<int> used;
            for (const auto& opt : ex->options) {
                json ids = json::array();
                for (int e : opt) {
                    ids.push_back(inst.resources[e].id);
                    used.push_back(e);
                }
                sets.push_back(ids);
            }
            jq["replies"] = {{"kind", "explicit"}, {"sets", sets}};
            json weights = json::object();
            for (int e : normalize_reply(std::move(used)))
                weights[inst.resources[e].id] = req.weights[e];
            jq["weights"] = weights;
        } else if (const auto* rt = std::get_if<RoutePair>(&req.replies)) {
            jq["demand"] = rt->demand;
            jq["replies"] = {{"kind", "route"},
                             {"source", inst.graph->nodes[rt->source]},
                             {"sink", inst.graph->nodes[rt->sink]}};
        } else {
            const auto& cs = std::get<ConnectSet>(req.replies);
            jq["demand"] = cs.demand;
            json terms = json::array();
            for (int t : cs.terminals) terms.push_back(inst.graph->nodes[t]);
            jq["replies"] = {{"kind", "connect"}, {"terminals", terms}};
        }
        doc["requests"].push_back(jq);
    }
    return doc.dump(2);
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write instance file: " + path.string());
    out << instance_to_json(inst) << "\n";
}

} // namespace gnd
