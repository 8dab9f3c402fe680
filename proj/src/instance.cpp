#include "gnd/instance.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gnd/errors.hpp"

namespace gnd {

int Graph::node_index(const std::string& name) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i] == name) return static_cast<int>(i);
    return -1;
}

int Instance::resource_index(const std::string& id) const {
    for (std::size_t i = 0; i < resources.size(); ++i)
        if (resources[i].id == id) return static_cast<int>(i);
    return -1;
}

Reply normalize_reply(std::vector<int> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    return members;
}

LoadVector zero_loads(const Instance& inst) {
    return LoadVector(inst.size(), 0.0);
}

namespace {

void check_members(const Instance& inst, const std::vector<int>& members) {
    for (int e : members)
        if (e < 0 || e >= static_cast<int>(inst.size()))
            throw ValidationError("reply references unknown resource index " +
                                  std::to_string(e));
}

// Reachability over a chosen edge subset; undirected graphs traverse both ways.
std::vector<char> reachable_from(const Graph& g, const std::vector<char>& edge_in, int start) {
    std::vector<char> seen(g.nodes.size(), 0);
    if (start < 0) return seen;
    std::vector<int> stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (std::size_t k = 0; k < g.edges.size(); ++k) {
            if (!edge_in[k]) continue;
            const Edge& e = g.edges[k];
            if (e.from == u && !seen[e.to]) {
                seen[e.to] = 1;
                stack.push_back(e.to);
            }
            if (!g.directed && e.to == u && !seen[e.from]) {
                seen[e.from] = 1;
                stack.push_back(e.from);
            }
        }
    }
    return seen;
}

std::vector<char> edge_mask_for_reply(const Graph& g, const Reply& reply) {
    std::vector<char> mask(g.edges.size(), 0);
    for (std::size_t k = 0; k < g.edges.size(); ++k)
        if (std::binary_search(reply.begin(), reply.end(), g.edges[k].resource)) mask[k] = 1;
    return mask;
}

bool connects(const Graph& g, const std::vector<char>& edge_in, const std::vector<int>& terminals) {
    if (terminals.size() <= 1) return true;
    if (!g.directed) {
        auto seen = reachable_from(g, edge_in, terminals.front());
        for (int t : terminals)
            if (!seen[t]) return false;
        return true;
    }
    // Directed: every terminal must reach every other one.
    for (int s : terminals) {
        auto seen = reachable_from(g, edge_in, s);
        for (int t : terminals)
            if (!seen[t]) return false;
    }
    return true;
}

} // namespace

void Instance::validate() const {
    std::set<std::string> ids;
    for (const auto& r : resources) {
        if (!ids.insert(r.id).second)
            throw ValidationError("duplicate resource id: " + r.id);
        validate_cost(r.cost);
    }
    if (graph) {
        for (const auto& e : graph->edges) {
            if (e.resource < 0 || e.resource >= static_cast<int>(size()))
                throw ValidationError("graph edge references unknown resource");
            if (e.from < 0 || e.from >= static_cast<int>(graph->nodes.size()) || e.to < 0 ||
                e.to >= static_cast<int>(graph->nodes.size()))
                throw ValidationError("graph edge references unknown node");
        }
    }
    for (const auto& req : requests) {
        if (req.weights.size() != size())
            throw ValidationError("request weight vector does not match resource count");
        for (double w : req.weights)
            if (!(w >= 1.0) || !std::isfinite(w))
                throw ValidationError("all request weights must be >= 1");
        if (const auto* ex = std::get_if<ExplicitReplies>(&req.replies)) {
            if (ex->options.empty())
                throw ValidationError("explicit reply collection must be nonempty");
            for (const auto& opt : ex->options) check_members(*this, opt);
        } else if (const auto* rt = std::get_if<RoutePair>(&req.replies)) {
            if (!graph) throw ValidationError("routing request needs a graph");
            if (rt->source < 0 || rt->source >= static_cast<int>(graph->nodes.size()) ||
                rt->sink < 0 || rt->sink >= static_cast<int>(graph->nodes.size()))
                throw ValidationError("routing request references unknown node");
            if (!(rt->demand >= 1.0)) throw ValidationError("demand must be >= 1");
        } else {
            const auto& cs = std::get<ConnectSet>(req.replies);
            if (!graph) throw ValidationError("connectivity request needs a graph");
            if (cs.terminals.empty()) throw ValidationError("terminal set must be nonempty");
            for (int t : cs.terminals)
                if (t < 0 || t >= static_cast<int>(graph->nodes.size()))
                    throw ValidationError("connectivity request references unknown node");
            if (!(cs.demand >= 1.0)) throw ValidationError("demand must be >= 1");
        }
    }
}

bool validate_reply(const Instance& inst, const Request& req, const Reply& reply) {
    for (int e : reply)
        if (e < 0 || e >= static_cast<int>(inst.size())) return false;
    if (const auto* ex = std::get_if<ExplicitReplies>(&req.replies)) {
        for (const auto& opt : ex->options)
            if (normalize_reply(opt) == reply) return true;
        return false;
    }
    if (!inst.graph) return false;
    const Graph& g = *inst.graph;
    auto mask = edge_mask_for_reply(g, reply);
    if (const auto* rt = std::get_if<RoutePair>(&req.replies)) {
        if (rt->source == rt->sink) return true;
        return reachable_from(g, mask, rt->source)[rt->sink] != 0;
    }
    const auto& cs = std::get<ConnectSet>(req.replies);
    return connects(g, mask, cs.terminals);
}

LoadVector apply_reply(const LoadVector& loads, const Instance& inst, const Request& req,
                       const Reply& reply) {
    if (!validate_reply(inst, req, reply))
        throw InvalidReply("reply does not satisfy request " + std::to_string(req.index));
    LoadVector out = loads;
    out.resize(inst.size(), 0.0);
    for (int e : reply) out[e] += req.weights[e];
    return out;
}

double total_cost(const LoadVector& loads, const Instance& inst) {
    double sum = 0.0;
    for (std::size_t e = 0; e < inst.size(); ++e)
        sum += eval_cost(inst.resources[e].cost, e < loads.size() ? loads[e] : 0.0);
    return sum;
}

namespace {

// All simple source-sink paths, deterministic DFS order (edge index order).
std::vector<Reply> enumerate_paths(const Instance& inst, const RoutePair& rt,
                                   std::size_t budget) {
    const Graph& g = *inst.graph;
    std::vector<Reply> out;
    if (rt.source == rt.sink) {
        out.push_back({});
        return out;
    }
    std::vector<char> visited(g.nodes.size(), 0);
    std::vector<int> path_edges;
    auto dfs = [&](auto&& self, int u) -> void {
        if (u == rt.sink) {
            std::vector<int> members;
            for (int k : path_edges) members.push_back(g.edges[k].resource);
            out.push_back(normalize_reply(std::move(members)));
            if (out.size() > budget) throw BudgetExceeded("too many paths to enumerate");
            return;
        }
        visited[u] = 1;
        for (std::size_t k = 0; k < g.edges.size(); ++k) {
            const Edge& e = g.edges[k];
            int v = -1;
            if (e.from == u)
                v = e.to;
            else if (!g.directed && e.to == u)
                v = e.from;
            if (v < 0 || visited[v]) continue;
            path_edges.push_back(static_cast<int>(k));
            self(self, v);
            path_edges.pop_back();
        }
        visited[u] = 0;
    };
    dfs(dfs, rt.source);
    // Drop any path whose edge set contains another's (parallel-edge corner)
    // and keep a deterministic order.
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    std::vector<Reply> kept;
    for (const auto& r : out) {
        bool dominated = false;
        for (const auto& other : out)
            if (other != r &&
                std::includes(r.begin(), r.end(), other.begin(), other.end())) {
                dominated = true;
                break;
            }
        if (!dominated) kept.push_back(r);
    }
    return kept;
}

} // namespace

std::vector<Reply> minimal_replies(const Instance& inst, const Request& req,
                                   std::size_t budget) {
    std::vector<Reply> out;
    if (const auto* ex = std::get_if<ExplicitReplies>(&req.replies)) {
        for (const auto& opt : ex->options) out.push_back(normalize_reply(opt));
        return out;
    }
    if (!inst.graph) throw ValidationError("implicit reply collection needs a graph");
    if (const auto* rt = std::get_if<RoutePair>(&req.replies))
        return enumerate_paths(inst, *rt, budget);
    const Graph& g = *inst.graph;
    const std::size_t k = g.edges.size();
    if (k >= 63 || (std::size_t{1} << k) > budget)
        throw BudgetExceeded("too many edge subsets to enumerate");

    auto is_subset = [](const Reply& small, const Reply& big) {
        return std::includes(big.begin(), big.end(), small.begin(), small.end());
    };

    // Increasing popcount, then numeric mask order: supersets of a kept
    // minimal reply are pruned as they come later.
    std::vector<std::vector<std::uint64_t>> by_count(k + 1);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask)
        by_count[static_cast<std::size_t>(__builtin_popcountll(mask))].push_back(mask);

    std::vector<char> edge_in(k, 0);
    for (const auto& bucket : by_count) {
        for (std::uint64_t mask : bucket) {
            Reply members;
            for (std::size_t j = 0; j < k; ++j) {
                edge_in[j] = (mask >> j) & 1u;
                if (edge_in[j]) members.push_back(g.edges[j].resource);
            }
            Reply reply = normalize_reply(std::move(members));
            bool dominated = false;
            for (const auto& kept : out)
                if (is_subset(kept, reply)) {
                    dominated = true;
                    break;
                }
            if (dominated) continue;
            if (validate_reply(inst, req, reply)) out.push_back(std::move(reply));
        }
    }
    return out;
}

} // namespace gnd
