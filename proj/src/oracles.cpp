#include "gnd/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "gnd/errors.hpp"

namespace gnd {

namespace {

double sum_over(const Reply& reply, std::span<const double> d) {
    double s = 0.0;
    for (int e : reply) s += d[e];
    return s;
}

struct PathLabel {
    double cost = std::numeric_limits<double>::infinity();
    int hops = std::numeric_limits<int>::max();
    std::vector<int> edges; // edge indices in traversal order
};

// (cost, hops, resource-id sequence) lexicographic order.
bool label_less(const Instance& inst, const Graph& g, const PathLabel& a, const PathLabel& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.hops != b.hops) return a.hops < b.hops;
    for (std::size_t i = 0; i < a.edges.size() && i < b.edges.size(); ++i) {
        const std::string& ia = inst.resources[g.edges[a.edges[i]].resource].id;
        const std::string& ib = inst.resources[g.edges[b.edges[i]].resource].id;
        if (ia != ib) return ia < ib;
    }
    return a.edges.size() < b.edges.size();
}

// Deterministic Dijkstra from `start`; labels extend strictly, so the first
// finalized label per node is the minimum under label_less.
std::vector<PathLabel> dijkstra(const Instance& inst, const Graph& g,
                                std::span<const double> d, int start) {
    const int n = static_cast<int>(g.nodes.size());
    std::vector<PathLabel> best(n);
    std::vector<char> done(n, 0);
    using Item = std::pair<PathLabel, int>;
    auto cmp = [&](const Item& a, const Item& b) {
        return label_less(inst, g, b.first, a.first); // min-heap
    };
    std::priority_queue<Item, std::vector<Item>, decltype(cmp)> heap(cmp);
    best[start] = PathLabel{0.0, 0, {}};
    heap.push({best[start], start});
    while (!heap.empty()) {
        auto [label, u] = heap.top();
        heap.pop();
        if (done[u]) continue;
        done[u] = 1;
        for (std::size_t k = 0; k < g.edges.size(); ++k) {
            const Edge& e = g.edges[k];
            int v = -1;
            if (e.from == u)
                v = e.to;
            else if (!g.directed && e.to == u)
                v = e.from;
            if (v < 0 || done[v]) continue;
            PathLabel cand;
            cand.cost = label.cost + d[e.resource];
            cand.hops = label.hops + 1;
            cand.edges = label.edges;
            cand.edges.push_back(static_cast<int>(k));
            if (label_less(inst, g, cand, best[v])) {
                best[v] = cand;
                heap.push({std::move(cand), v});
            }
        }
    }
    for (int v = 0; v < n; ++v)
        if (!done[v]) best[v] = PathLabel{}; // unreachable sentinel
    return best;
}

Reply edges_to_reply(const Graph& g, const std::vector<int>& edge_ids) {
    std::vector<int> members;
    members.reserve(edge_ids.size());
    for (int k : edge_ids) members.push_back(g.edges[k].resource);
    return normalize_reply(std::move(members));
}

} // namespace

OracleAnswer exhaustive_oracle(const Request& req, std::span<const double> d) {
    const auto* ex = std::get_if<ExplicitReplies>(&req.replies);
    if (!ex || ex->options.empty())
        throw ValidationError("exhaustive oracle needs an explicit reply collection");
    OracleAnswer ans;
    bool first = true;
    for (const auto& opt : ex->options) {
        Reply reply = normalize_reply(opt);
        const double cost = sum_over(reply, d);
        if (first || cost < ans.cost) {
            ans.reply = std::move(reply);
            ans.cost = cost;
            first = false;
        }
    }
    ans.tau = 1.0;
    return ans;
}

OracleAnswer shortest_path_oracle(const Instance& inst, const RoutePair& rt,
                                  std::span<const double> d) {
    if (!inst.graph) throw ValidationError("routing oracle needs a graph");
    OracleAnswer ans;
    ans.tau = 1.0;
    if (rt.source == rt.sink) return ans; // empty reply, cost 0
    const Graph& g = *inst.graph;
    auto labels = dijkstra(inst, g, d, rt.source);
    if (!std::isfinite(labels[rt.sink].cost))
        throw NoPath("no path from " + g.nodes[rt.source] + " to " + g.nodes[rt.sink]);
    ans.reply = edges_to_reply(g, labels[rt.sink].edges);
    ans.cost = sum_over(ans.reply, d);
    return ans;
}

OracleAnswer steiner_oracle(const Instance& inst, const ConnectSet& cs,
                            std::span<const double> d) {
    if (!inst.graph) throw ValidationError("steiner oracle needs a graph");
    const Graph& g = *inst.graph;
    if (g.directed)
        throw ValidationError("steiner oracle handles undirected graphs only");
    OracleAnswer ans;
    ans.tau = 2.0;
    std::vector<int> terms = cs.terminals;
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    if (terms.size() <= 1) return ans;

    const int t = static_cast<int>(terms.size());
    std::vector<std::vector<PathLabel>> labels;
    labels.reserve(t);
    for (int i = 0; i < t; ++i) labels.push_back(dijkstra(inst, g, d, terms[i]));
    for (int i = 1; i < t; ++i)
        if (!std::isfinite(labels[0][terms[i]].cost))
            throw Disconnected("terminals are not all in one component");

    // Kruskal over the terminals' metric closure, ties by index pair.
    struct ClosureEdge {
        double w;
        int i, j;
    };
    std::vector<ClosureEdge> closure;
    for (int i = 0; i < t; ++i)
        for (int j = i + 1; j < t; ++j) closure.push_back({labels[i][terms[j]].cost, i, j});
    std::sort(closure.begin(), closure.end(), [](const ClosureEdge& a, const ClosureEdge& b) {
        if (a.w != b.w) return a.w < b.w;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });
    std::vector<int> parent(t);
    for (int i = 0; i < t; ++i) parent[i] = i;
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<int> edge_ids;
    for (const auto& ce : closure) {
        int a = find(ce.i), b = find(ce.j);
        if (a == b) continue;
        parent[a] = b;
        // Expand the closure edge back to its underlying shortest path.
        for (int k : labels[ce.i][terms[ce.j]].edges) edge_ids.push_back(k);
    }
    ans.reply = edges_to_reply(g, edge_ids); // duplicates collapse here
    ans.cost = sum_over(ans.reply, d);
    return ans;
}

OracleAnswer subset_oracle(const Instance& inst, const Request& req, std::span<const double> d,
                           std::size_t budget) {
    auto candidates = minimal_replies(inst, req, budget);
    if (candidates.empty()) {
        if (std::holds_alternative<RoutePair>(req.replies))
            throw NoPath("no reply satisfies the routing request");
        if (std::holds_alternative<ConnectSet>(req.replies))
            throw Disconnected("no reply satisfies the connectivity request");
        throw ValidationError("empty reply collection");
    }
    OracleAnswer ans;
    ans.tau = 1.0;
    bool first = true;
    for (const auto& reply : candidates) {
        const double cost = sum_over(reply, d);
        if (first || cost < ans.cost) {
            ans.reply = reply;
            ans.cost = cost;
            first = false;
        }
    }
    return ans;
}

OracleAnswer Oracle::query(const Instance& inst, const Request& req,
                           std::span<const double> d) const {
    switch (kind) {
    case OracleKind::Exhaustive:
        return exhaustive_oracle(req, d);
    case OracleKind::ShortestPath:
        return shortest_path_oracle(inst, std::get<RoutePair>(req.replies), d);
    case OracleKind::Steiner:
        return steiner_oracle(inst, std::get<ConnectSet>(req.replies), d);
    case OracleKind::Subset:
        return subset_oracle(inst, req, d, subset_budget);
    case OracleKind::Auto:
        break;
    }
    if (std::holds_alternative<ExplicitReplies>(req.replies)) return exhaustive_oracle(req, d);
    if (const auto* rt = std::get_if<RoutePair>(&req.replies))
        return shortest_path_oracle(inst, *rt, d);
    const auto& cs = std::get<ConnectSet>(req.replies);
    if (inst.graph && !inst.graph->directed) return steiner_oracle(inst, cs, d);
    return subset_oracle(inst, req, d, subset_budget);
}

double Oracle::tau_for(const Instance& inst) const {
    double tau = 1.0;
    for (const auto& req : inst.requests) {
        if (std::holds_alternative<ConnectSet>(req.replies)) {
            const bool steiner = kind == OracleKind::Steiner ||
                                 (kind == OracleKind::Auto && inst.graph &&
                                  !inst.graph->directed);
            if (steiner) tau = std::max(tau, 2.0);
        }
    }
    return tau;
}

} // namespace gnd
