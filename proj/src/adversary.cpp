#include "gnd/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "gnd/errors.hpp"

namespace gnd {

TreeAdversary build_tree_adversary(int depth, double alpha) {
    if (depth < 1) throw ValidationError("tree depth must be at least 1");
    if (!(alpha >= 1.0)) throw ValidationError("alpha must be >= 1");
    TreeAdversary tree;
    tree.depth = depth;
    tree.alpha = alpha;
    tree.sigma = std::pow(static_cast<double>(depth), alpha);

    Graph g;
    g.directed = true;
    Instance& inst = tree.instance;

    // Nodes: source, then the complete binary tree level by level. Node
    // names encode the root-to-node path so ids are stable.
    tree.source = 0;
    g.nodes.push_back("s");
    std::vector<std::string> names{""};
    tree.root = 1;
    g.nodes.push_back("t");
    std::vector<int> level{tree.root};
    names.push_back("t");
    tree.children.assign(2, {-1, -1});
    std::vector<int> parent_of{-1, -1};
    for (int d = 1; d <= depth; ++d) {
        std::vector<int> next;
        for (int u : level) {
            for (int side = 0; side < 2; ++side) {
                const int v = static_cast<int>(g.nodes.size());
                g.nodes.push_back(names[u] + (side == 0 ? "L" : "R"));
                names.push_back(g.nodes.back());
                tree.children.push_back({-1, -1});
                parent_of.push_back(u);
                tree.children[u][side] = v;
                next.push_back(v);
            }
        }
        level = std::move(next);
    }

    // Tree edges (child -> parent) are free; source edges cost sigma + x^alpha.
    tree.parent_edge.assign(g.nodes.size(), -1);
    tree.source_edge.assign(g.nodes.size(), -1);
    for (int v = 2; v < static_cast<int>(g.nodes.size()); ++v) {
        const int r = static_cast<int>(inst.resources.size());
        inst.resources.push_back({"b:" + g.nodes[v], PowerCost{0.0, 1.0}});
        g.edges.push_back({r, v, parent_of[v]});
        tree.parent_edge[v] = r;
    }
    for (int v = 1; v < static_cast<int>(g.nodes.size()); ++v) {
        const int r = static_cast<int>(inst.resources.size());
        inst.resources.push_back({"s:" + g.nodes[v], DoSCost{tree.sigma, 1.0, alpha}});
        g.edges.push_back({r, tree.source, v});
        tree.source_edge[v] = r;
    }
    inst.graph = std::move(g);
    return tree;
}

namespace {

// Source-reachability over edges carrying load >= 1.
std::vector<char> carrying_reach(const TreeAdversary& tree, const LoadVector& loads) {
    const Graph& g = *tree.instance.graph;
    std::vector<char> seen(g.nodes.size(), 0);
    seen[tree.source] = 1;
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& e : g.edges) {
            if (loads[e.resource] < 1.0) continue;
            if (seen[e.from] && !seen[e.to]) {
                seen[e.to] = 1;
                grew = true;
            }
        }
    }
    return seen;
}

} // namespace

int tree_adversary_next(const TreeAdversary& tree, const LoadVector& loads, int prev_sink) {
    if (prev_sink < 0) return tree.root;
    const auto& kids = tree.children[prev_sink];
    if (kids[0] < 0 || kids[1] < 0)
        throw AdversaryStuck("previous sink has no children; sequence ran past the depth");
    auto seen = carrying_reach(tree, loads);
    if (!seen[kids[0]]) return kids[0];
    if (!seen[kids[1]]) return kids[1];
    throw AdversaryStuck("both children of the previous sink are reachable");
}

Reply build_offline_tree_solution(const TreeAdversary& tree, const std::vector<int>& sinks) {
    if (sinks.empty()) return {};
    const int deepest = sinks.back();
    std::vector<int> members{tree.source_edge[deepest]};
    // Walk from the deepest sink up to the first one, collecting tree edges.
    const Graph& g = *tree.instance.graph;
    int v = deepest;
    while (v != sinks.front()) {
        const int r = tree.parent_edge[v];
        members.push_back(r);
        // Follow the edge to the parent.
        for (const auto& e : g.edges)
            if (e.resource == r) {
                v = e.to;
                break;
            }
    }
    return normalize_reply(std::move(members));
}

AdversaryRunReport run_tree_adversary(int depth, double alpha) {
    AdversaryRunReport rep;
    rep.tree = build_tree_adversary(depth, alpha);
    Instance& inst = rep.tree.instance;
    SolverConfig cfg = SolverConfig::for_instance(inst, 1.0, CostMode::ApproxOracle);
    OnlineSolver solver(inst, cfg);
    Oracle oracle{OracleKind::ShortestPath};

    int prev = -1;
    for (int i = 0; i < depth; ++i) {
        const int sink = tree_adversary_next(rep.tree, solver.loads(), prev);
        rep.sinks.push_back(sink);
        Request req;
        req.index = i;
        req.weights.assign(inst.size(), 1.0);
        req.replies = RoutePair{rep.tree.source, sink, 1.0};
        inst.requests.push_back(req);
        solver.step(req, oracle);
        prev = sink;
    }
    rep.trace = std::move(solver).finish();
    rep.online_cost = rep.trace.original_cost.value_or(rep.trace.power_objective);

    for (int v = 1; v < static_cast<int>(rep.tree.instance.graph->nodes.size()); ++v) {
        const int r = rep.tree.source_edge[v];
        if (r >= 0 && rep.trace.final_loads[r] >= 1.0) ++rep.used_source_edges;
    }

    // Cost of the single-source-edge offline solution, replayed per request.
    LoadVector loads = zero_loads(inst);
    for (int i = 0; i < depth; ++i) {
        // Request i needs the path up to sink i: the shared source edge plus
        // the tree edges from the deepest sink to sink i.
        std::vector<int> members{rep.tree.source_edge[rep.sinks.back()]};
        int v = rep.sinks.back();
        while (v != rep.sinks[i]) {
            members.push_back(rep.tree.parent_edge[v]);
            for (const auto& e : rep.tree.instance.graph->edges)
                if (e.resource == members.back()) {
                    v = e.to;
                    break;
                }
        }
        loads = apply_reply(loads, inst, inst.requests[i], normalize_reply(std::move(members)));
    }
    rep.offline_cost = total_cost(loads, inst);
    rep.ratio = rep.offline_cost > 0.0 ? rep.online_cost / rep.offline_cost : 0.0;
    return rep;
}

Instance restricted_assignment_to_ssr(int machines, const std::vector<std::vector<int>>& jobs,
                                      double p) {
    if (machines < 1) throw ValidationError("need at least one machine");
    Instance inst;
    Graph g;
    g.directed = true;
    g.nodes.push_back("s");
    for (int e = 0; e < machines; ++e) g.nodes.push_back("u" + std::to_string(e));
    for (std::size_t i = 0; i < jobs.size(); ++i) g.nodes.push_back("v" + std::to_string(i));

    for (int e = 0; e < machines; ++e) {
        const int r = static_cast<int>(inst.resources.size());
        inst.resources.push_back({"m" + std::to_string(e), PowerCost{1.0, p}});
        g.edges.push_back({r, 0, 1 + e});
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (jobs[i].empty()) throw ValidationError("every job needs an allowed machine");
        for (int e : jobs[i]) {
            if (e < 0 || e >= machines) throw ValidationError("job references unknown machine");
            const int r = static_cast<int>(inst.resources.size());
            inst.resources.push_back(
                {"a" + std::to_string(e) + "_" + std::to_string(i), PowerCost{0.0, p}});
            g.edges.push_back({r, 1 + e, 1 + machines + static_cast<int>(i)});
        }
    }
    inst.graph = std::move(g);
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        Request req;
        req.index = static_cast<int>(i);
        req.weights.assign(inst.size(), 1.0);
        req.replies = RoutePair{0, 1 + machines + static_cast<int>(i), 1.0};
        inst.requests.push_back(std::move(req));
    }
    inst.validate();
    return inst;
}

namespace {

CostFunction random_cost(std::mt19937_64& rng, const std::string& kind, int max_terms) {
    std::uniform_real_distribution<double> log_coeff(std::log(0.1), std::log(10.0));
    const double alphas[] = {1.0, 1.5, 2.0, 3.0};
    std::uniform_int_distribution<int> pick_alpha(0, 3);
    auto coeff = [&] { return std::exp(log_coeff(rng)); };
    if (kind == "power") return PowerCost{coeff(), alphas[pick_alpha(rng)]};
    if (kind == "dos") return DoSCost{coeff(), coeff(), alphas[pick_alpha(rng)]};
    if (kind == "rep") {
        RepCost r;
        r.sigma = coeff();
        std::uniform_int_distribution<int> nterms(1, std::max(1, max_terms));
        const int k = nterms(rng);
        for (int j = 0; j < k; ++j) r.terms.push_back({coeff(), alphas[pick_alpha(rng)]});
        return r;
    }
    throw ValidationError("unknown cost kind: " + kind);
}

Instance random_explicit(std::mt19937_64& rng, const GenParams& p) {
    Instance inst;
    for (int e = 0; e < p.resources; ++e)
        inst.resources.push_back(
            {"e" + std::to_string(e), random_cost(rng, p.cost_kind, p.max_terms)});
    std::uniform_real_distribution<double> weight(1.0, 4.0);
    std::uniform_int_distribution<int> nopts(1, std::max(1, p.max_replies));
    std::uniform_int_distribution<int> optsize(1, std::max(1, std::min(p.max_reply_size,
                                                                       p.resources)));
    std::uniform_int_distribution<int> pick(0, p.resources - 1);
    for (int i = 0; i < p.requests; ++i) {
        Request req;
        req.index = i;
        req.weights.assign(inst.size(), 1.0);
        ExplicitReplies ex;
        std::set<Reply> seen;
        const int k = nopts(rng);
        for (int o = 0; o < k; ++o) {
            std::set<int> members;
            const int sz = optsize(rng);
            while (static_cast<int>(members.size()) < sz) members.insert(pick(rng));
            Reply reply(members.begin(), members.end());
            if (seen.insert(reply).second) ex.options.push_back(std::move(reply));
        }
        for (const auto& opt : ex.options)
            for (int e : opt) req.weights[e] = weight(rng);
        req.replies = std::move(ex);
        inst.requests.push_back(std::move(req));
    }
    return inst;
}

Instance random_routing(std::mt19937_64& rng, const GenParams& p) {
    Instance inst;
    Graph g;
    g.directed = true;
    const int n = std::max(2, p.nodes);
    for (int v = 0; v < n; ++v) g.nodes.push_back("n" + std::to_string(v));
    std::set<std::pair<int, int>> pairs;
    auto add_edge = [&](int from, int to) {
        if (!pairs.insert({from, to}).second) return;
        const int r = static_cast<int>(inst.resources.size());
        inst.resources.push_back({"e" + std::to_string(r),
                                  random_cost(rng, p.cost_kind, p.max_terms)});
        g.edges.push_back({r, from, to});
    };
    // Forward chain guarantees every (s < t) request a path.
    for (int v = 0; v + 1 < n; ++v) add_edge(v, v + 1);
    std::uniform_int_distribution<int> node(0, n - 1);
    for (int k = 0; k < p.extra_edges; ++k) {
        int a = node(rng), b = node(rng);
        if (a == b) continue;
        add_edge(std::min(a, b), std::max(a, b));
    }
    inst.graph = std::move(g);
    std::uniform_real_distribution<double> demand(1.0, 4.0);
    for (int i = 0; i < p.requests; ++i) {
        int a = node(rng), b = node(rng);
        if (a == b) b = (a + 1) % n;
        Request req;
        req.index = i;
        const double d = demand(rng);
        req.weights.assign(inst.size(), d);
        req.replies = RoutePair{std::min(a, b), std::max(a, b), d};
        inst.requests.push_back(std::move(req));
    }
    return inst;
}

Instance random_steiner(std::mt19937_64& rng, const GenParams& p) {
    Instance inst;
    Graph g;
    g.directed = false;
    const int n = std::max(2, p.nodes);
    for (int v = 0; v < n; ++v) g.nodes.push_back("n" + std::to_string(v));
    std::set<std::pair<int, int>> pairs;
    auto add_edge = [&](int a, int b) {
        if (a == b) return;
        auto key = std::minmax(a, b);
        if (!pairs.insert({key.first, key.second}).second) return;
        const int r = static_cast<int>(inst.resources.size());
        inst.resources.push_back({"e" + std::to_string(r),
                                  random_cost(rng, p.cost_kind, p.max_terms)});
        g.edges.push_back({r, key.first, key.second});
    };
    // Random spanning tree keeps the graph connected.
    for (int v = 1; v < n; ++v) {
        std::uniform_int_distribution<int> parent(0, v - 1);
        add_edge(parent(rng), v);
    }
    std::uniform_int_distribution<int> node(0, n - 1);
    for (int k = 0; k < p.extra_edges; ++k) add_edge(node(rng), node(rng));
    inst.graph = std::move(g);
    std::uniform_real_distribution<double> demand(1.0, 4.0);
    std::uniform_int_distribution<int> nterm(2, std::max(2, std::min(p.max_terminals, n)));
    for (int i = 0; i < p.requests; ++i) {
        Request req;
        req.index = i;
        const double d = demand(rng);
        req.weights.assign(inst.size(), d);
        ConnectSet cs;
        cs.demand = d;
        std::set<int> terms;
        const int k = nterm(rng);
        while (static_cast<int>(terms.size()) < k) terms.insert(node(rng));
        cs.terminals.assign(terms.begin(), terms.end());
        req.replies = std::move(cs);
        inst.requests.push_back(std::move(req));
    }
    return inst;
}

} // namespace

Instance random_instance(const GenParams& params) {
    std::mt19937_64 rng(params.seed);
    Instance inst;
    if (params.family == "explicit")
        inst = random_explicit(rng, params);
    else if (params.family == "routing")
        inst = random_routing(rng, params);
    else if (params.family == "steiner")
        inst = random_steiner(rng, params);
    else
        throw ValidationError("unknown generator family: " + params.family);
    inst.validate();
    return inst;
}

} // namespace gnd
