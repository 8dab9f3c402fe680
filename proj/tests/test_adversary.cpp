#include <doctest.h>

#include <cmath>

#include "gnd/adversary.hpp"
#include "gnd/errors.hpp"
#include "gnd/instance_io.hpp"
#include "gnd/verifier.hpp"
#include "helpers.hpp"

using namespace gnd;

TEST_CASE("tree construction") {
    auto tree = build_tree_adversary(3, 3.0);
    CHECK(tree.sigma == doctest::Approx(27.0));
    // 2^(q+1)-1 tree nodes plus the source.
    CHECK(tree.instance.graph->nodes.size() == 16);
    // One parent edge per non-root tree node, one source edge per tree node.
    CHECK(tree.instance.resources.size() == 14 + 15);
    CHECK_NOTHROW(tree.instance.validate());
    CHECK_THROWS_AS(build_tree_adversary(0, 2.0), ValidationError);
}

TEST_CASE("adversary picks unreached children") {
    auto tree = build_tree_adversary(2, 2.0);
    LoadVector loads(tree.instance.size(), 0.0);
    CHECK(tree_adversary_next(tree, loads, -1) == tree.root);

    // Route the first request straight to the root: both children untouched,
    // the left one is picked.
    loads[tree.source_edge[tree.root]] = 1.0;
    const int next = tree_adversary_next(tree, loads, tree.root);
    CHECK(next == tree.children[tree.root][0]);

    // Saturating both children leaves the adversary stuck.
    loads[tree.source_edge[tree.children[tree.root][0]]] = 1.0;
    loads[tree.source_edge[tree.children[tree.root][1]]] = 1.0;
    CHECK_THROWS_AS(tree_adversary_next(tree, loads, tree.root), AdversaryStuck);
}

TEST_CASE("offline tree solution and its cost") {
    SUBCASE("depth one uses a single source edge") {
        auto report = run_tree_adversary(1, 2.0);
        CHECK(report.offline_cost == doctest::Approx(report.tree.sigma + 1.0));
        CHECK(report.ratio >= 0.5);
    }
    SUBCASE("depth-3 reference numbers") {
        auto report = run_tree_adversary(3, 3.0);
        CHECK(report.tree.sigma == doctest::Approx(27.0));
        CHECK(report.online_cost >= 3.0 * 27.0);
        CHECK(report.offline_cost == doctest::Approx(54.0)); // sigma + q^alpha = 2*sigma
        CHECK(report.ratio >= 1.5);
        CHECK(report.used_source_edges >= 3);
    }
}

TEST_CASE("adversary beats the solver at every depth") {
    for (int q = 2; q <= 5; ++q) {
        for (double alpha : {1.0, 2.0}) {
            auto report = run_tree_adversary(q, alpha);
            INFO("q=", q, " alpha=", alpha);
            CHECK(report.used_source_edges >= q);
            CHECK(report.online_cost >= q * report.tree.sigma - 1e-9);
            CHECK(report.offline_cost <= 2.0 * report.tree.sigma + 1e-9);
            CHECK(report.ratio >= q / 2.0 - 1e-12);
            // The offline reply is feasible for every issued request.
            auto offline = build_offline_tree_solution(report.tree, report.sinks);
            for (const auto& req : report.tree.instance.requests)
                CHECK(validate_reply(report.tree.instance, req, offline));
        }
    }
}

TEST_CASE("adversary also beats a tree-polluting solver") {
    // Routes every request through the leftmost leaf below the sink, loading
    // as many tree edges under future sinks as possible.
    for (int q : {3, 5, 7}) {
        auto tree = build_tree_adversary(q, 2.0);
        Instance& inst = tree.instance;
        LoadVector loads = zero_loads(inst);
        int prev = -1;
        for (int i = 0; i < q; ++i) {
            const int sink = tree_adversary_next(tree, loads, prev);
            int v = sink;
            while (tree.children[v][0] >= 0) v = tree.children[v][0];
            std::vector<int> members{tree.source_edge[v]};
            for (int u = v; u != sink;) {
                members.push_back(tree.parent_edge[u]);
                for (const auto& e : inst.graph->edges)
                    if (e.resource == tree.parent_edge[u]) {
                        u = e.to;
                        break;
                    }
            }
            Request req;
            req.index = i;
            req.weights.assign(inst.size(), 1.0);
            req.replies = RoutePair{tree.source, sink, 1.0};
            inst.requests.push_back(req);
            loads = apply_reply(loads, inst, req, normalize_reply(std::move(members)));
            prev = sink;
        }
        int used = 0;
        for (int v = 1; v < static_cast<int>(inst.graph->nodes.size()); ++v)
            if (tree.source_edge[v] >= 0 && loads[tree.source_edge[v]] >= 1.0) ++used;
        CHECK(used >= q);
        CHECK(total_cost(loads, inst) >= q * tree.sigma);
    }
}

TEST_CASE("restricted assignment becomes single-source routing") {
    SUBCASE("one machine, one job") {
        Instance inst = restricted_assignment_to_ssr(1, {{0}}, 2.0);
        auto res = brute_force_opt(inst);
        CHECK(res.opt == doctest::Approx(1.0));
    }
    SUBCASE("two machines, two flexible jobs") {
        Instance inst = restricted_assignment_to_ssr(2, {{0, 1}, {0, 1}}, 2.0);
        auto res = brute_force_opt(inst);
        CHECK(res.opt == doctest::Approx(2.0)); // split
        // Stacking both jobs on one machine costs 2^2.
        LoadVector loads = zero_loads(inst);
        for (const auto& req : inst.requests) {
            // machine 0's edge is resource 0; the free arc to job i follows.
            Reply stacked;
            for (std::size_t k = 0; k < inst.graph->edges.size(); ++k) {
                const auto& e = inst.graph->edges[k];
                if (e.resource == 0 ||
                    (e.from == 1 && e.to == 2 + 1 + req.index))
                    stacked.push_back(e.resource);
            }
            loads = apply_reply(loads, inst, req, normalize_reply(std::move(stacked)));
        }
        CHECK(total_cost(loads, inst) == doctest::Approx(4.0));
    }
    SUBCASE("assignment costs match routing costs exactly") {
        // 3 machines, 3 jobs with restricted choices, p = 3.
        std::vector<std::vector<int>> jobs{{0, 1}, {1, 2}, {0, 2}};
        Instance inst = restricted_assignment_to_ssr(3, jobs, 3.0);
        // Assignment (0, 1, 2): loads 1,1,1 -> cost 3.
        auto res = brute_force_opt(inst);
        CHECK(res.opt == doctest::Approx(3.0));
    }
}

TEST_CASE("random instances are reproducible and well formed") {
    GenParams params;
    params.seed = 99;
    params.family = "explicit";
    params.cost_kind = "rep";
    Instance a = random_instance(params);
    Instance b = random_instance(params);
    CHECK(instance_to_json(a) == instance_to_json(b));

    SUBCASE("explicit instances stay brute-forceable") {
        GenParams p2;
        p2.seed = 123;
        p2.resources = 4;
        p2.requests = 3;
        p2.max_replies = 3;
        Instance inst = random_instance(p2);
        std::size_t combos = 1;
        for (const auto& req : inst.requests)
            combos *= std::get<ExplicitReplies>(req.replies).options.size();
        CHECK(combos <= 27);
        CHECK_NOTHROW(brute_force_opt(inst));
    }
    SUBCASE("routing requests are always satisfiable") {
        GenParams p3;
        p3.seed = 321;
        p3.family = "routing";
        p3.cost_kind = "dos";
        Instance inst = random_instance(p3);
        Oracle oracle;
        CHECK_NOTHROW(run_dos(inst, 1.0, oracle));
    }
    SUBCASE("steiner requests are always satisfiable") {
        GenParams p4;
        p4.seed = 654;
        p4.family = "steiner";
        Instance inst = random_instance(p4);
        Oracle oracle;
        SolverConfig cfg = SolverConfig::for_instance(inst, 2.0, CostMode::ApproxOracle);
        CHECK_NOTHROW(run_power(inst, cfg, oracle));
    }
}
