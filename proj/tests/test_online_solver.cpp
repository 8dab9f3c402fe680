#include <doctest.h>

#include <cmath>
#include <random>

#include "gnd/adversary.hpp"
#include "gnd/errors.hpp"
#include "gnd/online_solver.hpp"
#include "helpers.hpp"

using namespace gnd;
using gnd::testing::forced_power_instance;
using gnd::testing::parallel_instance;
using gnd::testing::rel_close;

TEST_CASE("modified costs, exact flavor") {
    SolverConfig cfg;
    cfg.alpha_max = 2.0;
    cfg.rho = 2.0 * std::exp(1.0);
    CHECK(modified_cost_exact(PowerCost{1.0, 2.0}, 3.0, 2.0, cfg) ==
          doctest::Approx(12.0 + 16.0 / std::exp(1.0)));

    SolverConfig lin_cfg;
    lin_cfg.alpha_max = 2.0;
    lin_cfg.rho = 3.0;
    CHECK(modified_cost_exact(PowerCost{1.0, 1.0}, 0.0, 1.0, lin_cfg) ==
          doctest::Approx(1.0 + 3.0 / std::exp(2.0)));
    CHECK(modified_cost_exact(PowerCost{0.0, 2.0}, 5.0, 2.0, cfg) == 0.0);
}

TEST_CASE("modified costs, approx flavor") {
    SolverConfig cfg;
    cfg.alpha_max = 2.0;
    cfg.rho = 5.0;
    CHECK(modified_cost_approx(PowerCost{3.0, 1.0}, 7.0, 2.0, cfg) == doctest::Approx(30.0));
    CHECK(modified_cost_approx(PowerCost{2.0, 2.0}, 3.0, 2.0, cfg) ==
          modified_cost_exact(PowerCost{2.0, 2.0}, 3.0, 2.0, cfg));
    CHECK(modified_cost_approx(PowerCost{0.0, 1.0}, 1.0, 2.0, cfg) == 0.0);
}

TEST_CASE("rho follows the mode") {
    CHECK(SolverConfig::rho_for(2.0, 1.0, CostMode::ExactOracle) ==
          doctest::Approx(2.0 * std::exp(1.0)));
    CHECK(SolverConfig::rho_for(2.0, 2.0, CostMode::ApproxOracle) ==
          doctest::Approx(4.0 * std::exp(1.0)));
    CHECK(SolverConfig::rho_for(1.0, 3.0, CostMode::ApproxOracle) == doctest::Approx(1.0));
}

TEST_CASE("steps commit oracle replies") {
    Oracle oracle;
    SUBCASE("forced reply regardless of costs") {
        Instance inst = forced_power_instance(5.0, 3.0, 1);
        SolverConfig cfg = SolverConfig::for_instance(inst, 1.0, CostMode::ApproxOracle);
        OnlineSolver solver(inst, cfg);
        const auto& rec = solver.step(inst.requests[0], oracle);
        CHECK(rec.reply == Reply{0});
        CHECK(solver.loads()[0] == 1.0);
    }
    SUBCASE("parallel routes alternate") {
        Instance inst = parallel_instance(PowerCost{1.0, 2.0}, PowerCost{1.0, 2.0}, 2);
        SolverConfig cfg = SolverConfig::for_instance(inst, 1.0, CostMode::ApproxOracle);
        OnlineSolver solver(inst, cfg);
        const auto& first = solver.step(inst.requests[0], oracle);
        CHECK(first.reply == Reply{0}); // tie broken toward the first option
        const auto& second = solver.step(inst.requests[1], oracle);
        CHECK(second.reply == Reply{1}); // used route now strictly pricier
    }
    SUBCASE("unsatisfiable requests surface as such") {
        Instance inst;
        inst.resources.push_back({"ab", PowerCost{1.0, 1.0}});
        Graph g;
        g.directed = true;
        g.nodes = {"a", "b", "c"};
        g.edges = {{0, 0, 1}};
        inst.graph = std::move(g);
        Request req;
        req.index = 0;
        req.weights = {1.0};
        req.replies = RoutePair{0, 2, 1.0};
        inst.requests.push_back(req);
        SolverConfig cfg = SolverConfig::for_instance(inst, 1.0, CostMode::ApproxOracle);
        OnlineSolver solver(inst, cfg);
        CHECK_THROWS_AS(solver.step(inst.requests[0], oracle), UnsatisfiableRequest);
    }
}

TEST_CASE("run_power basics") {
    Oracle oracle;
    SUBCASE("empty stream costs nothing") {
        Instance inst = forced_power_instance(1.0, 2.0, 0);
        SolverConfig cfg = SolverConfig::for_instance(inst, 1.0, CostMode::ApproxOracle);
        auto trace = run_power(inst, cfg, oracle);
        CHECK(trace.power_objective == 0.0);
        CHECK(trace.steps.empty());
    }
    SUBCASE("forced unit requests pile up") {
        Instance inst = forced_power_instance(1.0, 2.0, 2);
        SolverConfig cfg = SolverConfig::for_instance(inst, 1.0, CostMode::ApproxOracle);
        auto trace = run_power(inst, cfg, oracle);
        CHECK(trace.final_loads[0] == 2.0);
        CHECK(trace.power_objective == doctest::Approx(4.0));
        CHECK(trace.cost_power == doctest::Approx(4.0));
        CHECK(trace.cost_linear == 0.0);
    }
    SUBCASE("non-power resources are rejected") {
        Instance inst;
        inst.resources.push_back({"e", DoSCost{1.0, 1.0, 2.0}});
        SolverConfig cfg;
        CHECK_THROWS_AS(run_power(inst, cfg, Oracle{}), ValidationError);
    }
}

TEST_CASE("dos pipeline evaluates the original objective") {
    Oracle oracle;
    Instance inst;
    inst.resources.push_back({"e", DoSCost{4.0, 1.0, 2.0}});
    Request req;
    req.index = 0;
    req.weights = {1.0};
    req.replies = ExplicitReplies{{{0}}};
    inst.requests.push_back(req);
    auto trace = run_dos(inst, 1.0, oracle);
    REQUIRE(trace.original_cost.has_value());
    CHECK(*trace.original_cost == doctest::Approx(5.0)); // f(1) = 4 + 1
    CHECK(trace.cost_linear == doctest::Approx(2.0));    // linear copy: xi*q^(a-1) = 2
    CHECK(trace.cost_power == doctest::Approx(1.0));
    CHECK(trace.q_max == doctest::Approx(2.0));
    CHECK_THROWS_AS(run_dos(Instance{{{"r", RepCost{1.0, {{1.0, 1.0}}}}}, {}, {}}, 1.0, oracle),
                    ValidationError);
}

TEST_CASE("dos pipeline with zero startup equals the power run") {
    Oracle oracle;
    Instance dos = parallel_instance(DoSCost{0.0, 1.0, 2.0}, DoSCost{0.0, 2.0, 1.5}, 3, 1.25);
    Instance power = parallel_instance(PowerCost{1.0, 2.0}, PowerCost{2.0, 1.5}, 3, 1.25);
    auto a = run_dos(dos, 1.0, oracle);
    SolverConfig cfg = SolverConfig::for_instance(power, 1.0, CostMode::ApproxOracle);
    auto b = run_power(power, cfg, oracle);
    REQUIRE(a.steps.size() == b.steps.size());
    for (std::size_t i = 0; i < a.steps.size(); ++i) CHECK(a.steps[i].reply == b.steps[i].reply);
    CHECK(*a.original_cost == doctest::Approx(b.power_objective));
}

TEST_CASE("rep pipeline") {
    Oracle oracle;
    SUBCASE("single term behaves like the dos pipeline") {
        Instance rep;
        rep.resources.push_back({"e", RepCost{1.0, {{1.0, 2.0}}}});
        Request req;
        req.index = 0;
        req.weights = {1.0};
        req.replies = ExplicitReplies{{{0}}};
        rep.requests.push_back(req);
        auto trace = run_rep(rep, 1.0, oracle);
        CHECK(*trace.original_cost == doctest::Approx(2.0));

        Instance dos;
        dos.resources.push_back({"e", DoSCost{1.0, 1.0, 2.0}});
        dos.requests.push_back(req);
        auto dtrace = run_dos(dos, 1.0, oracle);
        CHECK(*trace.original_cost == doctest::Approx(*dtrace.original_cost));
        CHECK(trace.power_objective == doctest::Approx(dtrace.power_objective));
    }
    SUBCASE("two terms from the reduction example") {
        Instance rep;
        rep.resources.push_back({"e", RepCost{1.0, {{1.0, 2.0}, {100.0, 2.0}}}});
        Request req;
        req.index = 0;
        req.weights = {1.0};
        req.replies = ExplicitReplies{{{0}}};
        rep.requests.push_back(req);
        auto trace = run_rep(rep, 1.0, oracle);
        CHECK(*trace.original_cost == doctest::Approx(102.0));
    }
}

TEST_CASE("marginal increase respects the per-step bound") {
    // Exact-mode chain: the realized objective increase is at most e times
    // the modified cost of the chosen reply.
    Oracle oracle;
    std::mt19937_64 seeds(99);
    for (int trial = 0; trial < 40; ++trial) {
        GenParams params;
        params.seed = seeds();
        params.resources = 5;
        params.requests = 5;
        Instance inst = random_instance(params);
        SolverConfig cfg = SolverConfig::for_instance(inst, 1.0, CostMode::ExactOracle);
        auto trace = run_power(inst, cfg, oracle);
        for (const auto& step : trace.steps) {
            double psi_reply = 0.0;
            for (int e : step.reply) psi_reply += step.queried[e];
            CHECK(step.marginal_increase <=
                  std::exp(1.0) * psi_reply * (1.0 + 1e-9) + 1e-12);
        }
    }
}

TEST_CASE("approx mode bounds the modified objective per step") {
    Oracle oracle;
    std::mt19937_64 seeds(100);
    for (int trial = 0; trial < 40; ++trial) {
        GenParams params;
        params.seed = seeds();
        Instance inst = random_instance(params);
        SolverConfig cfg = SolverConfig::for_instance(inst, 1.0, CostMode::ApproxOracle);
        auto trace = run_power(inst, cfg, oracle);
        for (const auto& step : trace.steps) {
            double psi_reply = 0.0;
            for (int e : step.reply) psi_reply += step.queried[e];
            CHECK(step.modified_increase <=
                  std::exp(1.0) * psi_reply * (1.0 + 1e-9) + 1e-12);
        }
    }
}

TEST_CASE("uniform cost scaling leaves replies unchanged") {
    Oracle oracle;
    std::mt19937_64 seeds(101);
    for (double lambda : {2.0, 0.25}) {
        GenParams params;
        params.seed = seeds();
        params.requests = 5;
        Instance inst = random_instance(params);
        Instance scaled = inst;
        for (auto& r : scaled.resources) {
            auto g = std::get<PowerCost>(r.cost);
            g.c *= lambda;
            r.cost = g;
        }
        SolverConfig cfg = SolverConfig::for_instance(inst, 1.0, CostMode::ApproxOracle);
        auto a = run_power(inst, cfg, oracle);
        auto b = run_power(scaled, cfg, oracle);
        REQUIRE(a.steps.size() == b.steps.size());
        for (std::size_t i = 0; i < a.steps.size(); ++i)
            CHECK(a.steps[i].reply == b.steps[i].reply);
    }
}

TEST_CASE("replaying the trace reproduces the final loads") {
    Oracle oracle;
    GenParams params;
    params.seed = 1234;
    params.requests = 5;
    Instance inst = random_instance(params);
    SolverConfig cfg = SolverConfig::for_instance(inst, 1.0, CostMode::ApproxOracle);
    auto trace = run_power(inst, cfg, oracle);
    LoadVector replay = zero_loads(inst);
    for (std::size_t i = 0; i < trace.steps.size(); ++i)
        replay = apply_reply(replay, inst, inst.requests[i], trace.steps[i].reply);
    CHECK(replay == trace.final_loads);
    CHECK(total_cost(replay, inst) == total_cost(trace.final_loads, inst));
}
