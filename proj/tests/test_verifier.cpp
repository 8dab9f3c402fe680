#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gnd/adversary.hpp"
#include "gnd/errors.hpp"
#include "gnd/verifier.hpp"
#include "helpers.hpp"

using namespace gnd;
using gnd::testing::forced_power_instance;
using gnd::testing::parallel_instance;
using gnd::testing::rel_close;

TEST_CASE("brute force optimum") {
    SUBCASE("forced requests") {
        Instance inst = forced_power_instance(1.0, 2.0, 2);
        auto res = brute_force_opt(inst);
        CHECK(res.opt == doctest::Approx(4.0));
    }
    SUBCASE("parallel edges spread out") {
        Instance inst = parallel_instance(PowerCost{1.0, 2.0}, PowerCost{1.0, 2.0}, 2);
        auto res = brute_force_opt(inst);
        CHECK(res.opt == doctest::Approx(2.0));
        CHECK(res.replies[0] != res.replies[1]);
    }
    SUBCASE("request order does not matter") {
        GenParams params;
        params.seed = 31337;
        params.requests = 4;
        Instance inst = random_instance(params);
        auto a = brute_force_opt(inst);
        std::reverse(inst.requests.begin(), inst.requests.end());
        for (std::size_t i = 0; i < inst.requests.size(); ++i)
            inst.requests[i].index = static_cast<int>(i);
        auto b = brute_force_opt(inst);
        CHECK(a.opt == doctest::Approx(b.opt).epsilon(1e-12));
    }
    SUBCASE("budget is enforced") {
        GenParams params;
        params.seed = 5;
        params.requests = 5;
        params.max_replies = 3;
        Instance inst = random_instance(params);
        CHECK_THROWS_AS(brute_force_opt(inst, 2), BudgetExceeded);
    }
}

TEST_CASE("integral dual construction") {
    Oracle oracle;
    SUBCASE("linear resource sits at the box bound") {
        Instance inst = forced_power_instance(2.0, 1.0, 1, 1.5);
        SolverConfig cfg = SolverConfig::for_instance(inst, 1.0, CostMode::ApproxOracle);
        auto trace = run_power(inst, cfg, oracle);
        auto dual = build_dual_integral(trace, cfg, inst);
        CHECK(dual.program == DualProgram::DDoublePrime);
        CHECK(dual.z[0] == 1.0);
        CHECK(std::isinf(dual.beta[0]));
        // y is the cheapest reply under the linear prices: c*w = 3.
        CHECK(dual.y[0] == doctest::Approx(3.0));
    }
    SUBCASE("superlinear z follows the final load") {
        Instance inst = forced_power_instance(1.0, 2.0, 4); // final load 4
        SolverConfig cfg = SolverConfig::for_instance(inst, 1.0, CostMode::ApproxOracle);
        auto trace = run_power(inst, cfg, oracle);
        auto dual = build_dual_integral(trace, cfg, inst);
        CHECK(dual.z[0] == doctest::Approx(4.0 / cfg.rho));
        CHECK(dual.beta[0] == doctest::Approx(2.0));
        CHECK(dual.z_dummy[0] == 1.0);
    }
    SUBCASE("empty instance has objective zero") {
        Instance inst = forced_power_instance(1.0, 2.0, 0);
        SolverConfig cfg = SolverConfig::for_instance(inst, 1.0, CostMode::ApproxOracle);
        auto trace = run_power(inst, cfg, oracle);
        auto dual = build_dual_integral(trace, cfg, inst);
        CHECK(dual_objective(dual, inst) == 0.0);
    }
}

TEST_CASE("dual feasibility checking") {
    Oracle oracle;
    GenParams params;
    params.seed = 808;
    params.requests = 4;
    Instance inst = random_instance(params);
    SolverConfig cfg = SolverConfig::for_instance(inst, 1.0, CostMode::ApproxOracle);
    auto trace = run_power(inst, cfg, oracle);
    auto dual = build_dual_integral(trace, cfg, inst);

    CHECK(check_dual_feasible(dual, inst).pass);

    SUBCASE("inflated y breaks a reply constraint") {
        auto bad = dual;
        for (auto& yi : bad.y) yi *= 1.1;
        auto res = check_dual_feasible(bad, inst);
        CHECK_FALSE(res.pass);
        CHECK(res.detail.find("reply constraint") != std::string::npos);
    }
    SUBCASE("z above one on a linear resource is rejected") {
        Instance lin = forced_power_instance(1.0, 1.0, 1);
        SolverConfig lcfg = SolverConfig::for_instance(lin, 1.0, CostMode::ApproxOracle);
        auto ltrace = run_power(lin, lcfg, oracle);
        auto ldual = build_dual_integral(ltrace, lcfg, lin);
        ldual.z[0] = 1.5;
        auto res = check_dual_feasible(ldual, lin);
        CHECK_FALSE(res.pass);
    }
}

TEST_CASE("dual objective formula") {
    SUBCASE("all zeros") {
        Instance inst = forced_power_instance(1.0, 2.0, 1);
        DualSolution dual;
        dual.program = DualProgram::D;
        dual.y = {0.0};
        dual.z = {0.0};
        dual.beta = {2.0};
        dual.z_dummy = {std::numeric_limits<double>::quiet_NaN()};
        CHECK(dual_objective(dual, inst) == 0.0);
    }
    SUBCASE("one superlinear term") {
        Instance inst = forced_power_instance(1.0, 2.0, 1);
        DualSolution dual;
        dual.program = DualProgram::D;
        dual.y = {0.0};
        dual.z = {0.5};
        dual.beta = {2.0};
        dual.z_dummy = {std::numeric_limits<double>::quiet_NaN()};
        CHECK(dual_objective(dual, inst) == doctest::Approx(-0.25));
    }
    SUBCASE("linear resources carry no conjugate term") {
        Instance inst = forced_power_instance(3.0, 1.0, 1);
        DualSolution dual;
        dual.program = DualProgram::D;
        dual.y = {0.0};
        dual.z = {0.9};
        dual.beta = {std::numeric_limits<double>::infinity()};
        dual.z_dummy = {std::numeric_limits<double>::quiet_NaN()};
        CHECK(dual_objective(dual, inst) == 0.0);
    }
}

TEST_CASE("fractional dual construction") {
    SUBCASE("delta caps linear z") {
        Instance inst = forced_power_instance(1.0, 1.0, 1);
        auto dual = make_fractional_dual(inst, {0.7}, 1.0);
        CHECK(dual.z[0] == doctest::Approx(1.0)); // delta * load^0
    }
    SUBCASE("superlinear z from the load") {
        Instance inst = forced_power_instance(1.0, 3.0, 1);
        auto dual = make_fractional_dual(inst, {2.0}, 0.25);
        CHECK(dual.z[0] == doctest::Approx(1.0)); // 0.25 * 2^2
    }
    SUBCASE("forced reply pins y") {
        Instance inst = forced_power_instance(2.0, 2.0, 1, 1.5);
        auto dual = make_fractional_dual(inst, {1.0}, 0.5);
        // price = w*c*alpha*z = 1.5*2*2*0.5
        CHECK(dual.y[0] == doctest::Approx(3.0));
    }
}

TEST_CASE("dual matches the closed form on a forced single resource") {
    // c = 1, alpha = 2, four forced unit requests: final load 4, rho = 2e.
    Oracle oracle;
    Instance inst = forced_power_instance(1.0, 2.0, 4);
    SolverConfig cfg = SolverConfig::for_instance(inst, 1.0, CostMode::ApproxOracle);
    auto trace = run_power(inst, cfg, oracle);
    auto dual = build_dual_integral(trace, cfg, inst);
    const double e = std::exp(1.0);
    const double z = 4.0 / (2.0 * e);
    const double y = 2.0 * z + 2.0 / (e * e); // c*a*w*z + (c*a/e^a)*w^a
    CHECK(dual.z[0] == doctest::Approx(z).epsilon(1e-12));
    for (double yi : dual.y) CHECK(yi == doctest::Approx(y).epsilon(1e-12));
    const double objective = 4.0 * y - z * z; // (c*a/beta)*z^beta with beta = 2
    CHECK(dual_objective(dual, inst) == doctest::Approx(objective).epsilon(1e-12));
    // Hand-checked chain: H/(2e)^2 <= D <= (1 + 2e^-2) * 16.
    CHECK(16.0 / (4.0 * e * e) <= objective);
    CHECK(objective <= (1.0 + 2.0 / (e * e)) * 16.0);
}

TEST_CASE("certification of an integral run") {
    Oracle oracle;
    Instance inst = parallel_instance(PowerCost{1.0, 2.0}, PowerCost{1.0, 2.0}, 2);
    SolverConfig cfg = SolverConfig::for_instance(inst, 1.0, CostMode::ApproxOracle);
    auto trace = run_power(inst, cfg, oracle);
    auto cert = certify_run(trace, inst, cfg);
    CHECK(cert.status == "certified");
    for (const auto& check : cert.checks) {
        INFO(check.name, " slack ", check.slack);
        CHECK(check.pass);
    }
    CHECK(*cert.opt == doctest::Approx(2.0));
    CHECK(cert.ratio <= 2.0 * std::pow(2.0 * std::exp(1.0), 2.0));
    CHECK(cert.bound == doctest::Approx(2.0 * std::pow(2.0 * std::exp(1.0), 2.0)));

    SUBCASE("exact mode certifies through its own dual") {
        SolverConfig ecfg = SolverConfig::for_instance(inst, 1.0, CostMode::ExactOracle);
        auto etrace = run_power(inst, ecfg, oracle);
        auto ecert = certify_run(etrace, inst, ecfg);
        for (const auto& check : ecert.checks) {
            INFO(check.name, " slack ", check.slack);
            CHECK(check.pass);
        }
    }
}

TEST_CASE("certification of the dos pipeline") {
    Oracle oracle;
    Instance inst = parallel_instance(DoSCost{4.0, 1.0, 2.0}, DoSCost{1.0, 2.0, 1.5}, 3, 1.5);
    auto trace = run_dos(inst, 1.0, oracle);
    SolverConfig cfg = SolverConfig::for_instance(inst, 1.0, CostMode::ApproxOracle);
    auto cert = certify_run(trace, inst, cfg);
    CHECK(cert.status == "certified");
    for (const auto& check : cert.checks) {
        INFO(check.name, " slack ", check.slack);
        CHECK(check.pass);
    }
}

TEST_CASE("certification of an adversarial tree run") {
    auto report = run_tree_adversary(3, 3.0);
    const Instance& inst = report.tree.instance;
    SolverConfig cfg = SolverConfig::for_instance(inst, 1.0, CostMode::ApproxOracle);
    auto cert = certify_run(report.trace, inst, cfg);
    REQUIRE(cert.status == "certified");
    for (const auto& check : cert.checks) {
        INFO(check.name, " slack ", check.slack);
        CHECK(check.pass);
    }
    // The adversary forces at least q/2 even against the exact optimum.
    CHECK(cert.ratio >= 1.5);
    CHECK(*cert.opt <= 2.0 * report.tree.sigma + 1e-9);
}

TEST_CASE("uncertifiable runs are reported, not failed") {
    Oracle oracle;
    GenParams params;
    params.seed = 2;
    params.requests = 4;
    Instance inst = random_instance(params);
    SolverConfig cfg = SolverConfig::for_instance(inst, 1.0, CostMode::ApproxOracle);
    auto trace = run_power(inst, cfg, oracle);
    auto cert = certify_run(trace, inst, cfg, /*budget=*/2);
    CHECK(cert.status == "uncertified");
    CHECK(cert.accepted());
}

TEST_CASE("analysis inequalities") {
    auto results = inequality_suite(7, 20000);
    REQUIRE(results.size() == 2);
    for (const auto& r : results) {
        INFO(r.name, " slack ", r.slack);
        CHECK(r.pass);
    }
    // Spot values behind the randomized sweep.
    CHECK(std::pow(0.0 + 0.0, 2.0) <= std::exp(1.0) * 0.0 + 0.0 + 1e-12);
    CHECK(1.0 * 1.0 <= 0.5 + 0.5 + 1e-12);                       // Young at equality
    CHECK(std::pow(2.0, 2.0) <= std::exp(1.0) + 9.0 + 1e-12);    // X=Y=1, a=3
}

TEST_CASE("weak duality on randomized pairs") {
    std::mt19937_64 rng(512);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        GenParams params;
        params.seed = rng();
        params.requests = 3;
        params.resources = 4;
        Instance inst = random_instance(params);

        // Random feasible fractional primal: convex weights per request.
        std::vector<std::vector<ReplyShare>> x;
        for (const auto& req : inst.requests) {
            auto options = minimal_replies(inst, req);
            std::vector<double> w(options.size());
            double total = 0.0;
            for (auto& v : w) total += (v = unit(rng) + 1e-3);
            std::vector<ReplyShare> shares;
            for (std::size_t k = 0; k < options.size(); ++k)
                shares.push_back({options[k], w[k] / total});
            x.push_back(std::move(shares));
        }
        const double primal = primal_objective_value(inst, x);

        // Feasible dual from random loads, scaled down while staying feasible.
        LoadVector loads(inst.size());
        for (auto& v : loads) v = 3.0 * unit(rng);
        const double delta = 0.05 + 0.95 * unit(rng);
        auto dual = make_fractional_dual(inst, loads, delta);
        const double shrink = 0.05 + 0.95 * unit(rng);
        for (auto& yi : dual.y) yi *= shrink;
        REQUIRE(check_dual_feasible(dual, inst).pass);
        CHECK(primal >= dual_objective(dual, inst) - 1e-9 * std::max(1.0, primal));
    }
}
