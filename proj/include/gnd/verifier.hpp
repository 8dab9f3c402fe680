#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "gnd/fractional_solver.hpp"
#include "gnd/instance.hpp"
#include "gnd/online_solver.hpp"

namespace gnd {

// Which dual program a solution lives in: the plain dual of the covering
// relaxation (D), the strengthened relaxation with penalty terms on every
// resource (DPrime), or penalty terms on superlinear resources only
// (DDoublePrime). The penalty terms are materialized as dummy linear
// resources here in the verifier; the solvers never see them.
enum class DualProgram { D, DPrime, DDoublePrime };

// Indexed by power copies (PowerView order), which for a pure power-cost
// instance is one entry per resource.
struct DualSolution {
    DualProgram program = DualProgram::D;
    std::vector<double> y;       // per request
    std::vector<double> z;       // per power copy
    std::vector<double> beta;    // per copy: alpha/(alpha-1), +inf when alpha == 1
    std::vector<double> z_dummy; // per copy: 1.0 by construction, NaN = no dummy
};

struct CheckResult {
    std::string name;
    bool pass = false;
    double slack = 0.0; // relative; negative means violated
    std::string detail;
};

struct Certificate {
    std::string status = "certified"; // "uncertified" when enumeration is out of budget
    double primal_value = 0.0;
    double dual_objective = 0.0;
    std::optional<double> opt;
    double ratio = 0.0;
    double bound = 0.0; // theoretical competitive-ratio bound for this run
    std::vector<CheckResult> checks;

    bool accepted() const;
};

struct BruteForceResult {
    std::vector<Reply> replies; // one per request
    double opt = 0.0;
};

// Exact offline optimum by enumerating minimal replies per request and
// taking the best combination. Throws BudgetExceeded when the product of
// candidate counts exceeds the budget.
BruteForceResult brute_force_opt(const Instance& inst, std::size_t budget = 1'000'000);
// Same enumeration under a caller-supplied objective on load vectors.
BruteForceResult brute_force_opt(const Instance& inst, std::size_t budget,
                                 const std::function<double(const LoadVector&)>& objective);

// Exact min over the request's replies under per-resource prices; explicit
// lists and routing pairs use exact oracles, connectivity requests are
// enumerated. Throws RequiresExactOracle past the budget.
double exact_min_reply_cost(const Instance& inst, const Request& req,
                            std::span<const double> price, std::size_t budget = 1'000'000);

// Dual of the analysis program matching the trace's mode: penalty copies on
// superlinear resources (approx mode) or all resources (exact mode), with
// z = final_load^(alpha-1)/rho and unit dummies.
DualSolution build_dual_integral(const RunTrace& trace, const SolverConfig& cfg,
                                 const Instance& inst, std::size_t budget = 1'000'000);

// Plain dual from a load profile: z = delta * load^(alpha-1), y = exact
// reply minima. Power-cost instances only.
DualSolution make_fractional_dual(const Instance& inst, const LoadVector& loads, double delta,
                                  std::size_t budget = 1'000'000);
DualSolution build_dual_fractional(const FractionalReport& report, const Instance& inst,
                                   double delta, std::size_t budget = 1'000'000);

// Reply constraints over enumerable collections plus box constraints;
// relative tolerance 1e-9. The worst slack and first violation are reported.
CheckResult check_dual_feasible(const DualSolution& dual, const Instance& inst,
                                std::size_t budget = 1'000'000);

// y-sum minus the conjugate penalty sum over superlinear copies.
double dual_objective(const DualSolution& dual, const Instance& inst);

// Objective of the covering relaxation at a fractional assignment, under the
// power-copy expansion of the costs.
double primal_objective_value(const Instance& inst,
                              const std::vector<std::vector<ReplyShare>>& x);

// Full certification of an integral run: dual feasibility, the
// lower/upper analysis chain, weak duality against the run's own solution,
// and the end-to-end competitive bound against brute force.
Certificate certify_run(const RunTrace& trace, const Instance& inst, const SolverConfig& cfg,
                        std::size_t budget = 1'000'000);

// Certification of a fractional run: covering feasibility, the primal bound
// against brute force, per-request query bounds, and dual weak duality.
Certificate certify_fractional(const FractionalReport& report, const Instance& inst,
                               std::size_t budget = 1'000'000);

// Randomized numeric checks of the two scalar inequalities the analysis
// rests on: (X+Y)^(a-1) <= e*X^(a-1) + a^(a-1)*Y^(a-1), and Young's
// inequality A*B <= A^a/a + B^b/b for conjugate a, b.
std::vector<CheckResult> inequality_suite(std::uint64_t seed = 7, int samples = 100000);

} // namespace gnd
