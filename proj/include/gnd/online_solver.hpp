#pragma once

#include <optional>

#include "gnd/instance.hpp"
#include "gnd/oracles.hpp"

namespace gnd {

enum class CostMode {
    ExactOracle,  // greedy marginal costs on every resource
    ApproxOracle, // flat penalty on linear resources, stronger L-bound
};

struct SolverConfig {
    double rho = 1.0;       // (e*alpha)^(alpha-1) or (e*tau*alpha)^(alpha-1)
    double alpha_max = 1.0; // instance-wide max exponent over power copies
    double tau = 1.0;       // oracle guarantee
    CostMode mode = CostMode::ApproxOracle;

    static double rho_for(double alpha_max, double tau, CostMode mode);
    static SolverConfig for_instance(const Instance& inst, double tau,
                                     CostMode mode = CostMode::ApproxOracle);
};

// Every resource flattened into weighted power copies; the unit all solver
// and verifier arithmetic runs on. Copies of one resource always carry the
// same load as the original.
struct PowerView {
    struct Copy {
        int origin;
        PowerCost g;
    };
    std::vector<Copy> copies;
    std::vector<std::pair<int, int>> span; // resource -> [begin, end) in copies
    double alpha_max = 1.0;
    double q_max = 0.0; // max crossover load (Q for REP resources)

    static PowerView of(const Instance& inst);
    bool linear(int copy) const { return copies[copy].g.alpha == 1.0; }
};

// Greedy costs handed to the min-cost oracle:
//   alpha*c*load^(alpha-1)*w  +  (rho/e^alpha_max)*c*alpha*w^alpha.
double modified_cost_exact(const PowerCost& g, double load, double w, const SolverConfig& cfg);
// Same, except linear resources pay the flat rho*c*w.
double modified_cost_approx(const PowerCost& g, double load, double w, const SolverConfig& cfg);

struct StepRecord {
    int request = 0;
    Reply reply;
    double oracle_cost = 0.0;        // sum of queried costs over the reply
    double marginal_increase = 0.0;  // realized increase of the power objective
    double modified_increase = 0.0;  // increase of e*rho*L + H (approx accounting)
    std::vector<double> queried;     // per-resource modified costs for this request
};

struct RunTrace {
    SolverConfig cfg;
    std::vector<StepRecord> steps;
    LoadVector final_loads;               // per original resource
    double cost_linear = 0.0;             // L: linear copies
    double cost_power = 0.0;              // H: superlinear copies
    double power_objective = 0.0;         // L + H
    std::optional<double> original_cost;  // under the original cost functions
    double q_max = 0.0;
};

// Sequential online solver; also drives adaptive request streams, so
// requests need not come from inst.requests.
class OnlineSolver {
  public:
    OnlineSolver(const Instance& inst, const SolverConfig& cfg);

    // Queries the oracle under the modified costs, commits the returned
    // reply, appends a step record. Oracle failures surface as
    // UnsatisfiableRequest.
    const StepRecord& step(const Request& req, const Oracle& oracle);

    const LoadVector& loads() const { return loads_; }
    const PowerView& view() const { return view_; }

    // Finalizes L/H and the original-objective cost.
    RunTrace finish() &&;

  private:
    const Instance* inst_;
    PowerView view_;
    SolverConfig cfg_;
    LoadVector loads_;
    RunTrace trace_;
};

// Feed every request of a power-cost instance through the solver.
// Throws ValidationError if any resource is not a PowerCost.
RunTrace run_power(const Instance& inst, const SolverConfig& cfg, const Oracle& oracle);

// End-to-end pipeline for startup-plus-power costs: resources are split into
// power copies, modified costs aggregate over the copies before the original
// oracle is queried, and the headline cost is under the original functions.
// Accepts PowerCost resources alongside DoSCost ones (already-reduced
// copies); RepCost resources are rejected here.
RunTrace run_dos(const Instance& inst, double tau, const Oracle& oracle);

// Same pipeline for real-exponent-polynomial costs (any cost mix).
RunTrace run_rep(const Instance& inst, double tau, const Oracle& oracle);

} // namespace gnd
