#pragma once

#include <map>
#include <vector>

#include "gnd/instance.hpp"
#include "gnd/oracles.hpp"

namespace gnd {

struct ReplyShare {
    Reply reply;
    double x = 0.0;
};

struct FractionalQueryRecord {
    int request = 0;
    double elapsed = 0.0;           // time into the request when the query fired
    double cost_at_selection = 0.0; // oracle cost of the selected reply
    double live_cost_before = 0.0;  // previous reply's live cost at this instant
    Reply reply;
};

struct FractionalReport {
    double epsilon = 0.0;
    double eta = 0.0;       // artificial initial load on every resource
    double scale = 1.0;     // all costs were multiplied by this internally
    double B = 1.0;         // max scaled cost / weight
    double alpha_max = 1.0;
    double primal_objective = 0.0;   // unscaled, at final loads (including eta)
    double initial_objective = 0.0;  // unscaled cost of the all-eta loads
    std::vector<std::vector<ReplyShare>> supports; // per request, sorted by reply
    LoadVector final_loads;                        // includes eta
    std::vector<int> queries_per_request;
    int total_queries = 0;
    std::vector<FractionalQueryRecord> query_trace; // filled when enabled
};

// eta = epsilon / (m^(1+alpha) * B); expects the instance pre-scaled so that
// every positive coefficient is >= 1.
double init_eta(const Instance& inst, double epsilon);

class FractionalSolver {
  public:
    FractionalSolver(const Instance& inst, double epsilon, bool record_queries = false);

    // Simulates unit continuous time for one request: holds the oracle's
    // reply until its live cost crosses (1+epsilon) times its cost at
    // selection, solving the crossing time exactly, then re-queries.
    void step(const Request& req, const Oracle& oracle);

    FractionalReport finish() &&;

  private:
    const Instance* inst_;
    double epsilon_;
    double scale_;   // multiplier that made costs >= 1
    double eta_;
    double B_;
    double alpha_max_;
    bool record_;
    std::vector<PowerCost> scaled_; // per resource, scaled coefficients
    LoadVector loads_;
    FractionalReport report_;
};

// Fold every request of a power-cost instance; throws ValidationError on
// non-power resources.
FractionalReport run_fractional(const Instance& inst, double epsilon, const Oracle& oracle,
                                bool record_queries = false);

} // namespace gnd
