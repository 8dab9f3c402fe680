#pragma once

#include <span>

#include "gnd/instance.hpp"

namespace gnd {

struct OracleAnswer {
    Reply reply;       // sorted resource indices
    double cost = 0.0; // exact sum of d over reply
    double tau = 1.0;  // approximation guarantee of the producing oracle
};

// Exact minimum over an explicit reply collection; ties go to the first
// listed option.
OracleAnswer exhaustive_oracle(const Request& req, std::span<const double> d);

// Min-cost source-sink path (tau = 1). Ties prefer fewer edges, then the
// lexicographically smallest sequence of resource ids. Throws NoPath.
OracleAnswer shortest_path_oracle(const Instance& inst, const RoutePair& rt,
                                  std::span<const double> d);

// Metric-closure MST 2-approximation for undirected set connectivity.
// Throws Disconnected when the terminals span several components.
OracleAnswer steiner_oracle(const Instance& inst, const ConnectSet& cs,
                            std::span<const double> d);

// Exact minimum over enumerable reply collections (tau = 1); exponential in
// the edge count, only for small graphs. Also the only oracle for directed
// set connectivity. Throws BudgetExceeded past `budget` subsets.
OracleAnswer subset_oracle(const Instance& inst, const Request& req, std::span<const double> d,
                           std::size_t budget = 1u << 22);

enum class OracleKind { Auto, Exhaustive, ShortestPath, Steiner, Subset };

// Dispatcher the solvers talk to. Auto picks per reply-spec type: explicit
// lists -> exhaustive, routing -> shortest path, undirected connectivity ->
// Steiner, directed connectivity -> subset enumeration.
struct Oracle {
    OracleKind kind = OracleKind::Auto;
    std::size_t subset_budget = 1u << 22;

    OracleAnswer query(const Instance& inst, const Request& req,
                       std::span<const double> d) const;
    // Worst guarantee this oracle gives across the instance's requests.
    double tau_for(const Instance& inst) const;
};

} // namespace gnd
