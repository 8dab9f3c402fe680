#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gnd/instance.hpp"
#include "gnd/online_solver.hpp"

namespace gnd {

// Complete binary tree of given depth, edges directed toward the root, plus
// a source wired to every tree node. Source edges carry the startup cost
// sigma = depth^alpha with unit scaling coefficient; tree edges are free.
struct TreeAdversary {
    Instance instance; // graph + resources; requests appended as they are issued
    int depth = 1;     // q
    double alpha = 1.0;
    double sigma = 1.0; // depth^alpha, so depth = sigma^(1/alpha)
    int source = -1;    // node index of s
    int root = -1;      // node index of t
    std::vector<std::array<int, 2>> children; // node -> children (-1 for leaves)
    std::vector<int> parent_edge;             // node -> resource of edge to parent
    std::vector<int> source_edge;             // node -> resource of the s-edge to it
};

TreeAdversary build_tree_adversary(int depth, double alpha);

// Next sink for the adaptive sequence: the root for the first request, then
// the child of the previous sink that the flow-carrying edges (load >= 1)
// cannot reach from the source; the left child breaks ties. Throws
// AdversaryStuck if both children are already reachable.
int tree_adversary_next(const TreeAdversary& tree, const LoadVector& loads, int prev_sink);

// The single-source-edge offline solution: the edge to the deepest sink plus
// the tree path back up. Feasible for every issued request.
Reply build_offline_tree_solution(const TreeAdversary& tree, const std::vector<int>& sinks);

struct AdversaryRunReport {
    TreeAdversary tree; // instance holds the realized request sequence
    RunTrace trace;
    std::vector<int> sinks;
    double online_cost = 0.0;
    double offline_cost = 0.0;
    double ratio = 0.0;
    int used_source_edges = 0; // source edges carrying load >= 1 at the end
};

// Interleaved driver: the adversary observes the solver's loads after every
// request and picks the next sink accordingly.
AdversaryRunReport run_tree_adversary(int depth, double alpha);

// Restricted-assignment scheduling with the p-th power of machine loads as a
// single-source routing instance: unit-cost edges from the source to machine
// nodes, free edges from machines to the jobs they may serve.
Instance restricted_assignment_to_ssr(int machines, const std::vector<std::vector<int>>& jobs,
                                      double p);

struct GenParams {
    std::string family = "explicit";  // explicit | routing | steiner
    std::string cost_kind = "power";  // power | dos | rep
    std::uint64_t seed = 0;
    int resources = 4;      // explicit family
    int requests = 3;
    int max_replies = 3;    // explicit options per request
    int max_reply_size = 3;
    int nodes = 6;          // graph families
    int extra_edges = 4;
    int max_terms = 3;      // rep cost terms
    int max_terminals = 4;  // steiner family
};

// Reproducible pseudo-random instance: weights uniform in [1,4], exponents
// from {1, 1.5, 2, 3}, coefficients log-uniform in [0.1, 10].
Instance random_instance(const GenParams& params);

} // namespace gnd
