#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gnd/cost_model.hpp"

namespace gnd {

struct Resource {
    std::string id;
    CostFunction cost;
};

// Reply collections, indexed by dense resource positions.
struct ExplicitReplies {
    std::vector<std::vector<int>> options; // each sorted, nonempty list overall
};

struct RoutePair {
    int source = -1; // node index
    int sink = -1;
    double demand = 1.0; // >= 1; every used resource gets this weight
};

struct ConnectSet {
    std::vector<int> terminals; // node indices, nonempty
    double demand = 1.0;
};

using ReplySpec = std::variant<ExplicitReplies, RoutePair, ConnectSet>;

struct Request {
    int index = 0;
    std::vector<double> weights; // dense, one per resource, all >= 1
    ReplySpec replies;
};

struct Edge {
    int resource = -1; // resource backing this edge
    int from = -1;
    int to = -1;
};

struct Graph {
    bool directed = false;
    std::vector<std::string> nodes;
    std::vector<Edge> edges;

    int node_index(const std::string& name) const; // -1 when absent
};

struct Instance {
    std::vector<Resource> resources;
    std::optional<Graph> graph;
    std::vector<Request> requests;

    int resource_index(const std::string& id) const; // -1 when absent
    std::size_t size() const { return resources.size(); }

    // Full invariant check: unique ids, weights >= 1, replies reference
    // existing resources, graph specs have a graph. Throws ValidationError.
    void validate() const;
};

// A committed reply: sorted, duplicate-free resource indices.
using Reply = std::vector<int>;
Reply normalize_reply(std::vector<int> members);

// Accumulated per-resource loads, aligned with Instance::resources.
using LoadVector = std::vector<double>;
LoadVector zero_loads(const Instance& inst);

// True when `reply` satisfies the request: membership for explicit lists, a
// source-sink path for routing pairs, mutual terminal connectivity (strong
// connectivity on directed graphs) for connection sets.
bool validate_reply(const Instance& inst, const Request& req, const Reply& reply);

// Returns loads with w_{i,e} added on every reply member. Throws InvalidReply
// if the reply does not satisfy the request.
LoadVector apply_reply(const LoadVector& loads, const Instance& inst, const Request& req,
                       const Reply& reply);

// Sum over resources of the cost function at its load.
double total_cost(const LoadVector& loads, const Instance& inst);

// All inclusion-minimal valid replies for one request, deterministic order.
// Explicit collections are returned verbatim (in list order). Implicit
// collections are enumerated over edge subsets, so the graph must be small;
// enumeration beyond `budget` subsets throws BudgetExceeded.
std::vector<Reply> minimal_replies(const Instance& inst, const Request& req,
                                   std::size_t budget = 1u << 22);

} // namespace gnd
