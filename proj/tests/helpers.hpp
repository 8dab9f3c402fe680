#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gnd/instance.hpp"

namespace gnd::testing {

inline bool rel_close(double a, double b, double tol = 1e-9) {
    return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

// One power resource, requests forced onto it.
inline Instance forced_power_instance(double c, double alpha, int requests, double weight = 1.0) {
    Instance inst;
    inst.resources.push_back({"e0", PowerCost{c, alpha}});
    for (int i = 0; i < requests; ++i) {
        Request req;
        req.index = i;
        req.weights = {weight};
        req.replies = ExplicitReplies{{{0}}};
        inst.requests.push_back(std::move(req));
    }
    return inst;
}

// Two disjoint single-resource replies per request.
inline Instance parallel_instance(const CostFunction& cost_a, const CostFunction& cost_b,
                                  int requests, double weight = 1.0) {
    Instance inst;
    inst.resources.push_back({"e0", cost_a});
    inst.resources.push_back({"e1", cost_b});
    for (int i = 0; i < requests; ++i) {
        Request req;
        req.index = i;
        req.weights = {weight, weight};
        req.replies = ExplicitReplies{{{0}, {1}}};
        inst.requests.push_back(std::move(req));
    }
    return inst;
}

} // namespace gnd::testing
