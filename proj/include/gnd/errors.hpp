#pragma once

#include <stdexcept>
#include <string>

namespace gnd {

// Instance files or programmatically built instances that break a model
// invariant (duplicate ids, weights below one, dangling references, ...).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A reply that is not a member of the request's reply collection.
struct InvalidReply : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Routing request whose sink is unreachable from its source.
struct NoPath : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Connectivity request whose terminals span several components.
struct Disconnected : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised by solvers when the oracle cannot satisfy a request at all.
struct UnsatisfiableRequest : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Brute-force enumeration would exceed its configured budget.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dual construction needs an exact min-cost reply that no available
// method can provide for this instance.
struct RequiresExactOracle : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The adaptive tree adversary found both children already reachable.
struct AdversaryStuck : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace gnd
