#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace gnd {

// Cost of a speed-scalable resource with a startup term: zero when idle,
// sigma + xi * x^alpha when the load x is positive.
struct DoSCost {
    double sigma = 0.0; // idle/startup cost, >= 0
    double xi = 1.0;    // speed-scaling coefficient, > 0
    double alpha = 1.0; // exponent, >= 1
};

// Pure power cost c * x^alpha.
struct PowerCost {
    double c = 0.0;     // coefficient, >= 0
    double alpha = 1.0; // exponent, >= 1
};

struct RepTerm {
    double xi = 1.0;    // > 0
    double alpha = 1.0; // >= 1
};

// Real-exponent polynomial: zero at zero load, else sigma + sum_j xi_j * x^alpha_j.
struct RepCost {
    double sigma = 0.0;
    std::vector<RepTerm> terms; // nonempty
};

using CostFunction = std::variant<DoSCost, PowerCost, RepCost>;

double eval_dos(const DoSCost& f, double x);
double eval_power(const PowerCost& g, double x);
double eval_rep(const RepCost& r, double x);
double eval_cost(const CostFunction& f, double x);

// Crossover load (sigma/xi)^(1/alpha): where the startup and scaling terms
// of a DoS cost meet. Zero when sigma is zero.
double q_value(const DoSCost& f);

// Convex proxy xi*q^(alpha-1)*x + xi*x^alpha used by the reduction; equals
// the sum of the two power copies produced by reduce_dos_to_power.
double convex_surrogate(const DoSCost& f, double x);

// Throws ValidationError if parameters are out of range (xi <= 0, alpha < 1, ...).
void validate_cost(const CostFunction& f);

enum class CopyRole { LinearCopy, PowerCopy, RepCopy };

struct ResourceCopy {
    std::string id;
    CostFunction cost;
    CopyRole role;
};

// One original resource replaced by one or more copies whose costs sum to
// a controlled approximation (or exact replica) of the original cost.
struct ReductionMap {
    std::string origin;
    std::vector<ResourceCopy> copies;
};

// Split a DoS cost into a linear copy (coefficient xi*q^(alpha-1)) and a
// power copy (coefficient xi, exponent alpha). The copies' costs sum to
// convex_surrogate pointwise.
ReductionMap reduce_dos_to_power(const std::string& origin, const DoSCost& f);

// Split a REP cost into one DoS copy per term; the term with the smallest
// (sigma/xi_j)^(1/alpha_j) keeps sigma (lowest index wins ties), the rest
// get sigma = 0. The copies' costs sum to the REP cost pointwise.
ReductionMap reduce_rep_to_dos(const std::string& origin, const RepCost& r);

// Check (1/2)*h(x) <= f(x) <= max{q,1}*xi*q^(alpha-1)*x + xi*x^alpha for
// each sample. Samples must lie in {0} union [1, inf); anything in (0,1)
// or below zero throws ValidationError.
bool verify_sandwich(const DoSCost& f, std::span<const double> xs);

// Flatten any cost function into power copies: a PowerCost is itself, a
// DoSCost becomes its two copies, a RepCost goes through the DoS split
// first. Sum of copies equals convex_surrogate (DoS), the function itself
// (power), or the sum of per-term surrogates (REP).
std::vector<PowerCost> power_copies(const CostFunction& f);

} // namespace gnd
