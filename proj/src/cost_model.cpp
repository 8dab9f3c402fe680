#include "gnd/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gnd/errors.hpp"

namespace gnd {

double eval_dos(const DoSCost& f, double x) {
    if (x == 0.0) return 0.0;
    return f.sigma + f.xi * std::pow(x, f.alpha);
}

double eval_power(const PowerCost& g, double x) {
    return g.c * std::pow(x, g.alpha);
}

double eval_rep(const RepCost& r, double x) {
    if (x == 0.0) return 0.0;
    double v = r.sigma;
    for (const auto& t : r.terms) v += t.xi * std::pow(x, t.alpha);
    return v;
}

double eval_cost(const CostFunction& f, double x) {
    return std::visit(
        [x](const auto& g) -> double {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, DoSCost>) {
                return eval_dos(g, x);
            } else if constexpr (std::is_same_v<T, PowerCost>) {
                return eval_power(g, x);
            } else {
                return eval_rep(g, x);
            }
        },
        f);
}

double q_value(const DoSCost& f) {
    if (f.sigma == 0.0) return 0.0;
    return std::pow(f.sigma / f.xi, 1.0 / f.alpha);
}

double convex_surrogate(const DoSCost& f, double x) {
    const double q = q_value(f);
    return f.xi * std::pow(q, f.alpha - 1.0) * x + f.xi * std::pow(x, f.alpha);
}

void validate_cost(const CostFunction& f) {
    auto finite = [](double v) { return std::isfinite(v); };
    if (const auto* d = std::get_if<DoSCost>(&f)) {
        if (!(d->sigma >= 0.0) || !finite(d->sigma))
            throw ValidationError("dos cost: sigma must be finite and >= 0");
        if (!(d->xi > 0.0) || !finite(d->xi))
            throw ValidationError("dos cost: xi must be finite and > 0");
        if (!(d->alpha >= 1.0) || !finite(d->alpha))
            throw ValidationError("dos cost: alpha must be finite and >= 1");
        if (!std::isfinite(q_value(*d))) throw ValidationError("dos cost: q is not finite");
    } else if (const auto* p = std::get_if<PowerCost>(&f)) {
        if (!(p->c >= 0.0) || !finite(p->c))
            throw ValidationError("power cost: c must be finite and >= 0");
        if (!(p->alpha >= 1.0) || !finite(p->alpha))
            throw ValidationError("power cost: alpha must be finite and >= 1");
    } else {
        const auto& r = std::get<RepCost>(f);
        if (!(r.sigma >= 0.0) || !finite(r.sigma))
            throw ValidationError("rep cost: sigma must be finite and >= 0");
        if (r.terms.empty()) throw ValidationError("rep cost: needs at least one term");
        for (const auto& t : r.terms) {
            if (!(t.xi > 0.0) || !finite(t.xi))
                throw ValidationError("rep cost: every xi must be finite and > 0");
            if (!(t.alpha >= 1.0) || !finite(t.alpha))
                throw ValidationError("rep cost: every alpha must be finite and >= 1");
        }
    }
}

ReductionMap reduce_dos_to_power(const std::string& origin, const DoSCost& f) {
    const double q = q_value(f);
    ReductionMap map;
    map.origin = origin;
    map.copies.push_back({origin + ":1",
                          PowerCost{f.xi * std::pow(q, f.alpha - 1.0), 1.0},
                          CopyRole::LinearCopy});
    map.copies.push_back({origin + ":a", PowerCost{f.xi, f.alpha}, CopyRole::PowerCopy});
    return map;
}

ReductionMap reduce_rep_to_dos(const std::string& origin, const RepCost& r) {
    if (r.terms.empty()) throw ValidationError("rep cost: needs at least one term");
    // Lowest index attaining the smallest (sigma/xi_j)^(1/alpha_j) keeps sigma.
    std::size_t keeper = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < r.terms.size(); ++j) {
        const double ratio = r.sigma == 0.0
                                 ? 0.0
                                 : std::pow(r.sigma / r.terms[j].xi, 1.0 / r.terms[j].alpha);
        if (ratio < best) {
            best = ratio;
            keeper = j;
        }
    }
    ReductionMap map;
    map.origin = origin;
    for (std::size_t j = 0; j < r.terms.size(); ++j) {
        DoSCost copy{j == keeper ? r.sigma : 0.0, r.terms[j].xi, r.terms[j].alpha};
        map.copies.push_back({origin + ":" + std::to_string(j + 1), copy, CopyRole::RepCopy});
    }
    return map;
}

bool verify_sandwich(const DoSCost& f, std::span<const double> xs) {
    const double q = q_value(f);
    const double linear_coeff = f.xi * std::pow(q, f.alpha - 1.0);
    for (double x : xs) {
        if (x < 0.0 || (x > 0.0 && x < 1.0))
            throw ValidationError("sandwich only holds on {0} union [1, inf)");
        const double fx = eval_dos(f, x);
        const double hx = convex_surrogate(f, x);
        const double upper = std::max(q, 1.0) * linear_coeff * x + f.xi * std::pow(x, f.alpha);
        if (0.5 * hx > fx) return false;
        if (fx > upper) return false;
    }
    return true;
}

std::vector<PowerCost> power_copies(const CostFunction& f) {
    std::vector<PowerCost> out;
    if (const auto* p = std::get_if<PowerCost>(&f)) {
        out.push_back(*p);
    } else if (const auto* d = std::get_if<DoSCost>(&f)) {
        for (const auto& copy : reduce_dos_to_power("", *d).copies)
            out.push_back(std::get<PowerCost>(copy.cost));
    } else {
        const auto& r = std::get<RepCost>(f);
        for (const auto& dos_copy : reduce_rep_to_dos("", r).copies)
            for (const auto& copy :
                 reduce_dos_to_power("", std::get<DoSCost>(dos_copy.cost)).copies)
                out.push_back(std::get<PowerCost>(copy.cost));
    }
    return out;
}

} // namespace gnd
