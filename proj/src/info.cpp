#include "info.hpp"

#include "common.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace logwave {
namespace {

double entropy_of(const std::map<std::array<int, 3>, double>& pmf) {
    double h = 0.0;
    for (const auto& [_, p] : pmf)
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

double marginal_entropy(const DiscreteDistribution& d,
                        const std::vector<std::size_t>& vars) {
    std::map<std::array<int, 3>, double> pmf;
    for (std::size_t r = 0; r < d.outcomes.size(); ++r) {
        std::array<int, 3> key{0, 0, 0};
        for (std::size_t k = 0; k < vars.size(); ++k)
            key[k] = d.outcomes[r][vars[k]];
        pmf[key] += d.probs[r];
    }
    return entropy_of(pmf);
}

} // namespace

DiscreteDistribution make_distribution(std::size_t arity,
                                       std::vector<std::array<int, 3>> outcomes,
                                       std::vector<double> probs) {
    if (arity < 1 || arity > 3)
        throw ParamError("distribution arity must be 1, 2 or 3");
    if (outcomes.empty() || outcomes.size() != probs.size())
        throw InputError("outcomes and probabilities must have equal nonzero length");
    double sum = 0.0;
    for (std::size_t r = 0; r < probs.size(); ++r) {
        if (!(probs[r] >= 0.0) || !std::isfinite(probs[r]))
            throw InputError("probability at row " + std::to_string(r + 1) +
                             " is negative or not finite");
        sum += probs[r];
        for (std::size_t k = arity; k < 3; ++k) outcomes[r][k] = 0;
    }
    if (std::fabs(sum - 1.0) > 1e-9)
        throw InputError("probabilities sum to " + std::to_string(sum) +
                         ", not 1 within 1e-9");
    for (std::size_t r = 0; r < outcomes.size(); ++r)
        for (std::size_t s = r + 1; s < outcomes.size(); ++s)
            if (outcomes[r] == outcomes[s])
                throw InputError("duplicate outcome tuple at row " +
                                 std::to_string(s + 1));
    DiscreteDistribution d;
    d.arity = arity;
    d.outcomes = std::move(outcomes);
    d.probs = std::move(probs);
    return d;
}

double shannon_entropy(const DiscreteDistribution& d,
                       const std::vector<std::size_t>& marginal) {
    if (marginal.empty()) throw ParamError("marginal subset must be nonempty");
    std::vector<std::size_t> vars = marginal;
    std::sort(vars.begin(), vars.end());
    if (std::adjacent_find(vars.begin(), vars.end()) != vars.end())
        throw ParamError("marginal subset has a repeated variable");
    if (vars.back() >= d.arity)
        throw ParamError("marginal subset names a variable beyond the arity");
    return marginal_entropy(d, vars);
}

double mutual_information_2(const DiscreteDistribution& d) {
    if (d.arity != 2)
        throw ParamError("mutual information needs a 2-variable distribution");
    return marginal_entropy(d, {0}) + marginal_entropy(d, {1}) -
           marginal_entropy(d, {0, 1});
}

double configurational_information_3(const DiscreteDistribution& d) {
    if (d.arity != 3)
        throw ParamError(
            "configurational information needs a 3-variable distribution");
    return marginal_entropy(d, {0}) + marginal_entropy(d, {1}) +
           marginal_entropy(d, {2}) - marginal_entropy(d, {0, 1}) -
           marginal_entropy(d, {0, 2}) - marginal_entropy(d, {1, 2}) +
           marginal_entropy(d, {0, 1, 2});
}

double mutual_redundancy(const DiscreteDistribution& d, double alpha_scale) {
    if (d.arity == 2) return -alpha_scale * mutual_information_2(d);
    if (d.arity == 3) return alpha_scale * configurational_information_3(d);
    throw ParamError("mutual redundancy needs 2 or 3 variables");
}

double redundancy_fraction(double h, double h_max) {
    if (!(h_max > 0.0)) throw ParamError("maximum entropy must be positive");
    if (!(h >= 0.0) || h > h_max)
        throw ParamError("entropy must lie in [0, h_max]");
    return (h_max - h) / h_max;
}

double synergy_balance(const SynergyVectors& v) {
    double p2 = 0.0, q2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        p2 += v.P[i] * v.P[i];
        q2 += v.Q[i] * v.Q[i];
    }
    return p2 - q2;
}

} // namespace logwave
