#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace logwave {

// Probability mass function over tuples of 1 to 3 discrete variables.
// Unused trailing coordinates are zero. Validated on construction via
// make_distribution; direct aggregate initialization skips the checks.
struct DiscreteDistribution {
    std::size_t arity = 1;
    std::vector<std::array<int, 3>> outcomes;
    std::vector<double> probs;
};

// Validates: arity in 1..3, outcomes/probs same nonzero length, distinct
// outcome tuples, probabilities >= 0 summing to 1 within 1e-9.
DiscreteDistribution make_distribution(std::size_t arity,
                                       std::vector<std::array<int, 3>> outcomes,
                                       std::vector<double> probs);

// Entropy (bits) of the marginal over the listed variable positions;
// 0*log 0 := 0. Throws on an empty, repeated, or out-of-range subset.
double shannon_entropy(const DiscreteDistribution& d,
                       const std::vector<std::size_t>& marginal);

// H1 + H2 - H12, bits. Requires arity 2. Nonnegative up to roundoff.
double mutual_information_2(const DiscreteDistribution& d);

// H1+H2+H3 - H12-H13-H23 + H123, bits. Requires arity 3. Either sign.
double configurational_information_3(const DiscreteDistribution& d);

// Two variables: -alpha_scale * T12 (<= 0). Three: +alpha_scale * T123.
double mutual_redundancy(const DiscreteDistribution& d,
                         double alpha_scale = 1.0);

// (h_max - h)/h_max for 0 <= h <= h_max, h_max > 0.
double redundancy_fraction(double h, double h_max);

struct SynergyVectors {
    std::array<double, 3> P{0.0, 0.0, 0.0};
    std::array<double, 3> Q{0.0, 0.0, 0.0};
};

// |P|^2 - |Q|^2; the sign is the reported balance indicator.
double synergy_balance(const SynergyVectors& v);

} // namespace logwave
