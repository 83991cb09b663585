#include "doctest.h"

#include "common.hpp"
#include "info.hpp"

#include <cmath>
#include <string>

using namespace logwave;

namespace {

DiscreteDistribution coin() {
    return make_distribution(1, {{{0, 0, 0}}, {{1, 0, 0}}}, {0.5, 0.5});
}

DiscreteDistribution correlated_pair() {
    // p(0,0)=p(1,1)=3/8, p(0,1)=p(1,0)=1/8
    return make_distribution(
        2, {{{0, 0, 0}}, {{0, 1, 0}}, {{1, 0, 0}}, {{1, 1, 0}}},
        {0.375, 0.125, 0.125, 0.375});
}

DiscreteDistribution independent_pair() {
    // p(x)*p(y) with p_x = (0.3, 0.7), p_y = (0.25, 0.75)
    return make_distribution(
        2, {{{0, 0, 0}}, {{0, 1, 0}}, {{1, 0, 0}}, {{1, 1, 0}}},
        {0.075, 0.225, 0.175, 0.525});
}

DiscreteDistribution xor_triple() {
    return make_distribution(
        3, {{{0, 0, 0}}, {{0, 1, 1}}, {{1, 0, 1}}, {{1, 1, 0}}},
        {0.25, 0.25, 0.25, 0.25});
}

DiscreteDistribution triplicated_bit() {
    return make_distribution(3, {{{0, 0, 0}}, {{1, 1, 1}}}, {0.5, 0.5});
}

} // namespace

TEST_CASE("make_distribution validation") {
    CHECK_THROWS_AS(make_distribution(0, {{{0, 0, 0}}}, {1.0}), ParamError);
    CHECK_THROWS_AS(make_distribution(4, {{{0, 0, 0}}}, {1.0}), ParamError);
    CHECK_THROWS_AS(make_distribution(1, {}, {}), InputError);
    CHECK_THROWS_AS(make_distribution(1, {{{0, 0, 0}}}, {1.0, 0.0}), InputError);
    CHECK_THROWS_AS(
        make_distribution(1, {{{0, 0, 0}}, {{1, 0, 0}}}, {0.5, 0.4}),
        InputError); // sums to 0.9
    CHECK_THROWS_AS(
        make_distribution(1, {{{0, 0, 0}}, {{1, 0, 0}}}, {1.5, -0.5}),
        InputError); // negative mass
    try {
        make_distribution(1, {{{0, 0, 0}}, {{0, 0, 0}}}, {0.5, 0.5});
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }
}

TEST_CASE("make_distribution zeroes unused coordinates") {
    auto d = make_distribution(1, {{{0, 7, 9}}, {{1, 7, 9}}}, {0.5, 0.5});
    CHECK(d.outcomes[0][1] == 0);
    CHECK(d.outcomes[0][2] == 0);
    CHECK(d.outcomes[1][0] == 1);
}

TEST_CASE("shannon_entropy on hand cases") {
    auto half = make_distribution(
        1, {{{0, 0, 0}}, {{1, 0, 0}}, {{2, 0, 0}}}, {0.5, 0.25, 0.25});
    CHECK(shannon_entropy(half, {0}) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(shannon_entropy(coin(), {0}) == doctest::Approx(1.0));
    auto sure = make_distribution(1, {{{3, 0, 0}}}, {1.0});
    CHECK(shannon_entropy(sure, {0}) == doctest::Approx(0.0));
    auto uniform4 = make_distribution(
        1, {{{0, 0, 0}}, {{1, 0, 0}}, {{2, 0, 0}}, {{3, 0, 0}}},
        {0.25, 0.25, 0.25, 0.25});
    CHECK(shannon_entropy(uniform4, {0}) == doctest::Approx(2.0));
}

TEST_CASE("shannon_entropy marginals and subset validation") {
    auto d = correlated_pair();
    CHECK(shannon_entropy(d, {0}) == doctest::Approx(1.0));
    CHECK(shannon_entropy(d, {1}) == doctest::Approx(1.0));
    const double h12 = shannon_entropy(d, {0, 1});
    CHECK(h12 == doctest::Approx(1.8112781245).epsilon(1e-9));
    CHECK_THROWS_AS(shannon_entropy(d, {}), ParamError);
    CHECK_THROWS_AS(shannon_entropy(d, {0, 0}), ParamError);
    CHECK_THROWS_AS(shannon_entropy(d, {2}), ParamError);
}

TEST_CASE("mutual information of a correlated pair") {
    CHECK(mutual_information_2(correlated_pair()) ==
          doctest::Approx(0.1887218755).epsilon(1e-8));
}

TEST_CASE("mutual information vanishes for independent variables") {
    CHECK(std::fabs(mutual_information_2(independent_pair())) < 1e-12);
}

TEST_CASE("mutual information of a fully correlated pair is one bit") {
    auto d = make_distribution(2, {{{0, 0, 0}}, {{1, 1, 0}}}, {0.5, 0.5});
    CHECK(mutual_information_2(d) == doctest::Approx(1.0));
}

TEST_CASE("mutual_information_2 requires arity 2") {
    CHECK_THROWS_AS(mutual_information_2(coin()), ParamError);
    CHECK_THROWS_AS(mutual_information_2(xor_triple()), ParamError);
}

TEST_CASE("configurational information of the XOR triple is -1 bit") {
    CHECK(configurational_information_3(xor_triple()) ==
          doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("configurational information of a triplicated bit is +1 bit") {
    CHECK(configurational_information_3(triplicated_bit()) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("configurational information vanishes for an independent triple") {
    std::vector<std::array<int, 3>> outs;
    std::vector<double> ps;
    const double px[2] = {0.3, 0.7}, py[2] = {0.6, 0.4}, pz[2] = {0.2, 0.8};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int z = 0; z < 2; ++z) {
                outs.push_back({x, y, z});
                ps.push_back(px[x] * py[y] * pz[z]);
            }
    auto d = make_distribution(3, outs, ps);
    CHECK(std::fabs(configurational_information_3(d)) < 1e-12);
    CHECK_THROWS_AS(configurational_information_3(coin()), ParamError);
}

TEST_CASE("mutual_redundancy flips sign by arity") {
    const double t12 = mutual_information_2(correlated_pair());
    CHECK(mutual_redundancy(correlated_pair()) == doctest::Approx(-t12));
    CHECK(mutual_redundancy(correlated_pair(), 2.0) ==
          doctest::Approx(-2.0 * t12));
    CHECK(mutual_redundancy(xor_triple()) == doctest::Approx(-1.0));
    CHECK(mutual_redundancy(triplicated_bit(), 0.5) == doctest::Approx(0.5));
    CHECK_THROWS_AS(mutual_redundancy(coin()), ParamError);
}

TEST_CASE("redundancy_fraction") {
    CHECK(redundancy_fraction(1.5, 2.0) == doctest::Approx(0.25));
    CHECK(redundancy_fraction(0.0, 2.0) == doctest::Approx(1.0));
    CHECK(redundancy_fraction(2.0, 2.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(redundancy_fraction(3.0, 2.0), ParamError);
    CHECK_THROWS_AS(redundancy_fraction(-0.1, 2.0), ParamError);
    CHECK_THROWS_AS(redundancy_fraction(0.5, 0.0), ParamError);
}

TEST_CASE("synergy_balance") {
    SynergyVectors v;
    v.P = {1.0, 2.0, 3.0};
    v.Q = {1.0, 2.0, 3.0};
    CHECK(synergy_balance(v) == doctest::Approx(0.0));
    v.P = {2.0, 0.0, 0.0};
    v.Q = {1.0, 0.0, 0.0};
    CHECK(synergy_balance(v) == doctest::Approx(3.0));
    v.P = {0.0, 0.0, 0.0};
    v.Q = {0.0, 2.0, 0.0};
    CHECK(synergy_balance(v) == doctest::Approx(-4.0));
}
