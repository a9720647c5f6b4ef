#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "diffshape/metrics.hpp"
#include "diffshape/rng.hpp"

using namespace diffshape;

TEST_CASE("mutual information of a perfect channel equals the entropy") {
    std::vector<int> tx, rx;
    for (int rep = 0; rep < 4; ++rep)
        for (int s = 1; s <= 16; ++s) {
            tx.push_back(s);
            rx.push_back(s);
        }
    CHECK(mutual_information_bits(tx, rx, 16) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("mutual information of an independent pair is zero") {
    // Joint counts form an exact product measure: every (a,b) pair once.
    std::vector<int> tx, rx;
    for (int a = 1; a <= 4; ++a)
        for (int b = 1; b <= 4; ++b) {
            tx.push_back(a);
            rx.push_back(b);
        }
    CHECK(mutual_information_bits(tx, rx, 4) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("mutual information binary worked example") {
    // Joint (0.4, 0.1; 0.1, 0.4) as counts out of 10.
    std::vector<int> tx = {1, 1, 1, 1, 1, 2, 2, 2, 2, 2};
    std::vector<int> rx = {1, 1, 1, 1, 2, 1, 2, 2, 2, 2};
    double mi = mutual_information_bits(tx, rx, 2);
    CHECK(std::abs(mi - 0.278072) <= 1e-4);
    CHECK(mi == doctest::Approx(0.2780719051126377).epsilon(1e-9));
}

TEST_CASE("mutual information is symmetric and bounded by marginal entropies") {
    std::mt19937_64 eng(31);
    std::uniform_int_distribution<int> sym(1, 8);
    std::vector<int> tx(5000), rx(5000);
    for (int n = 0; n < 5000; ++n) {
        tx[n] = sym(eng);
        // Noisy copy: keep with probability 1/2, otherwise resample.
        rx[n] = (eng() & 1) ? tx[n] : sym(eng);
    }
    double ab = mutual_information_bits(tx, rx, 8);
    double ba = mutual_information_bits(rx, tx, 8);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
    CHECK(ab >= 0.0);
    CHECK(ab <= 3.0 + 1e-9);
}

TEST_CASE("mutual information estimate is stable across halves") {
    std::mt19937_64 eng(42);
    std::uniform_int_distribution<int> sym(1, 16);
    const int n = 200000;
    std::vector<int> tx(n), rx(n);
    for (int k = 0; k < n; ++k) {
        tx[k] = sym(eng);
        rx[k] = (eng() % 4 == 0) ? sym(eng) : tx[k];
    }
    std::vector<int> tx1(tx.begin(), tx.begin() + n / 2), tx2(tx.begin() + n / 2, tx.end());
    std::vector<int> rx1(rx.begin(), rx.begin() + n / 2), rx2(rx.begin() + n / 2, rx.end());
    double a = mutual_information_bits(tx1, rx1, 16);
    double b = mutual_information_bits(tx2, rx2, 16);
    CHECK(std::abs(a - b) <= 0.05);
}

TEST_CASE("mutual information input validation") {
    CHECK_THROWS_AS(mutual_information_bits({1, 2}, {1}, 4), std::invalid_argument);
    CHECK_THROWS_AS(mutual_information_bits({}, {}, 4), std::invalid_argument);
    CHECK_THROWS_AS(mutual_information_bits({0}, {1}, 4), std::out_of_range);
    CHECK_THROWS_AS(mutual_information_bits({1}, {5}, 4), std::out_of_range);
}

TEST_CASE("symbol error rate") {
    CHECK(symbol_error_rate({1, 2, 3, 4}, {1, 2, 3, 4}) == 0.0);
    CHECK(symbol_error_rate({1, 2, 3, 4}, {4, 3, 2, 1}) == 1.0);
    CHECK(symbol_error_rate({1, 2, 3, 4}, {1, 2, 3, 1}) == doctest::Approx(0.25));
    CHECK_THROWS_AS(symbol_error_rate({1, 2}, {1}), std::invalid_argument);
    CHECK_THROWS_AS(symbol_error_rate({}, {}), std::invalid_argument);
}

TEST_CASE("entropy of distributions") {
    ShapingDistribution uniform;
    uniform.probs.assign(16, 1.0 / 16.0);
    CHECK(entropy_bits(uniform) == doctest::Approx(4.0).epsilon(1e-12));

    ShapingDistribution point;
    point.probs.assign(16, 0.0);
    point.probs[3] = 1.0;
    CHECK(entropy_bits(point) == 0.0);

    ShapingDistribution half;
    half.probs = {0.5, 0.5, 0.0, 0.0};
    CHECK(entropy_bits(half) == doctest::Approx(1.0).epsilon(1e-12));

    ShapingDistribution bad;
    bad.probs = {0.5, 0.4};
    CHECK_THROWS_AS(entropy_bits(bad), std::invalid_argument);
    ShapingDistribution neg;
    neg.probs = {1.5, -0.5};
    CHECK_THROWS_AS(entropy_bits(neg), std::invalid_argument);
}

TEST_CASE("total variation distance") {
    ShapingDistribution uniform, point;
    uniform.probs.assign(16, 1.0 / 16.0);
    point.probs.assign(16, 0.0);
    point.probs[0] = 1.0;
    CHECK(total_variation(uniform, point) == doctest::Approx(0.9375).epsilon(1e-12));
    CHECK(total_variation(uniform, uniform) == 0.0);
    CHECK(total_variation(point, uniform) == doctest::Approx(0.9375).epsilon(1e-12));

    ShapingDistribution other;
    other.probs.assign(4, 0.25);
    CHECK_THROWS_AS(total_variation(uniform, other), std::invalid_argument);
}
