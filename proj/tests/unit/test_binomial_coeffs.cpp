#include <doctest.h>

#include <cmath>

#include "binrep/binomial_coeffs.hpp"
#include "binrep/special_functions.hpp"

using namespace binrep;

TEST_CASE("delta coefficient basics") {
    CHECK(delta_gamma(1, 0.3).delta == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(delta_gamma(2, 0.3).delta == doctest::Approx(delta_gamma(1, 0.3).delta).epsilon(1e-12));
    CHECK(delta_gamma(3, 0.1).delta == doctest::Approx(0.028).epsilon(1e-12));
    CHECK(delta_gamma(3, 0.1).v == 0.0);
    CHECK(delta_gamma(4, 0.3).delta == doctest::Approx(0.216).epsilon(1e-12));
    CHECK_THROWS_AS(delta_gamma(3, 0.0), validation_error);
    CHECK_THROWS_AS(delta_gamma(3, 1.0), validation_error);
    CHECK_THROWS_AS(delta_gamma(0, 0.3), validation_error);
}

TEST_CASE("delta symmetry, monotonicity and tail bound") {
    for (int k = 1; k <= 25; ++k) {
        for (int ai = 1; ai <= 19; ++ai) {
            const double a = 0.05 * ai;
            const double lhs = 1.0 - delta_gamma(k, a).delta;
            const double rhs = delta_gamma(k, 1.0 - a).delta;
            CHECK(std::fabs(lhs - rhs) < 1e-12);
        }
    }
    for (int ai = 1; ai <= 9; ++ai) {
        const double a = 0.05 * ai;
        double prev = delta_gamma(1, a).delta;
        for (int k = 2; k <= 25; ++k) {
            const double cur = delta_gamma(k, a).delta;
            CHECK(cur <= prev + 1e-15);
            prev = cur;
            // Hoeffding tail bound
            CHECK(cur <= std::exp(-2.0 * k * (0.5 - a) * (0.5 - a)) + 1e-15);
        }
    }
    CHECK(delta_gamma(101, 0.1).delta < 1e-15);
}

TEST_CASE("gamma equals the enumerated variance of the median score") {
    for (int k = 1; k <= 12; ++k) {
        for (double a : {0.07, 0.2, 0.45, 0.6, 0.93}) {
            double mean = 0.0, mean_sq = 0.0;
            for (int s = 0; s <= k; ++s) {
                const double pmf = math::binom_pmf(k, s, a);
                const double med = 2 * s > k ? 1.0 : (2 * s == k ? 0.5 : 0.0);
                mean += med * pmf;
                mean_sq += med * med * pmf;
            }
            const auto dg = delta_gamma(k, a);
            CHECK(dg.delta == doctest::Approx(mean).epsilon(1e-12));
            CHECK(dg.gamma == doctest::Approx(mean_sq - mean * mean).epsilon(1e-10));
            CHECK(dg.gamma >= 0.0);
        }
    }
}

TEST_CASE("dataset coefficients") {
    DatasetCoefficients coeffs(std::vector<int>{2, 3, 6});
    CHECK(coeffs.n_tilde() == doctest::Approx(3.0));  // harmonic mean of 2,3,6
    CHECK(coeffs.n_tilde() >= coeffs.min_n());
    CHECK(coeffs.n_tilde() <= coeffs.max_n());
    const double direct = (delta_gamma(2, 0.1).delta + delta_gamma(3, 0.1).delta +
                           delta_gamma(6, 0.1).delta) /
                          3.0;
    CHECK(coeffs.delta_bar(0.1) == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("score moments closed forms") {
    ModelParams params{0.4, 0.1, 0.05};

    const auto avg = score_moments(params, 5, ScoreMethodAM::average);
    CHECK(avg.mean == doctest::Approx(0.44).epsilon(1e-12));
    CHECK(avg.cond_mean_given_t0 == doctest::Approx(0.1));
    CHECK(avg.cond_mean_given_t1 == doctest::Approx(0.95));

    // Median and average coincide at n = 1.
    const auto med1 = score_moments(params, 1, ScoreMethodAM::median);
    const auto avg1 = score_moments(params, 1, ScoreMethodAM::average);
    CHECK(med1.mean == doctest::Approx(avg1.mean).epsilon(1e-12));
    CHECK(med1.variance == doctest::Approx(avg1.variance).epsilon(1e-12));

    const auto med3 = score_moments(params, 3, ScoreMethodAM::median);
    CHECK(med3.mean == doctest::Approx(0.4139).epsilon(1e-12));
}

TEST_CASE("prevalence moments closed forms") {
    ModelParams params{0.4, 0.1, 0.05};

    ReplicateDataset mixed({{"a", 2, 0, {}}, {"b", 5, 0, {}}, {"c", 3, 0, {}}});
    const auto avg = prevalence_moments(params, mixed, ScoreMethodAM::average);
    CHECK(avg.bias == doctest::Approx(0.04).epsilon(1e-12));  // p - theta (p+q)
    // Replicate counts do not move the average-method bias.
    ReplicateDataset other({{"a", 1, 0, {}}, {"b", 1, 0, {}}});
    CHECK(prevalence_moments(params, other, ScoreMethodAM::average).bias ==
          doctest::Approx(avg.bias).epsilon(1e-12));

    // All n_i = 1: the median bias equals the average bias.
    const auto med1 = prevalence_moments(params, other, ScoreMethodAM::median);
    CHECK(med1.bias == doctest::Approx(0.04).epsilon(1e-10));

    ReplicateDataset n3({{"a", 3, 0, {}}, {"b", 3, 0, {}}});
    const auto med3 = prevalence_moments(params, n3, ScoreMethodAM::median);
    CHECK(med3.expected_value == doctest::Approx(0.4139).epsilon(1e-12));
    CHECK(med3.bias == doctest::Approx(0.0139).epsilon(1e-12));
}

TEST_CASE("bias dominance interval") {
    // All n_i <= 2: the two biases coincide for every theta.
    const auto flat = bias_dominance_interval(0.1, 0.05, {1, 1, 2});
    CHECK(flat.biases_equal_everywhere);

    // p = q: the interval collapses to theta = 1/2.
    const auto sym = bias_dominance_interval(0.15, 0.15, {5, 5, 5});
    CHECK_FALSE(sym.biases_equal_everywhere);
    CHECK(sym.lo == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(sym.hi == doctest::Approx(0.5).epsilon(1e-9));

    const auto j5 = bias_dominance_interval(0.1, 0.05, std::vector<int>(10, 5));
    const auto j3 = bias_dominance_interval(0.1, 0.05, std::vector<int>(10, 3));
    const double center = 0.1 / 0.15;
    CHECK(j5.lo <= center);
    CHECK(j5.hi >= center);
    CHECK(j5.length() < j3.length());

    // Edges solve |bias_M| = |bias_A| to the refinement tolerance.
    DatasetCoefficients coeffs(std::vector<int>(10, 5));
    const double dp = coeffs.delta_bar(0.1), dq = coeffs.delta_bar(0.05);
    const auto gap = [&](double th) {
        return std::fabs(dp - th * (dp + dq)) - std::fabs(0.1 - th * 0.15);
    };
    CHECK(std::fabs(gap(j5.lo)) < 1e-8);
    CHECK(std::fabs(gap(j5.hi)) < 1e-8);
}
