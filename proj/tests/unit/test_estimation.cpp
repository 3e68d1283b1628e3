#include <doctest.h>

#include <cmath>
#include <numeric>

#include "binrep/binomial_coeffs.hpp"
#include "binrep/estimation.hpp"
#include "binrep/simulation.hpp"

using namespace binrep;

TEST_CASE("score-based estimates") {
    ReplicateDataset data({{"a", 2, 0, {}}, {"b", 2, 2, {}}});
    ScoreVector separated;
    separated.method = Method::average;
    separated.values = {0.0, 1.0};
    const auto est = estimate(data, separated);
    CHECK(est.theta_hat == doctest::Approx(0.5));
    CHECK(est.p_hat == doctest::Approx(0.0));
    CHECK(est.q_hat == doctest::Approx(0.0));
    CHECK_FALSE(est.credible.has_value());

    ScoreVector all_ones;
    all_ones.method = Method::median;
    all_ones.values = {1.0, 1.0};
    CHECK_THROWS_WITH_AS(estimate(data, all_ones), doctest::Contains("false-positivity"),
                         validation_error);

    ScoreVector all_zeros;
    all_zeros.method = Method::median;
    all_zeros.values = {0.0, 0.0};
    CHECK_THROWS_WITH_AS(estimate(data, all_zeros), doctest::Contains("false-negativity"),
                         validation_error);
}

TEST_CASE("estimate with true latent scores reproduces the latent oracle") {
    SimConfig cfg;
    cfg.theta_T = 0.5;
    cfg.p = 0.2;
    cfg.q = 0.3;
    cfg.n_individuals = 80;
    cfg.seed = 61;
    const auto data = simulate_dataset(cfg);

    ScoreVector truth_scores;
    truth_scores.method = Method::average;
    for (const auto& rec : data.individuals()) {
        truth_scores.values.push_back(static_cast<double>(*rec.status));
    }
    const auto via_scores = estimate(data, truth_scores);
    const auto oracle = latent_oracle_estimates(data);
    CHECK(via_scores.theta_hat == doctest::Approx(oracle.theta_T).epsilon(1e-14));
    CHECK(via_scores.p_hat == doctest::Approx(oracle.p).epsilon(1e-14));
    CHECK(via_scores.q_hat == doctest::Approx(oracle.q).epsilon(1e-14));
}

TEST_CASE("theta estimate is invariant to row permutation") {
    SimConfig cfg;
    cfg.seed = 17;
    cfg.n_individuals = 40;
    const auto data = simulate_dataset(cfg);
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    std::reverse(order.begin(), order.end());
    const auto shuffled = data.permuted(order);

    const auto a = estimate(data, score_average(data));
    const auto b = estimate(shuffled, score_average(shuffled));
    CHECK(a.theta_hat == doctest::Approx(b.theta_hat).epsilon(1e-14));
    CHECK(a.p_hat == doctest::Approx(b.p_hat).epsilon(1e-14));
}

TEST_CASE("mean of average estimate matches the analytic expectation") {
    ModelParams params{0.4, 0.1, 0.05};
    SimConfig cfg;
    cfg.theta_T = params.theta_T;
    cfg.p = params.p;
    cfg.q = params.q;
    cfg.n_individuals = 50;
    cfg.n_min = 2;
    cfg.n_max = 6;

    const int reps = 800;
    std::vector<double> estimates;
    for (int r = 0; r < reps; ++r) {
        cfg.seed = 9000 + r;
        const auto data = simulate_dataset(cfg);
        estimates.push_back(estimate(data, score_average(data)).theta_hat);
    }
    double mean = 0.0;
    for (double e : estimates) mean += e;
    mean /= reps;
    double var = 0.0;
    for (double e : estimates) var += (e - mean) * (e - mean);
    var /= reps - 1;

    const auto analytic =
        prevalence_moments(params, simulate_dataset(cfg), ScoreMethodAM::average);
    const double se = std::sqrt(var / reps);
    CHECK(std::fabs(mean - analytic.expected_value) < 4.0 * se);
}

TEST_CASE("estimates serialize to JSON") {
    EstimateSet est;
    est.method = Method::map;
    est.theta_hat = 0.4;
    est.p_hat = 0.1;
    est.q_hat = 0.05;
    const auto text = to_json_string(est);
    CHECK(text.find("\"method\": \"map\"") != std::string::npos);
    CHECK(text.find("theta_hat") != std::string::npos);
    CHECK(text.find("\"ci\"") == std::string::npos);
}
