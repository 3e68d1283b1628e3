#include <doctest.h>

#include <cmath>
#include <sstream>

#include "binrep/prediction.hpp"
#include "quadrature_oracle.hpp"

using namespace binrep;
using namespace binrep::testing;

TEST_CASE("plugin prediction") {
    CHECK(predict_plugin(4, 2, {0.5, 0.15, 0.15}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(predict_plugin(3, 3, {0.5, 0.1, 0.1}) ==
          doctest::Approx(0.99863013698630132).epsilon(1e-12));
    CHECK_THROWS_AS(predict_plugin(3, 4, {0.5, 0.1, 0.1}), validation_error);
    CHECK_THROWS_AS(predict_plugin(3, 1, {0.5, 0.7, 0.1}), validation_error);

    double prev = predict_plugin(4, 0, {0.4, 0.1, 0.05});
    for (int s = 1; s <= 4; ++s) {
        const double cur = predict_plugin(4, s, {0.4, 0.1, 0.05});
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("bayes prediction from a degenerate sample equals plugin") {
    PosteriorSample sample(ChainMeta{0, 1, 3, 0}, 1);
    for (int d = 0; d < 3; ++d) sample.append(0.37, 0.12, 0.08, {1});
    CHECK(predict_bayes(5, 4, sample) ==
          doctest::Approx(predict_plugin(5, 4, {0.37, 0.12, 0.08})).epsilon(1e-14));

    PosteriorSample empty(ChainMeta{0, 1, 3, 3}, 1);
    CHECK_THROWS_AS(predict_bayes(2, 1, empty), validation_error);
}

TEST_CASE("bayes prediction agrees with the quadrature oracle") {
    ReplicateDataset data({{"a", 3, 0, {}}, {"b", 3, 3, {}}});
    const auto oracle = quadrature_oracle(data, default_prior(), 160, {{3, 2}, {4, 1}});

    GibbsOptions opts;
    opts.chains = 4;
    opts.iters = 3000;
    opts.burnin = 500;
    opts.seed = 414;
    const auto sample = gibbs_run(data, default_prior(), opts);
    CHECK(std::fabs(predict_bayes(3, 2, sample) - oracle.predictive[0]) < 0.01);
    CHECK(std::fabs(predict_bayes(4, 1, sample) - oracle.predictive[1]) < 0.01);

    // Posterior-averaged prediction sits closer to 1/2 than the plug-in at
    // the posterior mean for at least one cell of this fixture.
    const auto summary = summarize(sample);
    ModelParams at_mean{summary.mean_theta, summary.mean_p, summary.mean_q};
    bool any_softer = false;
    for (int s = 0; s <= 4; ++s) {
        const double bayes = predict_bayes(4, s, sample);
        const double plug = predict_plugin(4, s, at_mean);
        if (std::fabs(bayes - 0.5) < std::fabs(plug - 0.5) - 1e-6) any_softer = true;
    }
    CHECK(any_softer);
}

TEST_CASE("prediction table enumerates and stays monotone") {
    const ThresholdPair thr{0.45, 0.55};
    const auto table = prediction_table(6, ModelParams{0.4, 0.1, 0.05}, thr);
    CHECK(table.rows.size() == 27);  // sum of n+1 for n = 1..6

    std::size_t idx = 0;
    for (int n = 1; n <= 6; ++n) {
        double prev_score = -1.0;
        Decision prev_decision = Decision::zero;
        for (int s = 0; s <= n; ++s, ++idx) {
            const auto& row = table.rows[idx];
            CHECK(row.n == n);
            CHECK(row.s == s);
            CHECK(row.score > prev_score);
            CHECK(static_cast<int>(row.decision) >= static_cast<int>(prev_decision));
            prev_score = row.score;
            prev_decision = row.decision;
        }
    }

    // Half-count cells with symmetric parameters sit exactly on 1/2.
    const auto sym = prediction_table(4, ModelParams{0.5, 0.2, 0.2}, thr);
    for (const auto& row : sym.rows) {
        if (2 * row.s == row.n) CHECK(row.decision == Decision::indecisive);
    }

    // Tiny error rates reproduce the median rule.
    const auto sharp = prediction_table(5, ModelParams{0.5, 1e-9, 1e-9}, thr);
    for (const auto& row : sharp.rows) {
        if (2 * row.s > row.n) CHECK(row.decision == Decision::one);
        if (2 * row.s < row.n) CHECK(row.decision == Decision::zero);
        if (2 * row.s == row.n) CHECK(row.decision == Decision::indecisive);
    }

    const auto csv = to_csv(table);
    CHECK(csv.rfind("n,s,score,decision\n", 0) == 0);
    std::istringstream lines(csv);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) ++count;
    CHECK(count == 28);  // header + 27 rows

    CHECK_THROWS_AS(prediction_table(0, ModelParams{0.4, 0.1, 0.05}, thr), validation_error);
}
