#include <doctest.h>

#include <cmath>

#include "binrep/decision.hpp"
#include "binrep/rng.hpp"
#include "binrep/simulation.hpp"

using namespace binrep;

TEST_CASE("optimal thresholds from the loss table") {
    // Symmetric loss l_a with a = 0.45.
    const auto sym = optimal_thresholds(LossSpec::symmetric(0.45));
    REQUIRE(sym.has_value());
    CHECK(sym->v_L == doctest::Approx(0.45).epsilon(1e-12));
    CHECK(sym->v_U == doctest::Approx(0.55).epsilon(1e-12));

    // Indecision too expensive.
    CHECK_FALSE(optimal_thresholds(LossSpec::symmetric(0.6)).has_value());

    // Asymmetric example.
    const auto asym = optimal_thresholds(LossSpec{0.2, 2.0, 1.0, 0.2});
    REQUIRE(asym.has_value());
    CHECK(asym->v_L == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(asym->v_U == doctest::Approx(0.9).epsilon(1e-12));

    CHECK_THROWS_AS(optimal_thresholds(LossSpec{0.0, 1.0, 1.0, 1.0}), validation_error);
}

TEST_CASE("thresholded decisions match the risk argmin") {
    RngStream rng(17);
    int tested = 0;
    while (tested < 2000) {
        LossSpec loss{std::exp(rng.uniform(-3.0, 1.5)), std::exp(rng.uniform(-3.0, 1.5)),
                      std::exp(rng.uniform(-3.0, 1.5)), std::exp(rng.uniform(-3.0, 1.5))};
        const auto thr = optimal_thresholds(loss);
        if (!thr) continue;
        ++tested;
        for (double theta = 0.01; theta < 1.0; theta += 0.01) {
            const Decision via_phi = apply_thresholds(theta, Rational{}, *thr);
            CHECK(via_phi == best_decision(loss, theta));
        }
    }
}

TEST_CASE("exact rational comparison with doubles") {
    CHECK(compare_ratio(1, 3, 1.0 / 3.0) > 0);  // double(1/3) < 1/3
    CHECK(compare_ratio(1, 4, 0.25) == 0);
    CHECK(compare_ratio(2, 4, 0.5) == 0);
    CHECK(compare_ratio(1, 2, 0.4999999999999999) > 0);
    CHECK(compare_ratio(2, 3, 2.0 / 3.0) > 0);  // double(2/3) < 2/3
    CHECK(compare_ratio(0, 5, 1e-300) < 0);
    CHECK(compare_ratio(1, 5, 1e-300) > 0);
    CHECK(compare_ratio(5, 5, 1.0) == 0);
    CHECK(compare_ratio(4, 5, 1.0) < 0);

    // Agreement with long-double comparison away from representability traps.
    RngStream rng(23);
    for (int i = 0; i < 2000; ++i) {
        const int den = rng.uniform_int(1, 200);
        const int num = rng.uniform_int(0, den);
        const double x = rng.uniform();
        const int cmp = compare_ratio(num, den, x);
        const long double diff = static_cast<long double>(num) / den - static_cast<long double>(x);
        if (diff > 1e-12L) CHECK(cmp > 0);
        if (diff < -1e-12L) CHECK(cmp < 0);
    }
}

TEST_CASE("classifier boundary conventions") {
    ThresholdPair thr{0.45, 0.55};
    ReplicateDataset data({{"a", 4, 2, {}}, {"b", 6, 4, {}}, {"c", 5, 0, {}}, {"d", 3, 3, {}}});
    const auto cls = classify(score_average(data), thr);
    CHECK(cls.decisions[0] == Decision::indecisive);  // 0.5 inside [v_L, v_U]
    CHECK(cls.decisions[1] == Decision::one);         // 2/3 > 0.55
    CHECK(cls.decisions[2] == Decision::zero);
    CHECK(cls.decisions[3] == Decision::one);

    // Median decisions are the median scores themselves under H3.
    const auto med = score_median(data);
    const auto mcls = classify(med, thr);
    for (std::size_t i = 0; i < data.size(); ++i) {
        CHECK(decision_value(mcls.decisions[i]) == med.values[i]);
    }

    // Degenerate pair: only an exact 1/2 stays indecisive.
    ThresholdPair degenerate{0.5, 0.5};
    const auto dcls = classify(score_average(data), degenerate);
    CHECK(dcls.decisions[0] == Decision::indecisive);
    CHECK(dcls.decisions[1] == Decision::one);
    CHECK(dcls.decisions[2] == Decision::zero);

    const ThresholdPair inverted{0.7, 0.3};
    CHECK_THROWS_AS(inverted.validate(), validation_error);
}

TEST_CASE("average and median classifications coincide for near-1/2 thresholds") {
    SimConfig cfg;
    cfg.theta_T = 0.55;
    cfg.p = 0.18;
    cfg.q = 0.3;
    cfg.n_individuals = 60;
    cfg.n_min = 1;
    cfg.n_max = 6;
    cfg.seed = 404;
    const auto data = simulate_dataset(cfg);
    // n0 = 6 gives delta0 = 1/10; 0.45 and 0.55 sit inside the window.
    ThresholdPair thr{0.45, 0.55};
    const auto a = classify(score_average(data), thr);
    const auto m = classify(score_median(data), thr);
    for (std::size_t i = 0; i < data.size(); ++i) {
        CHECK(a.decisions[i] == m.decisions[i]);
    }
}

namespace {
// Builds one individual per (truth, decision) cell count, with a score that
// forces the desired decision at thresholds (0.45, 0.55).
struct SyntheticClassification {
    Classification cls;
    std::vector<int> truth;
};

SyntheticClassification from_counts(const std::array<std::array<int, 3>, 2>& counts) {
    SyntheticClassification out;
    out.cls.thresholds = {0.45, 0.55};
    for (int t = 0; t < 2; ++t) {
        for (int d = 0; d < 3; ++d) {
            for (int k = 0; k < counts[t][d]; ++k) {
                out.truth.push_back(t);
                out.cls.decisions.push_back(static_cast<Decision>(d));
            }
        }
    }
    return out;
}
}  // namespace

TEST_CASE("empirical risk and confusion table") {
    // Counts with 6 indecisions, 4 false positives, 5 false negatives.
    const auto synth = from_counts({{{16, 1, 4}, {5, 5, 19}}});
    const LossSpec loss = LossSpec::symmetric(0.45);
    CHECK(empirical_risk(synth.cls, synth.truth, loss, RiskMode::total) ==
          doctest::Approx(11.7).epsilon(1e-12));
    CHECK(empirical_risk(synth.cls, synth.truth, loss, RiskMode::mean) ==
          doctest::Approx(11.7 / 50.0).epsilon(1e-12));

    const auto table = confusion_table(synth.cls, synth.truth);
    CHECK(table.counts[0][0] == 16);
    CHECK(table.counts[0][1] == 1);
    CHECK(table.counts[0][2] == 4);
    CHECK(table.counts[1][0] == 5);
    CHECK(table.counts[1][1] == 5);
    CHECK(table.counts[1][2] == 19);

    const auto perfect = from_counts({{{21, 0, 0}, {0, 0, 29}}});
    CHECK(empirical_risk(perfect.cls, perfect.truth, loss, RiskMode::total) == 0.0);

    std::vector<int> short_truth(3, 0);
    CHECK_THROWS_AS(empirical_risk(synth.cls, short_truth, loss, RiskMode::total),
                    validation_error);
}

TEST_CASE("truth_vector reports missing ids") {
    ReplicateDataset data({{"a", 2, 1, 1}, {"b", 2, 1, {}}, {"c", 2, 1, {}}});
    CHECK_THROWS_WITH_AS(truth_vector(data), doctest::Contains("b, c"), validation_error);
}

TEST_CASE("sensitivity and specificity closed forms") {
    ModelParams params{0.4, 0.1, 0.05};

    const auto at_half = [&](ScoreMethodAM m) {
        return sensitivity_specificity(params, 4, ThresholdPair{0.5, 0.5}, m);
    };
    CHECK(at_half(ScoreMethodAM::average).sensitivity ==
          doctest::Approx(at_half(ScoreMethodAM::median).sensitivity).epsilon(1e-14));
    CHECK(at_half(ScoreMethodAM::average).specificity ==
          doctest::Approx(at_half(ScoreMethodAM::median).specificity).epsilon(1e-14));

    ThresholdPair thr{0.3, 0.7};
    const auto med = sensitivity_specificity(params, 5, thr, ScoreMethodAM::median);
    const auto avg = sensitivity_specificity(params, 5, thr, ScoreMethodAM::average);
    CHECK(med.sensitivity == doctest::Approx(0.998841875).epsilon(1e-12));
    CHECK(avg.sensitivity == doctest::Approx(0.9774075).epsilon(1e-12));
    CHECK(med.specificity == doctest::Approx(0.99144).epsilon(1e-12));
    CHECK(avg.specificity == doctest::Approx(0.91854).epsilon(1e-12));
    CHECK(med.sensitivity >= avg.sensitivity);
    CHECK(med.specificity >= avg.specificity);

    // Single replicate: both classifiers reduce to the replicate itself.
    const auto one = sensitivity_specificity(params, 1, thr, ScoreMethodAM::average);
    CHECK(one.sensitivity == doctest::Approx(0.95).epsilon(1e-12));
    const auto one_med = sensitivity_specificity(params, 1, thr, ScoreMethodAM::median);
    CHECK(one_med.sensitivity == doctest::Approx(0.95).epsilon(1e-12));
}

TEST_CASE("average risk jump locations") {
    ReplicateDataset data({{"a", 6, 1, {}}, {"b", 5, 3, {}}, {"c", 4, 2, {}}, {"d", 3, 0, {}},
                           {"e", 5, 4, {}}, {"f", 6, 3, {}}});
    const auto jumps = average_risk_breakpoints(data);
    // 1/6 from (6,1); 2/5 from (5,3) reflected; 1/5 from (5,4) reflected.
    REQUIRE(jumps.size() == 3);
    CHECK(jumps[0] == std::make_pair<std::int64_t, std::int64_t>(1, 5));
    CHECK(jumps[1] == std::make_pair<std::int64_t, std::int64_t>(1, 6));
    CHECK(jumps[2] == std::make_pair<std::int64_t, std::int64_t>(2, 5));
}

TEST_CASE("total risk curves: median affine, average jumps only at breakpoints") {
    SimConfig cfg;
    cfg.theta_T = 0.4;
    cfg.p = 0.1;
    cfg.q = 0.05;
    cfg.n_individuals = 150;
    cfg.seed = 31;
    const auto data = simulate_dataset(cfg);
    const auto truth = truth_vector(data);
    const auto avg = score_average(data);
    const auto med = score_median(data);

    // Direct-count route for the closed forms.
    int ties = 0, med_fp = 0, med_fn = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const int twice = 2 * data[i].s;
        if (twice == data[i].n) {
            ++ties;
        } else if (twice > data[i].n && truth[i] == 0) {
            ++med_fp;
        } else if (twice < data[i].n && truth[i] == 1) {
            ++med_fn;
        }
    }

    for (double a = 0.02; a < 0.49; a += 0.001) {
        const ThresholdPair thr{a, 1.0 - a};
        const LossSpec loss = LossSpec::symmetric(a);
        const double med_risk =
            empirical_risk(classify(med, thr), truth, loss, RiskMode::total);
        CHECK(med_risk == doctest::Approx(a * ties + med_fp + med_fn).epsilon(1e-12));

        // Between consecutive breakpoints the average risk is affine in a;
        // check slope consistency on a small interior step.
        const double eps = 1e-6;
        bool near_breakpoint = false;
        for (const auto& [num, den] : average_risk_breakpoints(data)) {
            const double b = static_cast<double>(num) / den;
            if (std::fabs(a - b) < 2e-3 || std::fabs(a + 1e-3 - b) < 2e-3) {
                near_breakpoint = true;
            }
        }
        if (!near_breakpoint) {
            const auto risk_at = [&](double aa) {
                return empirical_risk(classify(avg, ThresholdPair{aa, 1.0 - aa}), truth,
                                      LossSpec::symmetric(aa), RiskMode::total);
            };
            const double slope1 = (risk_at(a + eps) - risk_at(a)) / eps;
            const double slope2 = (risk_at(a + 1e-3 + eps) - risk_at(a + 1e-3)) / eps;
            CHECK(slope1 == doctest::Approx(slope2).epsilon(1e-6));
        }
    }
}
