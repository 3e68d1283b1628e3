#pragma once

#include <string>
#include <vector>

#include "binrep/dataset.hpp"
#include "binrep/decision.hpp"
#include "binrep/mcmc.hpp"

namespace binrep {

// Predicted score of a new individual with (n_new, s_new) under plugged-in
// parameter estimates.
double predict_plugin(int n_new, int s_new, const ModelParams& params);

// Posterior predictive score: Monte-Carlo average of the likelihood score
// over posterior draws.
double predict_bayes(int n_new, int s_new, const PosteriorSample& sample);

struct PredictionRow {
    int n = 0;
    int s = 0;
    double score = 0.0;
    Decision decision = Decision::indecisive;
};

struct PredictionTable {
    std::vector<PredictionRow> rows;
};

// Enumerates 1 <= n <= n_max, 0 <= s <= n.
PredictionTable prediction_table(int n_max, const ModelParams& params,
                                 const ThresholdPair& thresholds);
PredictionTable prediction_table(int n_max, const PosteriorSample& sample,
                                 const ThresholdPair& thresholds);

// CSV with header n,s,score,decision.
std::string to_csv(const PredictionTable& table);

}  // namespace binrep
