#pragma once

#include <optional>
#include <string>

#include "binrep/dataset.hpp"
#include "binrep/mcmc.hpp"
#include "binrep/scoring.hpp"

namespace binrep {

struct CredibleSet {
    CredibleInterval theta, p, q;
    double level = 0.95;
};

struct EstimateSet {
    Method method = Method::average;
    double theta_hat = 0.0;
    double p_hat = 0.0;
    double q_hat = 0.0;
    std::optional<CredibleSet> credible;
};

// Score-based estimators of (theta_T, p, q) for the average, median and
// MAP methods.
EstimateSet estimate(const ReplicateDataset& data, const ScoreVector& scores);

// Bayesian estimates are posterior expectations, not score averages.
EstimateSet estimates_from_posterior(const PosteriorSummary& summary);

std::string to_json_string(const EstimateSet& est);

}  // namespace binrep
