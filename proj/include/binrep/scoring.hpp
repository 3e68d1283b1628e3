#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "binrep/dataset.hpp"

namespace binrep {

enum class Method { average, median, map, bayes };

std::string method_name(Method m);
Method parse_method(const std::string& name);

// An exact small-integer fraction backing a score, so that threshold
// comparisons at values like 1/3 are decided without rounding.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 0;  // den == 0 means "no exact form"
    bool exact() const { return den != 0; }
};

struct ScoreVector {
    Method method = Method::average;
    std::vector<double> values;
    std::vector<Rational> exact;  // empty for map/bayes

    std::size_t size() const { return values.size(); }
};

ScoreVector score_average(const ReplicateDataset& data);
ScoreVector score_median(const ReplicateDataset& data);

// P(T=1 | S=s) for one individual under fixed parameters; log-space.
double likelihood_score(int n, int s, const ModelParams& params);
ScoreVector score_likelihood(const ReplicateDataset& data, const ModelParams& params);

struct EmOptions {
    int restarts = 20;
    int max_iters = 500;
    double tol = 1e-9;  // relative change of the penalized log-posterior
    std::uint64_t seed = 0;
};

struct EmRestartInfo {
    double log_posterior = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct EmFitResult {
    ModelParams params;
    double log_posterior = 0.0;
    std::vector<double> responsibilities;
    int restarts_used = 0;
    int best_restart = 0;
    std::vector<EmRestartInfo> restarts;
};

// Beta(2,2)-penalized log-posterior of the binomial mixture.
double penalized_log_posterior(const ReplicateDataset& data, const ModelParams& params);

// EM from an explicit initial responsibility vector (one restart).
EmFitResult em_single_run(const ReplicateDataset& data, std::vector<double> initial_y,
                          int max_iters, double tol);

// Multi-restart EM with random Beta(s+1/2, n-s+1/2) initializations.
// Restarts run in parallel with streams keyed by (seed, restart index);
// the best penalized log-posterior wins, ties to the lowest index.
EmFitResult em_fit(const ReplicateDataset& data, const EmOptions& opts);

ScoreVector score_map(const ReplicateDataset& data, const EmFitResult& fit);

}  // namespace binrep
