#pragma once

#include <vector>

#include "binrep/dataset.hpp"

namespace binrep {

// Tail quantities of Bin(k, a) around k/2 that drive the behaviour of the
// median score:
//   u     = P(Bin(k,a) > k/2)
//   v     = P(Bin(k,a) = k/2)        (zero for odd k)
//   delta = u + v/2                   (mean of the median of k Bernoulli(a))
//   gamma = u(1-u) + v(1-v)/4 - u v   (variance of that median)
struct DeltaGamma {
    double u = 0.0;
    double v = 0.0;
    double delta = 0.0;
    double gamma = 0.0;
};

DeltaGamma delta_gamma(int k, double a);

// Dataset-level averages of the delta/gamma coefficients plus the harmonic
// mean of the replicate counts.
class DatasetCoefficients {
  public:
    explicit DatasetCoefficients(const ReplicateDataset& data);
    explicit DatasetCoefficients(std::vector<int> replicate_counts);

    double delta_bar(double a) const;
    double gamma_bar(double a) const;
    // Average of (1 - delta(n_i, q) - delta(n_i, p))^2 over individuals;
    // the exact squared-centering term of the median prevalence variance.
    double centered_delta_sq(double p, double q) const;
    double n_tilde() const { return n_tilde_; }
    std::size_t size() const { return counts_.size(); }
    int min_n() const { return min_n_; }
    int max_n() const { return max_n_; }
    bool all_at_most_two() const { return max_n_ <= 2; }

  private:
    std::vector<int> counts_;
    double n_tilde_ = 0.0;
    int min_n_ = 0;
    int max_n_ = 0;
};

enum class ScoreMethodAM { average, median };

struct ScoreMoments {
    double cond_mean_given_t0 = 0.0;
    double cond_mean_given_t1 = 0.0;
    double mean = 0.0;
    double variance = 0.0;
};

// Closed-form moments of the average/median score of one individual with n
// replicates under the model (theta_T, p, q).
ScoreMoments score_moments(const ModelParams& params, int n, ScoreMethodAM method);

struct PrevalenceMoments {
    double expected_value = 0.0;
    double bias = 0.0;
    double variance = 0.0;
};

// Exact moments of the average/median prevalence estimators on a dataset
// with the given replicate counts.
PrevalenceMoments prevalence_moments(const ModelParams& params, const ReplicateDataset& data,
                                     ScoreMethodAM method);
PrevalenceMoments prevalence_moments(const ModelParams& params, const DatasetCoefficients& coeffs,
                                     ScoreMethodAM method);

// The theta range where the median prevalence estimator has the larger
// absolute bias. Degenerates to a point when p = q; when all n_i <= 2 both
// biases coincide everywhere and `biases_equal_everywhere` is set.
struct BiasDominanceInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool biases_equal_everywhere = false;
    double length() const { return biases_equal_everywhere ? 0.0 : hi - lo; }
};

BiasDominanceInterval bias_dominance_interval(double p, double q, const std::vector<int>& ns,
                                              double grid_step = 1e-3);

}  // namespace binrep
