#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "binrep/dataset.hpp"
#include "binrep/scoring.hpp"

namespace binrep {

// Beta hyperparameters of the prior on (theta_T, p, q). The priors on the
// error rates are truncated to (0, 1/2).
struct PriorSpec {
    double a_T = 0.5, b_T = 0.5;
    double a_FP = 2.0, b_FP = 2.0;
    double a_FN = 2.0, b_FN = 2.0;

    void validate() const;
};

PriorSpec default_prior();
PriorSpec misguided_prior();

struct GibbsOptions {
    int chains = 4;
    int iters = 5000;
    int burnin = 1000;
    std::uint64_t seed = 0;
};

struct ChainMeta {
    std::uint64_t seed = 0;
    int chains = 0;
    int iters = 0;
    int burnin = 0;
};

// Posterior draws after burn-in, chains concatenated in order. latent(d, i)
// is the sampled state of individual i in draw d.
class PosteriorSample {
  public:
    PosteriorSample(ChainMeta meta, std::size_t n_individuals);

    std::size_t draws() const { return theta_.size(); }
    std::size_t individuals() const { return n_individuals_; }
    double theta(std::size_t d) const { return theta_[d]; }
    double p(std::size_t d) const { return p_[d]; }
    double q(std::size_t d) const { return q_[d]; }
    int latent(std::size_t d, std::size_t i) const {
        return latent_[d * n_individuals_ + i];
    }
    const ChainMeta& meta() const { return meta_; }
    std::size_t draws_per_chain() const { return meta_.iters - meta_.burnin; }

    void append(double theta, double p, double q, const std::vector<std::uint8_t>& t);

    const std::vector<double>& thetas() const { return theta_; }
    const std::vector<double>& ps() const { return p_; }
    const std::vector<double>& qs() const { return q_; }

  private:
    ChainMeta meta_;
    std::size_t n_individuals_;
    std::vector<double> theta_, p_, q_;
    std::vector<std::uint8_t> latent_;
};

// Systematic-scan Gibbs sampler for the latent-class model: latent states
// given parameters, then conjugate Beta updates for theta and the two
// truncated error rates. Chains run in parallel on streams keyed by
// (seed, chain index).
PosteriorSample gibbs_run(const ReplicateDataset& data, const PriorSpec& prior,
                          const GibbsOptions& opts);

struct CredibleInterval {
    double lo = 0.0;
    double hi = 0.0;
};

struct PosteriorSummary {
    double mean_theta = 0.0, mean_p = 0.0, mean_q = 0.0;
    CredibleInterval ci_theta, ci_p, ci_q;
    ScoreVector bayes_scores;
    double level = 0.95;
};

PosteriorSummary summarize(const PosteriorSample& sample, double level = 0.95);

struct RhatDiagnostic {
    double theta = 1.0, p = 1.0, q = 1.0;
    bool any_above(double threshold) const {
        return theta > threshold || p > threshold || q > threshold;
    }
};

// Split-chain potential scale reduction on (theta, p, q).
RhatDiagnostic split_rhat(const PosteriorSample& sample);

// CSV export with header chain,iter,theta,p,q.
std::string draws_to_csv(const PosteriorSample& sample);

}  // namespace binrep
