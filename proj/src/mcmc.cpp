#include "binrep/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "binrep/parallel.hpp"
#include "binrep/rng.hpp"
#include "binrep/special_functions.hpp"

namespace binrep {

void PriorSpec::validate() const {
    for (double v : {a_T, b_T, a_FP, b_FP, a_FN, b_FN}) {
        if (!(v > 0.0)) throw validation_error("prior hyperparameters must be positive");
    }
}

PriorSpec default_prior() { return PriorSpec{0.5, 0.5, 2.0, 2.0, 2.0, 2.0}; }

PriorSpec misguided_prior() { return PriorSpec{0.5, 0.5, 50.0, 50.0, 50.0, 50.0}; }

PosteriorSample::PosteriorSample(ChainMeta meta, std::size_t n_individuals)
    : meta_(meta), n_individuals_(n_individuals) {}

void PosteriorSample::append(double theta, double p, double q,
                             const std::vector<std::uint8_t>& t) {
    theta_.push_back(theta);
    p_.push_back(p);
    q_.push_back(q);
    latent_.insert(latent_.end(), t.begin(), t.end());
}

namespace {

struct ChainDraws {
    std::vector<double> theta, p, q;
    std::vector<std::uint8_t> latent;
};

ChainDraws run_chain(const ReplicateDataset& data, const PriorSpec& prior,
                     const GibbsOptions& opts, int chain) {
    const std::size_t N = data.size();
    RngStream rng(opts.seed, 0x6b1b5u, static_cast<std::uint64_t>(chain));

    // Distinct (n, s) pairs: the latent conditional only depends on them.
    std::map<std::pair<int, int>, std::size_t> seen;
    std::vector<int> pn, ps;
    std::vector<std::size_t> pair_of(N);
    for (std::size_t i = 0; i < N; ++i) {
        auto key = std::make_pair(data[i].n, data[i].s);
        auto it = seen.find(key);
        if (it == seen.end()) {
            it = seen.emplace(key, pn.size()).first;
            pn.push_back(data[i].n);
            ps.push_back(data[i].s);
        }
        pair_of[i] = it->second;
    }

    ModelParams cur;
    cur.theta_T = rng.beta(prior.a_T, prior.b_T);
    if (cur.theta_T <= 0.0 || cur.theta_T >= 1.0) cur.theta_T = 0.5;
    cur.p = rng.beta_truncated(prior.a_FP, prior.b_FP, 0.5, "p");
    cur.q = rng.beta_truncated(prior.a_FN, prior.b_FN, 0.5, "q");

    const int kept = opts.iters - opts.burnin;
    ChainDraws out;
    out.theta.reserve(kept);
    out.p.reserve(kept);
    out.q.reserve(kept);
    out.latent.reserve(static_cast<std::size_t>(kept) * N);

    std::vector<double> score_of_pair(pn.size());
    std::vector<std::uint8_t> t(N);
    for (int it = 1; it <= opts.iters; ++it) {
        for (std::size_t k = 0; k < pn.size(); ++k) {
            score_of_pair[k] = likelihood_score(pn[k], ps[k], cur);
        }
        double sum_t = 0.0;
        double s_neg = 0.0, f_neg = 0.0;  // positives / negatives among T=0 replicates
        double s_pos = 0.0, f_pos = 0.0;  // positives / negatives among T=1 replicates
        for (std::size_t i = 0; i < N; ++i) {
            const bool ti = rng.bernoulli(score_of_pair[pair_of[i]]);
            t[i] = ti ? 1 : 0;
            const auto& rec = data[i];
            if (ti) {
                sum_t += 1.0;
                s_pos += rec.s;
                f_pos += rec.n - rec.s;
            } else {
                s_neg += rec.s;
                f_neg += rec.n - rec.s;
            }
        }
        double theta = rng.beta(prior.a_T + sum_t, prior.b_T + (N - sum_t));
        if (theta <= 0.0) theta = std::nextafter(0.0, 1.0);
        if (theta >= 1.0) theta = std::nextafter(1.0, 0.0);
        cur.theta_T = theta;
        cur.p = rng.beta_truncated(prior.a_FP + s_neg, prior.b_FP + f_neg, 0.5, "p");
        cur.q = rng.beta_truncated(prior.a_FN + f_pos, prior.b_FN + s_pos, 0.5, "q");

        if (it > opts.burnin) {
            out.theta.push_back(cur.theta_T);
            out.p.push_back(cur.p);
            out.q.push_back(cur.q);
            out.latent.insert(out.latent.end(), t.begin(), t.end());
        }
    }
    return out;
}

}  // namespace

PosteriorSample gibbs_run(const ReplicateDataset& data, const PriorSpec& prior,
                          const GibbsOptions& opts) {
    prior.validate();
    if (opts.chains < 1) throw validation_error("gibbs_run: chains must be >= 1");
    if (opts.burnin < 0 || opts.iters <= opts.burnin) {
        throw validation_error("gibbs_run: need iters > burnin >= 0");
    }

    std::vector<ChainDraws> chains(opts.chains);
    std::vector<std::string> failures(opts.chains);
    parallel_for(static_cast<std::size_t>(opts.chains), [&](std::size_t c) {
        try {
            chains[c] = run_chain(data, prior, opts, static_cast<int>(c));
        } catch (const std::exception& e) {
            failures[c] = e.what();
        }
    });
    for (int c = 0; c < opts.chains; ++c) {
        if (!failures[c].empty()) {
            throw numerical_error("chain " + std::to_string(c) + ": " + failures[c]);
        }
    }

    ChainMeta meta{opts.seed, opts.chains, opts.iters, opts.burnin};
    PosteriorSample sample(meta, data.size());
    for (const auto& ch : chains) {
        for (std::size_t d = 0; d < ch.theta.size(); ++d) {
            const std::size_t N = data.size();
            std::vector<std::uint8_t> t(ch.latent.begin() + d * N, ch.latent.begin() + (d + 1) * N);
            sample.append(ch.theta[d], ch.p[d], ch.q[d], t);
        }
    }
    return sample;
}

namespace {

CredibleInterval equal_tailed(std::vector<double> values, double level) {
    std::sort(values.begin(), values.end());
    const auto quantile = [&](double prob) {
        const double pos = prob * (values.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        const double frac = pos - lo;
        return values[lo] * (1.0 - frac) + values[hi] * frac;
    };
    const double tail = (1.0 - level) / 2.0;
    return {quantile(tail), quantile(1.0 - tail)};
}

double mean_of(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / v.size();
}

}  // namespace

PosteriorSummary summarize(const PosteriorSample& sample, double level) {
    if (sample.draws() == 0) throw validation_error("summarize: empty posterior sample");
    if (!(level > 0.0 && level < 1.0)) throw validation_error("summarize: level must be in (0,1)");

    PosteriorSummary out;
    out.level = level;
    out.mean_theta = mean_of(sample.thetas());
    out.mean_p = mean_of(sample.ps());
    out.mean_q = mean_of(sample.qs());
    out.ci_theta = equal_tailed(sample.thetas(), level);
    out.ci_p = equal_tailed(sample.ps(), level);
    out.ci_q = equal_tailed(sample.qs(), level);

    out.bayes_scores.method = Method::bayes;
    out.bayes_scores.values.assign(sample.individuals(), 0.0);
    for (std::size_t d = 0; d < sample.draws(); ++d) {
        for (std::size_t i = 0; i < sample.individuals(); ++i) {
            out.bayes_scores.values[i] += sample.latent(d, i);
        }
    }
    for (double& v : out.bayes_scores.values) v /= static_cast<double>(sample.draws());
    return out;
}

namespace {

double rhat_of(const std::vector<double>& draws, int chains, std::size_t per_chain) {
    // Split each chain in half; PSR over the 2*chains sequences.
    const std::size_t half = per_chain / 2;
    if (half < 2) return 1.0;
    std::vector<std::vector<double>> seqs;
    for (int c = 0; c < chains; ++c) {
        const auto base = draws.begin() + static_cast<std::ptrdiff_t>(c * per_chain);
        seqs.emplace_back(base, base + half);
        seqs.emplace_back(base + half, base + 2 * half);
    }
    const std::size_t m = seqs.size(), n = half;
    std::vector<double> means(m);
    double grand = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        means[j] = mean_of(seqs[j]);
        grand += means[j];
    }
    grand /= m;
    double B = 0.0, W = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        B += (means[j] - grand) * (means[j] - grand);
        double sj = 0.0;
        for (double x : seqs[j]) sj += (x - means[j]) * (x - means[j]);
        W += sj / (n - 1);
    }
    B *= static_cast<double>(n) / (m - 1);
    W /= m;
    if (W <= 0.0) return 1.0;
    const double var_plus = (static_cast<double>(n - 1) / n) * W + B / n;
    return std::sqrt(var_plus / W);
}

}  // namespace

RhatDiagnostic split_rhat(const PosteriorSample& sample) {
    RhatDiagnostic out;
    const int chains = sample.meta().chains;
    const std::size_t per_chain = sample.draws_per_chain();
    if (chains < 1 || per_chain < 4) return out;
    out.theta = rhat_of(sample.thetas(), chains, per_chain);
    out.p = rhat_of(sample.ps(), chains, per_chain);
    out.q = rhat_of(sample.qs(), chains, per_chain);
    return out;
}

std::string draws_to_csv(const PosteriorSample& sample) {
    std::ostringstream out;
    out.precision(17);
    out << "chain,iter,theta,p,q\n";
    const std::size_t per_chain = sample.draws_per_chain();
    for (std::size_t d = 0; d < sample.draws(); ++d) {
        const std::size_t chain = d / per_chain;
        const std::size_t iter = sample.meta().burnin + 1 + (d % per_chain);
        out << chain << ',' << iter << ',' << sample.theta(d) << ',' << sample.p(d) << ','
            << sample.q(d) << '\n';
    }
    return out.str();
}

}  // namespace binrep
