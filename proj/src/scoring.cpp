#include "binrep/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "binrep/parallel.hpp"
#include "binrep/rng.hpp"
#include "binrep/special_functions.hpp"

namespace binrep {

std::string method_name(Method m) {
    switch (m) {
        case Method::average: return "average";
        case Method::median: return "median";
        case Method::map: return "map";
        case Method::bayes: return "bayes";
    }
    return "?";
}

Method parse_method(const std::string& name) {
    if (name == "average" || name == "A") return Method::average;
    if (name == "median" || name == "M") return Method::median;
    if (name == "map" || name == "MAP") return Method::map;
    if (name == "bayes" || name == "B") return Method::bayes;
    throw validation_error("unknown method '" + name + "'");
}

ScoreVector score_average(const ReplicateDataset& data) {
    ScoreVector out;
    out.method = Method::average;
    out.values.reserve(data.size());
    out.exact.reserve(data.size());
    for (const auto& rec : data.individuals()) {
        out.values.push_back(static_cast<double>(rec.s) / rec.n);
        out.exact.push_back({rec.s, rec.n});
    }
    return out;
}

ScoreVector score_median(const ReplicateDataset& data) {
    ScoreVector out;
    out.method = Method::median;
    out.values.reserve(data.size());
    out.exact.reserve(data.size());
    for (const auto& rec : data.individuals()) {
        const int twice = 2 * rec.s;
        if (twice > rec.n) {
            out.values.push_back(1.0);
            out.exact.push_back({1, 1});
        } else if (twice == rec.n) {
            out.values.push_back(0.5);
            out.exact.push_back({1, 2});
        } else {
            out.values.push_back(0.0);
            out.exact.push_back({0, 1});
        }
    }
    return out;
}

namespace {

// Evaluation without the H1 domain check; EM iterates legitimately pass
// through q > 1/2 before the label repair fires.
double likelihood_score_raw(int n, int s, const ModelParams& params) {
    // log of theta (1-q)^s q^(n-s) and of (1-theta) p^s (1-p)^(n-s)
    const double log_pos = std::log(params.theta_T) + s * std::log1p(-params.q) +
                           (n - s) * std::log(params.q);
    const double log_neg = std::log1p(-params.theta_T) + s * std::log(params.p) +
                           (n - s) * std::log1p(-params.p);
    // 1 / (1 + exp(log_neg - log_pos)), safe at both extremes
    const double w = log_neg - log_pos;
    if (w > 0) {
        const double e = std::exp(-w);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(w));
}

}  // namespace

double likelihood_score(int n, int s, const ModelParams& params) {
    params.validate();
    return likelihood_score_raw(n, s, params);
}

ScoreVector score_likelihood(const ReplicateDataset& data, const ModelParams& params) {
    ScoreVector out;
    out.method = Method::map;
    out.values.reserve(data.size());
    for (const auto& rec : data.individuals()) {
        out.values.push_back(likelihood_score(rec.n, rec.s, params));
    }
    return out;
}

namespace {

// The distinct (n, s) pairs of a dataset, with multiplicities. The E-step
// and all likelihood sums only depend on scores through these pairs, which
// keeps per-iteration work proportional to the number of distinct pairs.
struct PairTable {
    std::vector<int> n, s;
    std::vector<double> count;
    std::vector<std::size_t> index_of_individual;

    explicit PairTable(const ReplicateDataset& data) {
        std::map<std::pair<int, int>, std::size_t> seen;
        for (const auto& rec : data.individuals()) {
            auto key = std::make_pair(rec.n, rec.s);
            auto it = seen.find(key);
            if (it == seen.end()) {
                it = seen.emplace(key, n.size()).first;
                n.push_back(rec.n);
                s.push_back(rec.s);
                count.push_back(0.0);
            }
            count[it->second] += 1.0;
            index_of_individual.push_back(it->second);
        }
    }

    std::size_t size() const { return n.size(); }
};

double penalized_log_posterior(const PairTable& pairs, const ModelParams& params) {
    const double th = params.theta_T, p = params.p, q = params.q;
    double acc = std::log(p) + std::log1p(-p) + std::log(q) + std::log1p(-q);
    const double log_th = std::log(th);
    const double log_1mth = std::log1p(-th);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const int n = pairs.n[k], s = pairs.s[k];
        const double log_pos = log_th + s * std::log1p(-q) + (n - s) * std::log(q);
        const double log_neg = log_1mth + s * std::log(p) + (n - s) * std::log1p(-p);
        acc += pairs.count[k] * math::log_sum_exp(log_pos, log_neg);
    }
    return acc;
}

struct EmState {
    ModelParams params;
    std::vector<double> y;  // responsibilities, aligned with individuals
};

void em_m_step(const ReplicateDataset& data, EmState& st) {
    double sum_y = 0.0;
    double s_neg = 0.0, n_neg = 0.0;
    double f_pos = 0.0, n_pos = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& rec = data[i];
        const double yi = st.y[i];
        sum_y += yi;
        s_neg += rec.s * (1.0 - yi);
        n_neg += rec.n * (1.0 - yi);
        f_pos += (rec.n - rec.s) * yi;
        n_pos += rec.n * yi;
    }
    st.params.theta_T = sum_y / static_cast<double>(data.size());
    st.params.p = (1.0 + s_neg) / (2.0 + n_neg);
    st.params.q = (1.0 + f_pos) / (2.0 + n_pos);
}

// Mixture symmetry: relabelling the latent classes maps
// (theta, p, q, y) to (1-theta, 1-q, 1-p, 1-y) without changing the
// posterior. Applied whenever the M-step leaves q above 1/2.
void em_swap(EmState& st) {
    const double p_old = st.params.p;
    st.params.theta_T = 1.0 - st.params.theta_T;
    st.params.p = 1.0 - st.params.q;
    st.params.q = 1.0 - p_old;
    for (double& yi : st.y) yi = 1.0 - yi;
}

void em_e_step(const ReplicateDataset& data, const PairTable& pairs, EmState& st) {
    std::vector<double> by_pair(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        by_pair[k] = likelihood_score_raw(pairs.n[k], pairs.s[k], st.params);
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
        st.y[i] = by_pair[pairs.index_of_individual[i]];
    }
}

}  // namespace

double penalized_log_posterior(const ReplicateDataset& data, const ModelParams& params) {
    return penalized_log_posterior(PairTable(data), params);
}

EmFitResult em_single_run(const ReplicateDataset& data, std::vector<double> initial_y,
                          int max_iters, double tol) {
    if (initial_y.size() != data.size()) {
        throw validation_error("em_single_run: responsibility vector length mismatch");
    }
    const PairTable pairs(data);
    EmState st;
    st.y = std::move(initial_y);

    EmRestartInfo info;
    double prev = -std::numeric_limits<double>::infinity();
    for (int it = 1; it <= max_iters; ++it) {
        info.iterations = it;
        em_m_step(data, st);
        if (st.params.q > 0.5) em_swap(st);
        em_e_step(data, pairs, st);
        const double cur = penalized_log_posterior(pairs, st.params);
        if (!std::isfinite(cur)) {
            throw numerical_error("EM produced a non-finite log-posterior");
        }
        if (std::isfinite(prev) &&
            std::fabs(cur - prev) <= tol * (std::fabs(prev) + 1e-12)) {
            info.converged = true;
            prev = cur;
            break;
        }
        prev = cur;
    }

    // Report the labelling satisfying the rate constraint when one exists.
    if (st.params.p + st.params.q > 1.0) em_swap(st);
    em_e_step(data, pairs, st);

    EmFitResult out;
    out.params = st.params;
    out.log_posterior = penalized_log_posterior(pairs, st.params);
    out.responsibilities = std::move(st.y);
    out.restarts_used = 1;
    info.log_posterior = out.log_posterior;
    out.restarts.push_back(info);
    return out;
}

EmFitResult em_fit(const ReplicateDataset& data, const EmOptions& opts) {
    if (opts.restarts < 1) throw validation_error("em_fit: restarts must be >= 1");
    if (opts.max_iters < 1) throw validation_error("em_fit: max_iters must be >= 1");

    std::vector<EmFitResult> runs(opts.restarts);
    std::vector<std::string> failures(opts.restarts);
    parallel_for(static_cast<std::size_t>(opts.restarts), [&](std::size_t r) {
        RngStream rng(opts.seed, 0x3715u, r);
        std::vector<double> y0(data.size());
        for (std::size_t i = 0; i < data.size(); ++i) {
            const auto& rec = data[i];
            y0[i] = rng.beta(rec.s + 0.5, rec.n - rec.s + 0.5);
        }
        try {
            runs[r] = em_single_run(data, std::move(y0), opts.max_iters, opts.tol);
        } catch (const std::exception& e) {
            failures[r] = e.what();
        }
    });

    int best = -1;
    EmFitResult out;
    for (int r = 0; r < opts.restarts; ++r) {
        if (!failures[r].empty()) {
            throw numerical_error("EM restart " + std::to_string(r) + ": " + failures[r]);
        }
        out.restarts.push_back(runs[r].restarts.front());
        if (best < 0 || runs[r].log_posterior > runs[best].log_posterior) {
            best = r;
        }
    }
    out.params = runs[best].params;
    out.log_posterior = runs[best].log_posterior;
    out.responsibilities = std::move(runs[best].responsibilities);
    out.restarts_used = opts.restarts;
    out.best_restart = best;
    return out;
}

ScoreVector score_map(const ReplicateDataset& data, const EmFitResult& fit) {
    ScoreVector out;
    out.method = Method::map;
    out.values.reserve(data.size());
    for (const auto& rec : data.individuals()) {
        out.values.push_back(likelihood_score_raw(rec.n, rec.s, fit.params));
    }
    return out;
}

}  // namespace binrep
