#include "binrep/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "binrep/decision.hpp"
#include "binrep/estimation.hpp"
#include "binrep/parallel.hpp"
#include "binrep/prediction.hpp"
#include "binrep/rng.hpp"

namespace binrep {

void SimConfig::validate() const {
    if (!(theta_T >= 0.0 && theta_T <= 1.0)) {
        throw validation_error("simulate: theta_T must lie in [0,1]");
    }
    if (!(p > 0.0 && p < 0.5 && q > 0.0 && q < 0.5)) {
        throw validation_error("simulate: p and q must lie in (0,1/2)");
    }
    if (n_individuals < 1) throw validation_error("simulate: need at least one individual");
    if (n_min < 1 || n_max < n_min || n_max > 200) {
        throw validation_error("simulate: replicate range must satisfy 1 <= n_min <= n_max <= 200");
    }
}

namespace {

int draw_binomial(RngStream& rng, int n, double rate) {
    int s = 0;
    for (int j = 0; j < n; ++j) s += rng.bernoulli(rate) ? 1 : 0;
    return s;
}

std::string padded_id(const char* prefix, int i, int width) {
    std::string digits = std::to_string(i);
    while (static_cast<int>(digits.size()) < width) digits.insert(digits.begin(), '0');
    return prefix + digits;
}

}  // namespace

ReplicateDataset simulate_dataset(const SimConfig& cfg) {
    cfg.validate();
    RngStream rng(cfg.seed, 0x51e7u);
    std::vector<IndividualRecord> recs;
    recs.reserve(cfg.n_individuals);
    for (int i = 0; i < cfg.n_individuals; ++i) {
        IndividualRecord rec;
        rec.id = padded_id("sim", i + 1, 4);
        const int t = rng.bernoulli(cfg.theta_T) ? 1 : 0;
        rec.status = t;
        rec.n = cfg.n_min == cfg.n_max ? cfg.n_min : rng.uniform_int(cfg.n_min, cfg.n_max);
        const double rate = t == 1 ? 1.0 - cfg.q : cfg.p;
        rec.s = draw_binomial(rng, rec.n, rate);
        recs.push_back(std::move(rec));
    }
    return ReplicateDataset(std::move(recs));
}

void MammoConfig::validate() const {
    if (n_negative < 1 || n_positive < 1 || n_radiologists < 1) {
        throw validation_error("mammography: class sizes and radiologist count must be >= 1");
    }
    for (double w : weights) {
        if (!(w > 0.0)) throw validation_error("mammography: weights must be positive");
    }
    if (!fp_rates.empty() && static_cast<int>(fp_rates.size()) != n_radiologists) {
        throw validation_error("mammography: fp_rates length must match radiologist count");
    }
    if (!fn_rates.empty() && static_cast<int>(fn_rates.size()) != n_radiologists) {
        throw validation_error("mammography: fn_rates length must match radiologist count");
    }
    if (!weights.empty() && static_cast<int>(weights.size()) != patients()) {
        throw validation_error("mammography: weights length must match patient count");
    }
}

namespace {

int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

// Successive draws without replacement, each proportional to the remaining
// weights. Returns `count` distinct indices from `eligible`.
std::vector<int> weighted_sample(RngStream& rng, std::vector<int> eligible,
                                 const std::vector<double>& weights, int count) {
    std::vector<int> picked;
    picked.reserve(count);
    double total = 0.0;
    for (int idx : eligible) total += weights[idx];
    for (int k = 0; k < count; ++k) {
        const double target = rng.uniform() * total;
        double acc = 0.0;
        std::size_t chosen = eligible.size() - 1;
        for (std::size_t j = 0; j < eligible.size(); ++j) {
            acc += weights[eligible[j]];
            if (target < acc) {
                chosen = j;
                break;
            }
        }
        picked.push_back(eligible[chosen]);
        total -= weights[eligible[chosen]];
        eligible.erase(eligible.begin() + chosen);
    }
    return picked;
}

}  // namespace

RawReplicateTable simulate_mammography(const MammoConfig& cfg) {
    cfg.validate();
    const int n_pat = cfg.patients();
    const std::vector<double> fp =
        cfg.fp_rates.empty() ? std::vector<double>(cfg.n_radiologists, 0.22) : cfg.fp_rates;
    const std::vector<double> fn =
        cfg.fn_rates.empty() ? std::vector<double>(cfg.n_radiologists, 0.13) : cfg.fn_rates;
    const std::vector<double> w =
        cfg.weights.empty() ? std::vector<double>(n_pat, 1.0) : cfg.weights;

    // Missing exams per (radiologist, patient); positions are fixed blocks at
    // the start of each class so rows never lose more than one exam.
    std::vector<std::vector<int>> missing_of_rad(cfg.n_radiologists);
    if (cfg.apply_missingness) {
        int next_positive = cfg.n_negative;  // positive block starts here
        int next_negative = 0;
        for (const auto& spec : cfg.missingness) {
            if (spec.radiologist < 0 || spec.radiologist >= cfg.n_radiologists) continue;
            auto& cells = missing_of_rad[spec.radiologist];
            for (int k = 0; k < spec.missing_positive && next_positive < n_pat; ++k) {
                cells.push_back(next_positive++);
            }
            for (int k = 0; k < spec.missing_negative && next_negative < cfg.n_negative; ++k) {
                cells.push_back(next_negative++);
            }
        }
    }

    std::vector<std::vector<int>> values(n_pat,
                                         std::vector<int>(cfg.n_radiologists, RawReplicateTable::kMissing));
    std::vector<std::string> ids;
    std::vector<std::optional<int>> status;
    ids.reserve(n_pat);
    status.reserve(n_pat);
    for (int i = 0; i < n_pat; ++i) {
        ids.push_back(padded_id("pat", i + 1, 3));
        status.emplace_back(i < cfg.n_negative ? 0 : 1);
    }

    RngStream rng(cfg.seed, 0x3a33u);
    for (int j = 0; j < cfg.n_radiologists; ++j) {
        std::vector<bool> is_missing(n_pat, false);
        for (int cell : missing_of_rad[j]) is_missing[cell] = true;

        std::vector<int> eligible_neg, eligible_pos;
        for (int i = 0; i < cfg.n_negative; ++i) {
            if (!is_missing[i]) eligible_neg.push_back(i);
        }
        for (int i = cfg.n_negative; i < n_pat; ++i) {
            if (!is_missing[i]) eligible_pos.push_back(i);
        }

        const int n_fp = round_half_up(cfg.n_negative * fp[j]);
        const int n_fn = round_half_up(cfg.n_positive * fn[j]);
        if (n_fp > static_cast<int>(eligible_neg.size()) ||
            n_fn > static_cast<int>(eligible_pos.size())) {
            throw validation_error("mammography: flip count exceeds class size for radiologist " +
                                   std::to_string(j));
        }

        for (int i = 0; i < n_pat; ++i) {
            if (!is_missing[i]) values[i][j] = i < cfg.n_negative ? 0 : 1;
        }
        for (int idx : weighted_sample(rng, eligible_neg, w, n_fp)) values[idx][j] = 1;
        for (int idx : weighted_sample(rng, eligible_pos, w, n_fn)) values[idx][j] = 0;
    }

    return RawReplicateTable(std::move(ids), std::move(values), std::move(status));
}

namespace {

SummaryRow summarize_values(double x, Method method, std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const auto quantile = [&](double prob) {
        const double pos = prob * (values.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        const double frac = pos - lo;
        return values[lo] * (1.0 - frac) + values[hi] * frac;
    };
    return SummaryRow{x, method, quantile(0.5), quantile(0.4), quantile(0.6)};
}

double estimate_theta(const ReplicateDataset& data, Method method, const ExperimentOptions& opts,
                      std::uint64_t key1, std::uint64_t key2) {
    switch (method) {
        case Method::average:
            return estimate(data, score_average(data)).theta_hat;
        case Method::median:
            return estimate(data, score_median(data)).theta_hat;
        case Method::map: {
            EmOptions em = opts.em;
            em.seed = opts.seed ^ (key1 * 0x9e3779b97f4a7c15ull) ^ key2;
            const auto fit = em_fit(data, em);
            return estimate(data, score_map(data, fit)).theta_hat;
        }
        case Method::bayes: {
            GibbsOptions gibbs = opts.gibbs;
            gibbs.seed = opts.seed ^ (key1 * 0xc2b2ae3d27d4eb4full) ^ key2;
            const auto sample = gibbs_run(data, default_prior(), gibbs);
            return summarize(sample).mean_theta;
        }
    }
    throw validation_error("unknown method");
}

}  // namespace

ExperimentResult run_bias_experiment(const std::vector<double>& theta_grid, int reps,
                                     const SimConfig& cfg_base, const std::vector<Method>& methods,
                                     const ExperimentOptions& opts) {
    if (reps < 1) throw validation_error("bias experiment: reps must be >= 1");
    const std::size_t cells = theta_grid.size() * static_cast<std::size_t>(reps);
    std::vector<std::vector<double>> estimates(cells, std::vector<double>(methods.size()));

    parallel_for(cells, [&](std::size_t cell) {
        const std::size_t t_idx = cell / reps;
        const int rep = static_cast<int>(cell % reps);
        SimConfig cfg = cfg_base;
        cfg.theta_T = theta_grid[t_idx];
        cfg.seed = opts.seed ^ ((t_idx + 1) * 0x9e3779b97f4a7c15ull) ^
                   (static_cast<std::uint64_t>(rep) << 20);
        const auto data = simulate_dataset(cfg);
        for (std::size_t m = 0; m < methods.size(); ++m) {
            estimates[cell][m] = estimate_theta(data, methods[m], opts, t_idx + 1, rep);
        }
    });

    ExperimentResult out;
    for (std::size_t t_idx = 0; t_idx < theta_grid.size(); ++t_idx) {
        for (std::size_t m = 0; m < methods.size(); ++m) {
            std::vector<double> biases;
            biases.reserve(reps);
            for (int rep = 0; rep < reps; ++rep) {
                const double est = estimates[t_idx * reps + rep][m];
                out.rows.push_back({theta_grid[t_idx], methods[m], rep, est});
                biases.push_back(est - theta_grid[t_idx]);
            }
            out.summary.push_back(summarize_values(theta_grid[t_idx], methods[m], std::move(biases)));
        }
    }
    return out;
}

ExperimentResult run_risk_experiment(const std::vector<double>& a_grid, int reps,
                                     const SimConfig& cfg_base, const std::vector<Method>& methods,
                                     const ExperimentOptions& opts) {
    if (reps < 1) throw validation_error("risk experiment: reps must be >= 1");
    for (double a : a_grid) {
        if (!(a > 0.0 && a <= 0.5)) {
            throw validation_error("risk experiment: decision costs must lie in (0, 1/2]");
        }
    }

    // risks[rep][method][a]
    std::vector<std::vector<std::vector<double>>> risks(
        reps, std::vector<std::vector<double>>(methods.size(), std::vector<double>(a_grid.size())));

    parallel_for(static_cast<std::size_t>(reps), [&](std::size_t rep) {
        SimConfig cfg = cfg_base;
        cfg.seed = opts.seed ^ (0x52135ull * (rep + 1));
        const auto data = simulate_dataset(cfg);
        const auto truth = truth_vector(data);
        for (std::size_t m = 0; m < methods.size(); ++m) {
            ScoreVector scores;
            switch (methods[m]) {
                case Method::average: scores = score_average(data); break;
                case Method::median: scores = score_median(data); break;
                case Method::map: {
                    EmOptions em = opts.em;
                    em.seed = opts.seed ^ (0x7a11ull * (rep + 1));
                    scores = score_map(data, em_fit(data, em));
                    break;
                }
                case Method::bayes: {
                    GibbsOptions gibbs = opts.gibbs;
                    gibbs.seed = opts.seed ^ (0xb3e5ull * (rep + 1));
                    scores = summarize(gibbs_run(data, default_prior(), gibbs)).bayes_scores;
                    break;
                }
            }
            for (std::size_t ai = 0; ai < a_grid.size(); ++ai) {
                const double a = a_grid[ai];
                const ThresholdPair thr{a, 1.0 - a};
                const auto cls = classify(scores, thr);
                risks[rep][m][ai] =
                    empirical_risk(cls, truth, LossSpec::symmetric(a), RiskMode::mean);
            }
        }
    });

    ExperimentResult out;
    for (std::size_t ai = 0; ai < a_grid.size(); ++ai) {
        for (std::size_t m = 0; m < methods.size(); ++m) {
            std::vector<double> vals;
            vals.reserve(reps);
            for (int rep = 0; rep < reps; ++rep) {
                out.rows.push_back({a_grid[ai], methods[m], rep, risks[rep][m][ai]});
                vals.push_back(risks[rep][m][ai]);
            }
            out.summary.push_back(summarize_values(a_grid[ai], methods[m], std::move(vals)));
        }
    }
    return out;
}

std::string experiment_rows_to_csv(const ExperimentResult& result, const std::string& x_name,
                                   const std::string& value_name) {
    std::ostringstream out;
    out.precision(17);
    out << x_name << ",method,rep," << value_name << '\n';
    for (const auto& row : result.rows) {
        out << row.x << ',' << method_name(row.method) << ',' << row.rep << ',' << row.value
            << '\n';
    }
    return out.str();
}

std::string experiment_summary_to_csv(const ExperimentResult& result, const std::string& x_name) {
    std::ostringstream out;
    out.precision(17);
    out << x_name << ",method,median,q40,q60\n";
    for (const auto& row : result.summary) {
        out << row.x << ',' << method_name(row.method) << ',' << row.median << ',' << row.q40
            << ',' << row.q60 << '\n';
    }
    return out.str();
}

std::vector<PredictionExperimentRow> run_prediction_experiment(
    int reps, const MammoConfig& cfg_base, const std::vector<double>& a_grid,
    const ExperimentOptions& opts) {
    if (reps < 1) throw validation_error("prediction experiment: reps must be >= 1");

    std::vector<PredictionExperimentRow> out(reps);
    parallel_for(static_cast<std::size_t>(reps), [&](std::size_t rep) {
        MammoConfig cfg = cfg_base;
        cfg.seed = opts.seed ^ (0x919eull * (rep + 1));
        const auto data = reduce_to_sufficient(simulate_mammography(cfg));

        // Deterministic 90/10 split of a shuffled patient order.
        RngStream rng(opts.seed, 0x5b17u, rep);
        std::vector<std::size_t> order(data.size());
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[rng.uniform_int(0, static_cast<int>(i) - 1)]);
        }
        const std::size_t n_test = std::max<std::size_t>(1, data.size() / 10);
        std::vector<std::size_t> test(order.begin(), order.begin() + n_test);
        std::vector<std::size_t> train(order.begin() + n_test, order.end());
        std::sort(test.begin(), test.end());
        std::sort(train.begin(), train.end());
        const auto train_data = data.permuted(train);

        EmOptions em = opts.em;
        em.seed = opts.seed ^ (0x6d2bull * (rep + 1));
        GibbsOptions gibbs = opts.gibbs;
        gibbs.seed = opts.seed ^ (0x47c1ull * (rep + 1));

        const auto fit = em_fit(train_data, em);
        const auto sample = gibbs_run(train_data, default_prior(), gibbs);

        std::vector<int> truth;
        for (std::size_t idx : test) truth.push_back(data[idx].status.value());

        const auto risk_sum = [&](const std::vector<double>& scores) {
            double acc = 0.0;
            for (double a : a_grid) {
                const ThresholdPair thr{a, 1.0 - a};
                const LossSpec loss = LossSpec::symmetric(a);
                double rep_risk = 0.0;
                for (std::size_t i = 0; i < scores.size(); ++i) {
                    const Decision d = apply_thresholds(scores[i], Rational{}, thr);
                    rep_risk += loss.loss(truth[i], decision_value(d));
                }
                acc += rep_risk / static_cast<double>(scores.size());
            }
            return acc;
        };

        // A train split can leave a plug-in estimate outside (0, 1/2); the
        // affected method gets a NaN risk for this repetition.
        const auto plugin_risk = [&](const EstimateSet& est) {
            try {
                const ModelParams params{est.theta_hat, est.p_hat, est.q_hat};
                std::vector<double> scores;
                for (std::size_t idx : test) {
                    scores.push_back(predict_plugin(data[idx].n, data[idx].s, params));
                }
                return risk_sum(scores);
            } catch (const std::exception&) {
                return std::numeric_limits<double>::quiet_NaN();
            }
        };

        out[rep].rep = static_cast<int>(rep);
        out[rep].risk_average = plugin_risk(estimate(train_data, score_average(train_data)));
        out[rep].risk_median = plugin_risk(estimate(train_data, score_median(train_data)));
        out[rep].risk_map = plugin_risk(estimate(train_data, score_map(train_data, fit)));
        std::vector<double> y_bayes;
        for (std::size_t idx : test) {
            y_bayes.push_back(predict_bayes(data[idx].n, data[idx].s, sample));
        }
        out[rep].risk_bayes = risk_sum(y_bayes);
    });
    return out;
}

}  // namespace binrep
