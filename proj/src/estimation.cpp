#include "binrep/estimation.hpp"

#include <json.hpp>

namespace binrep {

EstimateSet estimate(const ReplicateDataset& data, const ScoreVector& scores) {
    if (scores.size() != data.size()) {
        throw validation_error("estimate: score vector length mismatch");
    }
    if (scores.method == Method::bayes) {
        throw validation_error("estimate: Bayesian estimates come from the posterior summary");
    }
    double sum_y = 0.0;
    double s_neg = 0.0, n_neg = 0.0;
    double f_pos = 0.0, n_pos = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& rec = data[i];
        const double y = scores.values[i];
        sum_y += y;
        s_neg += rec.s * (1.0 - y);
        n_neg += rec.n * (1.0 - y);
        f_pos += (rec.n - rec.s) * y;
        n_pos += rec.n * y;
    }
    EstimateSet out;
    out.method = scores.method;
    out.theta_hat = sum_y / static_cast<double>(data.size());
    if (n_neg <= 0.0) {
        throw validation_error("estimate: false-positivity rate undefined (all scores are 1)");
    }
    if (n_pos <= 0.0) {
        throw validation_error("estimate: false-negativity rate undefined (all scores are 0)");
    }
    out.p_hat = s_neg / n_neg;
    out.q_hat = f_pos / n_pos;
    return out;
}

EstimateSet estimates_from_posterior(const PosteriorSummary& summary) {
    EstimateSet out;
    out.method = Method::bayes;
    out.theta_hat = summary.mean_theta;
    out.p_hat = summary.mean_p;
    out.q_hat = summary.mean_q;
    CredibleSet ci;
    ci.theta = summary.ci_theta;
    ci.p = summary.ci_p;
    ci.q = summary.ci_q;
    ci.level = summary.level;
    out.credible = ci;
    return out;
}

std::string to_json_string(const EstimateSet& est) {
    nlohmann::json j;
    j["method"] = method_name(est.method);
    j["theta_hat"] = est.theta_hat;
    j["p_hat"] = est.p_hat;
    j["q_hat"] = est.q_hat;
    if (est.credible) {
        j["ci"] = {
            {"level", est.credible->level},
            {"theta", {est.credible->theta.lo, est.credible->theta.hi}},
            {"p", {est.credible->p.lo, est.credible->p.hi}},
            {"q", {est.credible->q.lo, est.credible->q.hi}},
        };
    }
    return j.dump(2);
}

}  // namespace binrep
