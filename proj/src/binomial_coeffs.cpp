#include "binrep/binomial_coeffs.hpp"

#include <algorithm>
#include <cmath>

#include "binrep/special_functions.hpp"

namespace binrep {

DeltaGamma delta_gamma(int k, double a) {
    if (k < 1) throw validation_error("delta_gamma: k must be >= 1");
    if (!(a > 0.0 && a < 1.0)) throw validation_error("delta_gamma: a must lie in (0,1)");

    // Strict upper tail P(Bin(k,a) > k/2), summed smallest-first.
    std::vector<double> terms;
    for (int j = k / 2 + 1; j <= k; ++j) {
        terms.push_back(math::binom_pmf(k, j, a));
    }
    std::sort(terms.begin(), terms.end());
    double u = 0.0;
    for (double t : terms) u += t;

    DeltaGamma out;
    out.u = u;
    out.v = (k % 2 == 0) ? math::binom_pmf(k, k / 2, a) : 0.0;
    out.delta = out.u + 0.5 * out.v;
    out.gamma = out.u * (1.0 - out.u) + 0.25 * out.v * (1.0 - out.v) - out.u * out.v;
    return out;
}

namespace {
std::vector<int> replicate_counts(const ReplicateDataset& data) {
    std::vector<int> counts;
    counts.reserve(data.size());
    for (const auto& rec : data.individuals()) counts.push_back(rec.n);
    return counts;
}
}  // namespace

DatasetCoefficients::DatasetCoefficients(const ReplicateDataset& data)
    : DatasetCoefficients(replicate_counts(data)) {}

DatasetCoefficients::DatasetCoefficients(std::vector<int> replicate_counts)
    : counts_(std::move(replicate_counts)) {
    if (counts_.empty()) throw validation_error("dataset coefficients need at least one count");
    double inv_sum = 0.0;
    min_n_ = counts_.front();
    max_n_ = counts_.front();
    for (int n : counts_) {
        if (n < 1) throw validation_error("replicate counts must be >= 1");
        inv_sum += 1.0 / n;
        min_n_ = std::min(min_n_, n);
        max_n_ = std::max(max_n_, n);
    }
    n_tilde_ = static_cast<double>(counts_.size()) / inv_sum;
}

double DatasetCoefficients::delta_bar(double a) const {
    double acc = 0.0;
    for (int n : counts_) acc += delta_gamma(n, a).delta;
    return acc / static_cast<double>(counts_.size());
}

double DatasetCoefficients::gamma_bar(double a) const {
    double acc = 0.0;
    for (int n : counts_) acc += delta_gamma(n, a).gamma;
    return acc / static_cast<double>(counts_.size());
}

double DatasetCoefficients::centered_delta_sq(double p, double q) const {
    double acc = 0.0;
    for (int n : counts_) {
        const double d = 1.0 - delta_gamma(n, q).delta - delta_gamma(n, p).delta;
        acc += d * d;
    }
    return acc / static_cast<double>(counts_.size());
}

ScoreMoments score_moments(const ModelParams& params, int n, ScoreMethodAM method) {
    params.validate();
    if (n < 1) throw validation_error("score_moments: n must be >= 1");
    const double th = params.theta_T, p = params.p, q = params.q;

    ScoreMoments m;
    if (method == ScoreMethodAM::average) {
        m.cond_mean_given_t0 = p;
        m.cond_mean_given_t1 = 1.0 - q;
        m.mean = th * (1.0 - q) + (1.0 - th) * p;
        m.variance = th * (1.0 - th) * (1.0 - q - p) * (1.0 - q - p) +
                     (th * q * (1.0 - q) + (1.0 - th) * p * (1.0 - p)) / n;
    } else {
        const DeltaGamma dp = delta_gamma(n, p);
        const DeltaGamma dq = delta_gamma(n, q);
        const DeltaGamma d1q = delta_gamma(n, 1.0 - q);
        m.cond_mean_given_t0 = dp.delta;
        m.cond_mean_given_t1 = d1q.delta;
        m.mean = th * d1q.delta + (1.0 - th) * dp.delta;
        const double spread = 1.0 - dq.delta - dp.delta;
        m.variance = th * (1.0 - th) * spread * spread + th * d1q.gamma + (1.0 - th) * dp.gamma;
    }
    return m;
}

PrevalenceMoments prevalence_moments(const ModelParams& params, const ReplicateDataset& data,
                                     ScoreMethodAM method) {
    return prevalence_moments(params, DatasetCoefficients(data), method);
}

PrevalenceMoments prevalence_moments(const ModelParams& params, const DatasetCoefficients& coeffs,
                                     ScoreMethodAM method) {
    params.validate();
    const double th = params.theta_T, p = params.p, q = params.q;
    const double N = static_cast<double>(coeffs.size());
    PrevalenceMoments out;
    if (method == ScoreMethodAM::average) {
        out.expected_value = th * (1.0 - q) + (1.0 - th) * p;
        out.bias = p - th * (p + q);
        out.variance = (th * (1.0 - th) * (1.0 - q - p) * (1.0 - q - p) +
                        (th * q * (1.0 - q) + (1.0 - th) * p * (1.0 - p)) / coeffs.n_tilde()) /
                       N;
    } else {
        const double dbar_p = coeffs.delta_bar(p);
        const double dbar_q = coeffs.delta_bar(q);
        out.expected_value = th * (1.0 - dbar_q) + (1.0 - th) * dbar_p;
        out.bias = dbar_p - th * (dbar_p + dbar_q);
        out.variance = (th * (1.0 - th) * coeffs.centered_delta_sq(p, q) +
                        th * coeffs.gamma_bar(1.0 - q) + (1.0 - th) * coeffs.gamma_bar(p)) /
                       N;
    }
    return out;
}

BiasDominanceInterval bias_dominance_interval(double p, double q, const std::vector<int>& ns,
                                              double grid_step) {
    if (!(p > 0.0 && p < 0.5 && q > 0.0 && q < 0.5)) {
        throw validation_error("bias_dominance_interval requires p, q in (0,1/2)");
    }
    if (!(grid_step > 0.0)) throw validation_error("grid_step must be positive");

    DatasetCoefficients coeffs(ns);
    BiasDominanceInterval out;
    if (coeffs.all_at_most_two()) {
        out.biases_equal_everywhere = true;
        return out;
    }

    const double dbar_p = coeffs.delta_bar(p);
    const double dbar_q = coeffs.delta_bar(q);
    const auto bias_avg = [&](double th) { return p - th * (p + q); };
    const auto bias_med = [&](double th) { return dbar_p - th * (dbar_p + dbar_q); };
    // g > 0 exactly on the interior of J.
    const auto g = [&](double th) { return std::fabs(bias_med(th)) - std::fabs(bias_avg(th)); };

    const double center = p / (p + q);
    const double z_med = dbar_p / (dbar_p + dbar_q);
    if (std::fabs(z_med - center) < 1e-14) {
        // Both biases vanish at the same theta; J collapses to that point.
        out.lo = out.hi = center;
        return out;
    }

    const auto bisect = [&](double lo, double hi) {
        // g(lo) and g(hi) have opposite signs.
        double flo = g(lo);
        for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = g(mid);
            if ((flo > 0.0) == (fm > 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    };

    // Scan left from the center of J until g changes sign or the domain ends.
    double lo_edge = 0.0;
    bool found_left = false;
    for (double th = center; th > 0.0; th -= grid_step) {
        const double prev = std::max(th - grid_step, 0.0);
        if (g(prev) <= 0.0) {
            lo_edge = bisect(prev, th);
            found_left = true;
            break;
        }
    }
    if (!found_left) lo_edge = 0.0;

    double hi_edge = 1.0;
    bool found_right = false;
    for (double th = center; th < 1.0; th += grid_step) {
        const double next = std::min(th + grid_step, 1.0);
        if (g(next) <= 0.0) {
            hi_edge = bisect(th, next);
            found_right = true;
            break;
        }
    }
    if (!found_right) hi_edge = 1.0;

    out.lo = lo_edge;
    out.hi = hi_edge;
    return out;
}

}  // namespace binrep
