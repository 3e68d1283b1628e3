#include "binrep/decision.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "binrep/special_functions.hpp"

namespace binrep {

void LossSpec::validate() const {
    if (!(a > 0.0 && b > 0.0 && c > 0.0 && d > 0.0)) {
        throw validation_error("loss constants a, b, c, d must be positive");
    }
}

double LossSpec::loss(int truth, double decision) const {
    if (truth == 0) {
        if (decision == 0.0) return 0.0;
        if (decision == 0.5) return a;
        return b;
    }
    if (decision == 0.0) return c;
    if (decision == 0.5) return d;
    return 0.0;
}

LossSpec LossSpec::symmetric(double indecision_cost) {
    return LossSpec{indecision_cost, 1.0, 1.0, indecision_cost};
}

void ThresholdPair::validate() const {
    if (!(0.0 < v_L && v_L <= v_U && v_U < 1.0)) {
        throw validation_error("thresholds must satisfy 0 < v_L <= v_U < 1");
    }
}

double decision_value(Decision d) {
    switch (d) {
        case Decision::zero: return 0.0;
        case Decision::indecisive: return 0.5;
        case Decision::one: return 1.0;
    }
    return 0.5;
}

int compare_ratio(std::int64_t num, std::int64_t den, double x) {
    if (den <= 0 || den >= (std::int64_t{1} << 21) || num < 0 || num > den) {
        throw validation_error("compare_ratio: fraction out of supported range");
    }
    if (std::isnan(x)) throw validation_error("compare_ratio: NaN threshold");
    if (x <= 0.0) return num == 0 ? (x == 0.0 ? 0 : 1) : 1;
    if (x >= 1.0) return num == den ? (x == 1.0 ? 0 : -1) : -1;
    if (num == 0) return -1;  // 0 < x < 1

    // x = m * 2^(-E) exactly, with m in [2^52, 2^53) and E >= 53.
    int exp2 = 0;
    const double frac = std::frexp(x, &exp2);
    const auto m = static_cast<std::int64_t>(std::ldexp(frac, 53));
    const std::int64_t E = 53 - exp2;
    if (E >= 75) {
        // x < 2^-21 <= num/den; the fraction is the larger.
        return 1;
    }
    const __int128 lhs = static_cast<__int128>(num) << E;
    const __int128 rhs = static_cast<__int128>(m) * den;
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
}

std::optional<ThresholdPair> optimal_thresholds(const LossSpec& loss) {
    loss.validate();
    const double slope = loss.d - loss.a;
    const double crossing = loss.b * loss.c / (loss.b + loss.c);
    const bool admits_indecision =
        crossing > loss.a + slope * loss.b / (loss.b + loss.c) && -loss.b < slope && slope < loss.c;
    if (!admits_indecision) return std::nullopt;
    ThresholdPair thr;
    thr.v_L = loss.a / (loss.c - slope);
    thr.v_U = (loss.b - loss.a) / (slope + loss.b);
    return thr;
}

std::array<double, 3> decision_risks(const LossSpec& loss, double theta) {
    return {loss.c * theta, loss.a + (loss.d - loss.a) * theta, loss.b * (1.0 - theta)};
}

Decision best_decision(const LossSpec& loss, double theta) {
    const auto r = decision_risks(loss, theta);
    const double lowest = std::min({r[0], r[1], r[2]});
    if (r[1] == lowest) return Decision::indecisive;
    return r[0] == lowest ? Decision::zero : Decision::one;
}

Decision apply_thresholds(double score, const Rational& exact, const ThresholdPair& thr) {
    if (exact.exact()) {
        if (compare_ratio(exact.num, exact.den, thr.v_L) < 0) return Decision::zero;
        if (compare_ratio(exact.num, exact.den, thr.v_U) > 0) return Decision::one;
        return Decision::indecisive;
    }
    if (score < thr.v_L) return Decision::zero;
    if (score > thr.v_U) return Decision::one;
    return Decision::indecisive;
}

Classification classify(const ScoreVector& scores, const ThresholdPair& thresholds) {
    thresholds.validate();
    Classification out;
    out.method = scores.method;
    out.thresholds = thresholds;
    out.decisions.reserve(scores.size());
    const bool has_exact = scores.exact.size() == scores.values.size();
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const Rational r = has_exact ? scores.exact[i] : Rational{};
        out.decisions.push_back(apply_thresholds(scores.values[i], r, thresholds));
    }
    return out;
}

double empirical_risk(const Classification& classification, const std::vector<int>& truth,
                      const LossSpec& loss, RiskMode mode) {
    if (truth.size() != classification.decisions.size()) {
        throw validation_error("empirical_risk: truth vector length mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        acc += loss.loss(truth[i], decision_value(classification.decisions[i]));
    }
    if (mode == RiskMode::mean) acc /= static_cast<double>(truth.size());
    return acc;
}

ConfusionTable confusion_table(const Classification& classification,
                               const std::vector<int>& truth) {
    if (truth.size() != classification.decisions.size()) {
        throw validation_error("confusion_table: truth vector length mismatch");
    }
    ConfusionTable out;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] != 0 && truth[i] != 1) {
            throw validation_error("confusion_table: truth values must be 0 or 1");
        }
        const int col = static_cast<int>(classification.decisions[i]);
        ++out.counts[truth[i]][col];
    }
    return out;
}

std::vector<int> truth_vector(const ReplicateDataset& data) {
    std::vector<int> out;
    out.reserve(data.size());
    std::vector<std::string> missing;
    for (const auto& rec : data.individuals()) {
        if (!rec.status) {
            missing.push_back(rec.id);
        } else {
            out.push_back(*rec.status);
        }
    }
    if (!missing.empty()) {
        std::string ids;
        for (const auto& id : missing) {
            if (!ids.empty()) ids += ", ";
            ids += id;
        }
        throw validation_error("status missing for: " + ids);
    }
    return out;
}

SensSpec sensitivity_specificity(const ModelParams& params, int n, const ThresholdPair& thr,
                                 ScoreMethodAM method) {
    params.validate();
    thr.validate();
    if (n < 1) throw validation_error("sensitivity_specificity: n must be >= 1");

    SensSpec out;
    for (int s = 0; s <= n; ++s) {
        bool decide_one, decide_zero;
        if (method == ScoreMethodAM::average) {
            decide_one = compare_ratio(s, n, thr.v_U) > 0;
            decide_zero = compare_ratio(s, n, thr.v_L) < 0;
        } else {
            decide_one = 2 * s > n;
            decide_zero = 2 * s < n;
        }
        if (decide_one) out.sensitivity += math::binom_pmf(n, s, 1.0 - params.q);
        if (decide_zero) out.specificity += math::binom_pmf(n, s, params.p);
    }
    return out;
}

std::vector<std::pair<std::int64_t, std::int64_t>> average_risk_breakpoints(
    const ReplicateDataset& data) {
    std::set<std::pair<std::int64_t, std::int64_t>> found;
    for (const auto& rec : data.individuals()) {
        std::int64_t num = rec.s, den = rec.n;
        if (2 * num > den) num = den - num;  // reflect s/n > 1/2 to 1 - s/n
        if (num == 0 || 2 * num == den) continue;
        const std::int64_t g = std::gcd(num, den);
        found.emplace(num / g, den / g);
    }
    return {found.begin(), found.end()};
}

}  // namespace binrep
