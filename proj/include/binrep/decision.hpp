#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "binrep/binomial_coeffs.hpp"
#include "binrep/dataset.hpp"
#include "binrep/scoring.hpp"

namespace binrep {

// Loss table for three-way decisions on a binary truth:
//   l(0,1/2)=a  l(0,1)=b  l(1,0)=c  l(1,1/2)=d
struct LossSpec {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    void validate() const;
    double loss(int truth, double decision) const;
    static LossSpec symmetric(double indecision_cost);  // b=c=1, a=d=cost
};

struct ThresholdPair {
    double v_L = 0.5;
    double v_U = 0.5;

    void validate() const;  // 0 < v_L <= v_U < 1
    // The hypothesis under which the average/median comparisons hold.
    bool satisfies_h3() const { return v_L <= 0.5 && 0.5 <= v_U; }
};

enum class Decision : std::uint8_t { zero = 0, indecisive = 1, one = 2 };

double decision_value(Decision d);

// Exact three-way comparison of the rational num/den with a double.
// Returns -1, 0 or +1 for <, ==, >. Requires den in (0, 2^21).
int compare_ratio(std::int64_t num, std::int64_t den, double x);

// Lemma-style optimal thresholds for the loss table, when the indecision
// response can be optimal; nullopt otherwise.
std::optional<ThresholdPair> optimal_thresholds(const LossSpec& loss);

// The three risks of deciding 0, 1/2, 1 when P(T=1) = theta.
std::array<double, 3> decision_risks(const LossSpec& loss, double theta);
// Argmin of the risks, ties resolved to the indecision response.
Decision best_decision(const LossSpec& loss, double theta);

Decision apply_thresholds(double score, const Rational& exact, const ThresholdPair& thr);

struct Classification {
    Method method = Method::average;
    ThresholdPair thresholds;
    std::vector<Decision> decisions;
};

Classification classify(const ScoreVector& scores, const ThresholdPair& thresholds);

enum class RiskMode { total, mean };

double empirical_risk(const Classification& classification, const std::vector<int>& truth,
                      const LossSpec& loss, RiskMode mode);

// counts[truth][decision]: 2x3 table over truth {0,1} and decision {0,1/2,1}.
struct ConfusionTable {
    std::array<std::array<int, 3>, 2> counts{{{0, 0, 0}, {0, 0, 0}}};
};

ConfusionTable confusion_table(const Classification& classification,
                               const std::vector<int>& truth);

std::vector<int> truth_vector(const ReplicateDataset& data);

struct SensSpec {
    double sensitivity = 0.0;
    double specificity = 0.0;
};

// Exact sensitivity/specificity of the thresholded average or median score
// for an individual with n replicates, from the binomial model.
SensSpec sensitivity_specificity(const ModelParams& params, int n, const ThresholdPair& thr,
                                 ScoreMethodAM method);

// Decision costs where the total l_a-risk of the average method jumps for
// this dataset: the observed values of s/n and 1 - s/n inside (0, 1/2),
// as reduced fractions.
std::vector<std::pair<std::int64_t, std::int64_t>> average_risk_breakpoints(
    const ReplicateDataset& data);

}  // namespace binrep
