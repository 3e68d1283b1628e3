#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "binrep/dataset.hpp"
#include "binrep/mcmc.hpp"
#include "binrep/scoring.hpp"

namespace binrep {

// Generative model: T ~ Ber(theta_T), n ~ U{n_min..n_max}, S ~ Bin(n, rate).
struct SimConfig {
    double theta_T = 0.4;
    double p = 0.1;
    double q = 0.05;
    int n_individuals = 200;
    int n_min = 2;
    int n_max = 6;
    std::uint64_t seed = 0;

    void validate() const;
};

ReplicateDataset simulate_dataset(const SimConfig& cfg);

// Reader-panel simulation: a fixed block of negative then positive patients,
// each read by every radiologist; per radiologist, exact numbers of false
// calls placed by weighted draws without replacement. Three radiologists can
// carry the standard missing-exam pattern.
struct MammoMissingSpec {
    int radiologist = 0;
    int missing_positive = 0;
    int missing_negative = 0;
};

struct MammoConfig {
    int n_negative = 84;
    int n_positive = 64;
    int n_radiologists = 110;
    std::vector<double> fp_rates;  // per radiologist; filled with 0.22 when empty
    std::vector<double> fn_rates;  // per radiologist; filled with 0.13 when empty
    std::vector<double> weights;   // per patient; filled with 1 when empty
    bool apply_missingness = true;
    std::vector<MammoMissingSpec> missingness = {{0, 1, 0}, {1, 3, 5}, {2, 0, 1}};
    std::uint64_t seed = 0;

    int patients() const { return n_negative + n_positive; }
    void validate() const;
};

RawReplicateTable simulate_mammography(const MammoConfig& cfg);

struct ExperimentRow {
    double x = 0.0;  // theta for the bias experiment, decision cost for risk
    Method method = Method::average;
    int rep = 0;
    double value = 0.0;  // estimate, or mean l_a-risk
};

struct SummaryRow {
    double x = 0.0;
    Method method = Method::average;
    double median = 0.0;
    double q40 = 0.0;
    double q60 = 0.0;
};

struct ExperimentResult {
    std::vector<ExperimentRow> rows;
    std::vector<SummaryRow> summary;
};

struct ExperimentOptions {
    EmOptions em;
    GibbsOptions gibbs;
    std::uint64_t seed = 0;
};

// One row per (theta, method, rep) holding the estimate; summary rows hold
// median and [0.4, 0.6] quantiles of the bias.
ExperimentResult run_bias_experiment(const std::vector<double>& theta_grid, int reps,
                                     const SimConfig& cfg_base, const std::vector<Method>& methods,
                                     const ExperimentOptions& opts);

// One row per (a, method, rep) holding the mean l_a-risk at thresholds
// (a, 1-a); summary rows hold median and [0.4, 0.6] quantiles of the risk.
ExperimentResult run_risk_experiment(const std::vector<double>& a_grid, int reps,
                                     const SimConfig& cfg_base, const std::vector<Method>& methods,
                                     const ExperimentOptions& opts);

std::string experiment_rows_to_csv(const ExperimentResult& result, const std::string& x_name,
                                   const std::string& value_name);
std::string experiment_summary_to_csv(const ExperimentResult& result, const std::string& x_name);

// Reader-panel prediction protocol: per repetition, simulate a panel
// dataset, fit on 90% of the patients, predict the remaining 10%, and sum
// mean l_a-risks of the thresholded predictions over the a grid.
struct PredictionExperimentRow {
    int rep = 0;
    double risk_average = 0.0;
    double risk_median = 0.0;
    double risk_map = 0.0;
    double risk_bayes = 0.0;
};

std::vector<PredictionExperimentRow> run_prediction_experiment(
    int reps, const MammoConfig& cfg_base, const std::vector<double>& a_grid,
    const ExperimentOptions& opts);

}  // namespace binrep
