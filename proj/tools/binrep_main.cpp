// Command-line front end: scoring, classification, estimation, prediction
// and simulation of binary replicate datasets.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "binrep/csv_io.hpp"
#include "binrep/decision.hpp"
#include "binrep/estimation.hpp"
#include "binrep/mcmc.hpp"
#include "binrep/prediction.hpp"
#include "binrep/simulation.hpp"

namespace {

using namespace binrep;

struct CommonArgs {
    std::string input;
    std::string output;
    std::string method = "average";
    std::string prior = "default";
    std::optional<std::uint64_t> seed;
    int restarts = 20;
    int chains = 4;
    int iters = 5000;
    int burnin = 1000;
    std::optional<double> vl, vu;
    std::string loss;  // "a,b,c,d"
    std::string format = "sufficient";
};

std::uint64_t require_seed(const CommonArgs& args) {
    if (!args.seed) {
        throw CLI::ValidationError("--seed", "a seed is required for stochastic methods");
    }
    std::cerr << "# seed: " << *args.seed << "\n";
    return *args.seed;
}

ReplicateDataset read_input(const CommonArgs& args) {
    if (args.input.empty()) throw CLI::ValidationError("--input", "an input CSV is required");
    const CsvFormat fmt = args.format == "wide" ? CsvFormat::wide : CsvFormat::sufficient;
    return load_csv(args.input, fmt);
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw validation_error("cannot write '" + path + "'");
    out << text;
}

PriorSpec parse_prior(const std::string& spec) {
    if (spec == "default") return default_prior();
    if (spec == "misguided") return misguided_prior();
    std::ifstream in(spec);
    if (!in) throw validation_error("cannot open prior file '" + spec + "'");
    nlohmann::json j;
    in >> j;
    PriorSpec prior;
    prior.a_T = j.at("a_T").get<double>();
    prior.b_T = j.at("b_T").get<double>();
    prior.a_FP = j.at("a_FP").get<double>();
    prior.b_FP = j.at("b_FP").get<double>();
    prior.a_FN = j.at("a_FN").get<double>();
    prior.b_FN = j.at("b_FN").get<double>();
    prior.validate();
    return prior;
}

LossSpec parse_loss(const std::string& text) {
    std::stringstream ss(text);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    if (vals.size() != 4) throw validation_error("--loss expects four values a,b,c,d");
    LossSpec loss{vals[0], vals[1], vals[2], vals[3]};
    loss.validate();
    return loss;
}

ThresholdPair resolve_thresholds(const CommonArgs& args) {
    if (args.vl && args.vu) {
        ThresholdPair thr{*args.vl, *args.vu};
        thr.validate();
        return thr;
    }
    if (!args.loss.empty()) {
        const LossSpec loss = parse_loss(args.loss);
        if (const auto thr = optimal_thresholds(loss)) {
            std::cerr << "# thresholds: v_L=" << thr->v_L << " v_U=" << thr->v_U << "\n";
            return *thr;
        }
        const double cut = loss.b / (loss.b + loss.c);
        std::cerr << "indecision never optimal; using v_L = v_U = " << cut << "\n";
        return ThresholdPair{cut, cut};
    }
    throw CLI::ValidationError("--vl/--vu", "provide thresholds or a loss table");
}

struct Scored {
    ScoreVector scores;
    std::optional<EstimateSet> fitted;  // parameter estimates for map/bayes
    std::optional<PosteriorSample> sample;
};

Scored compute_scores(const ReplicateDataset& data, const CommonArgs& args) {
    Scored out;
    const Method method = parse_method(args.method);
    switch (method) {
        case Method::average:
            out.scores = score_average(data);
            break;
        case Method::median:
            out.scores = score_median(data);
            break;
        case Method::map: {
            EmOptions opts;
            opts.restarts = args.restarts;
            opts.seed = require_seed(args);
            const auto fit = em_fit(data, opts);
            out.scores = score_map(data, fit);
            EstimateSet est;
            est.method = Method::map;
            est.theta_hat = fit.params.theta_T;
            est.p_hat = fit.params.p;
            est.q_hat = fit.params.q;
            out.fitted = est;
            break;
        }
        case Method::bayes: {
            GibbsOptions opts;
            opts.chains = args.chains;
            opts.iters = args.iters;
            opts.burnin = args.burnin;
            opts.seed = require_seed(args);
            out.sample = gibbs_run(data, parse_prior(args.prior), opts);
            const auto diag = split_rhat(*out.sample);
            if (diag.any_above(1.05)) {
                std::cerr << "warning: split R-hat above 1.05 (theta " << diag.theta << ", p "
                          << diag.p << ", q " << diag.q << ")\n";
            }
            const auto summary = summarize(*out.sample);
            out.scores = summary.bayes_scores;
            out.fitted = estimates_from_posterior(summary);
            break;
        }
    }
    return out;
}

std::string decision_text(Decision d) {
    switch (d) {
        case Decision::zero: return "0";
        case Decision::indecisive: return "0.5";
        case Decision::one: return "1";
    }
    return "0.5";
}

void write_params_sidecar(const CommonArgs& args, const Scored& scored) {
    if (!scored.fitted) return;
    const std::string text = to_json_string(*scored.fitted) + "\n";
    if (args.output.empty() || args.output == "-") {
        std::cerr << text;
    } else {
        write_text(args.output + ".params.json", text);
    }
}

int cmd_score(const CommonArgs& args) {
    const auto data = read_input(args);
    const auto scored = compute_scores(data, args);
    std::ostringstream out;
    out.precision(17);
    out << "id,n,s,score\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
        out << data[i].id << ',' << data[i].n << ',' << data[i].s << ','
            << scored.scores.values[i] << '\n';
    }
    write_text(args.output, out.str());
    write_params_sidecar(args, scored);
    return 0;
}

int cmd_classify(const CommonArgs& args) {
    const auto data = read_input(args);
    const auto thresholds = resolve_thresholds(args);
    const auto scored = compute_scores(data, args);
    const auto cls = classify(scored.scores, thresholds);

    std::ostringstream out;
    out.precision(17);
    out << "id,score,decision\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
        out << data[i].id << ',' << scored.scores.values[i] << ','
            << decision_text(cls.decisions[i]) << '\n';
    }
    write_text(args.output, out.str());

    if (data.all_status_present()) {
        const auto truth = truth_vector(data);
        const auto table = confusion_table(cls, truth);
        std::ostringstream report;
        report << "truth,decision_0,decision_half,decision_1\n";
        for (int t = 0; t < 2; ++t) {
            report << t;
            for (int d = 0; d < 3; ++d) report << ',' << table.counts[t][d];
            report << '\n';
        }
        if (!args.loss.empty()) {
            const LossSpec loss = parse_loss(args.loss);
            report << "risk_total," << empirical_risk(cls, truth, loss, RiskMode::total) << '\n';
            report << "risk_mean," << empirical_risk(cls, truth, loss, RiskMode::mean) << '\n';
        }
        std::cerr << report.str();
    }
    return 0;
}

int cmd_estimate(const CommonArgs& args) {
    const auto data = read_input(args);
    const auto scored = compute_scores(data, args);
    EstimateSet est;
    if (parse_method(args.method) == Method::bayes) {
        est = *scored.fitted;
    } else {
        est = estimate(data, scored.scores);
    }
    write_text(args.output, to_json_string(est) + "\n");
    return 0;
}

int cmd_predict(const CommonArgs& args, bool table_mode, int n_max, int n_new, int s_new) {
    const auto data = read_input(args);
    const auto thresholds = resolve_thresholds(args);
    const auto scored = compute_scores(data, args);
    const Method method = parse_method(args.method);

    if (table_mode) {
        PredictionTable table;
        if (method == Method::bayes) {
            table = prediction_table(n_max, *scored.sample, thresholds);
        } else {
            const auto est = estimate(data, scored.scores);
            table = prediction_table(n_max, ModelParams{est.theta_hat, est.p_hat, est.q_hat},
                                     thresholds);
        }
        write_text(args.output, to_csv(table));
        return 0;
    }

    double score;
    if (method == Method::bayes) {
        score = predict_bayes(n_new, s_new, *scored.sample);
    } else {
        const auto est = estimate(data, scored.scores);
        score = predict_plugin(n_new, s_new, ModelParams{est.theta_hat, est.p_hat, est.q_hat});
    }
    const Decision decision = apply_thresholds(score, Rational{}, thresholds);
    std::ostringstream out;
    out.precision(17);
    out << "n,s,score,decision\n"
        << n_new << ',' << s_new << ',' << score << ',' << decision_text(decision) << '\n';
    write_text(args.output, out.str());
    return 0;
}

int cmd_simulate(const CommonArgs& args, const SimConfig& cfg_in, bool mammo, int n_radiologists) {
    if (mammo) {
        MammoConfig cfg;
        cfg.n_radiologists = n_radiologists;
        cfg.seed = require_seed(args);
        const auto table = simulate_mammography(cfg);
        write_text(args.output, to_wide_csv(table));
        return 0;
    }
    SimConfig cfg = cfg_in;
    cfg.seed = require_seed(args);
    const auto data = simulate_dataset(cfg);
    write_text(args.output, to_sufficient_csv(data));
    return 0;
}

std::vector<double> parse_grid(const std::string& text) {
    // "lo:hi:step" or a comma-separated list
    if (text.find(':') != std::string::npos) {
        std::stringstream ss(text);
        std::string cell;
        std::vector<double> parts;
        while (std::getline(ss, cell, ':')) parts.push_back(std::stod(cell));
        if (parts.size() != 3 || parts[2] <= 0.0) {
            throw validation_error("grid must be lo:hi:step");
        }
        std::vector<double> grid;
        for (double x = parts[0]; x <= parts[1] + 1e-12; x += parts[2]) grid.push_back(x);
        return grid;
    }
    std::stringstream ss(text);
    std::string cell;
    std::vector<double> grid;
    while (std::getline(ss, cell, ',')) grid.push_back(std::stod(cell));
    return grid;
}

std::vector<Method> parse_methods(const std::string& text) {
    std::vector<Method> methods;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) methods.push_back(parse_method(cell));
    if (methods.empty()) throw validation_error("no methods selected");
    return methods;
}

int cmd_experiment(const CommonArgs& args, const std::string& mode, const std::string& grid_text,
                   int reps, const std::string& methods_text, const SimConfig& cfg_base) {
    ExperimentOptions opts;
    opts.seed = require_seed(args);
    opts.em.restarts = args.restarts;
    opts.gibbs.chains = args.chains;
    opts.gibbs.iters = args.iters;
    opts.gibbs.burnin = args.burnin;
    const auto methods = parse_methods(methods_text);

    ExperimentResult result;
    std::string x_name, value_name;
    if (mode == "bias") {
        result = run_bias_experiment(parse_grid(grid_text), reps, cfg_base, methods, opts);
        x_name = "theta";
        value_name = "estimate";
    } else if (mode == "risk") {
        result = run_risk_experiment(parse_grid(grid_text), reps, cfg_base, methods, opts);
        x_name = "a";
        value_name = "risk";
    } else {
        throw validation_error("experiment mode must be 'bias' or 'risk'");
    }

    write_text(args.output, experiment_rows_to_csv(result, x_name, value_name));
    const std::string summary_path =
        args.output.empty() || args.output == "-" ? "" : args.output + ".summary.csv";
    write_text(summary_path, experiment_summary_to_csv(result, x_name));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scoring, classification and estimation for binary technical replicates"};
    app.require_subcommand(1);

    CommonArgs args;
    SimConfig sim_cfg;
    bool predict_table = false, mammo = false;
    int n_max = 6, n_new = 1, s_new = 0, reps = 300, n_radiologists = 110;
    std::string experiment_mode, grid_text, methods_text = "average,median,map,bayes";

    const auto add_common = [&](CLI::App* cmd, bool with_input) {
        if (with_input) {
            cmd->add_option("--input", args.input, "input CSV path");
            cmd->add_option("--format", args.format, "input format: sufficient|wide")
                ->check(CLI::IsMember({"sufficient", "wide"}));
        }
        cmd->add_option("--output", args.output, "output path (default stdout)");
        cmd->add_option("--seed", args.seed, "RNG seed (required for stochastic paths)");
    };
    const auto add_method = [&](CLI::App* cmd) {
        cmd->add_option("--method", args.method, "average|median|map|bayes")
            ->check(CLI::IsMember({"average", "median", "map", "bayes"}));
        cmd->add_option("--prior", args.prior, "default|misguided|<file.json>");
        cmd->add_option("--restarts", args.restarts, "EM restarts");
        cmd->add_option("--chains", args.chains, "MCMC chains");
        cmd->add_option("--iters", args.iters, "MCMC iterations per chain");
        cmd->add_option("--burnin", args.burnin, "MCMC burn-in iterations");
    };
    const auto add_thresholds = [&](CLI::App* cmd) {
        cmd->add_option("--vl", args.vl, "lower threshold v_L");
        cmd->add_option("--vu", args.vu, "upper threshold v_U");
        cmd->add_option("--loss", args.loss, "loss table a,b,c,d");
    };

    auto* score = app.add_subcommand("score", "per-individual scores");
    add_common(score, true);
    add_method(score);

    auto* classify_cmd = app.add_subcommand("classify", "three-way decisions");
    add_common(classify_cmd, true);
    add_method(classify_cmd);
    add_thresholds(classify_cmd);

    auto* estimate_cmd = app.add_subcommand("estimate", "prevalence and error rates");
    add_common(estimate_cmd, true);
    add_method(estimate_cmd);

    auto* predict = app.add_subcommand("predict", "score a new individual");
    add_common(predict, true);
    add_method(predict);
    add_thresholds(predict);
    predict->add_flag("--table", predict_table, "emit the full (n, s) table");
    predict->add_option("--nmax", n_max, "largest n for --table");
    predict->add_option("--n", n_new, "replicate count of the new individual");
    predict->add_option("--s", s_new, "positive replicates of the new individual");

    auto* simulate = app.add_subcommand("simulate", "draw a synthetic dataset");
    add_common(simulate, false);
    simulate->add_option("--theta", sim_cfg.theta_T, "prevalence");
    simulate->add_option("--p", sim_cfg.p, "false-positivity rate");
    simulate->add_option("--q", sim_cfg.q, "false-negativity rate");
    simulate->add_option("--N", sim_cfg.n_individuals, "number of individuals");
    simulate->add_option("--nmin", sim_cfg.n_min, "smallest replicate count");
    simulate->add_option("--nmax", sim_cfg.n_max, "largest replicate count");
    simulate->add_flag("--mammo", mammo, "reader-panel simulation (wide CSV)");
    simulate->add_option("--radiologists", n_radiologists, "panel size for --mammo");

    auto* experiment = app.add_subcommand("experiment", "bias / risk experiment tables");
    add_common(experiment, false);
    add_method(experiment);
    experiment->add_option("mode", experiment_mode, "bias|risk")->required();
    experiment->add_option("--theta", grid_text, "theta grid lo:hi:step (bias mode)");
    experiment->add_option("--a", grid_text, "decision-cost grid lo:hi:step (risk mode)");
    experiment->add_option("--reps", reps, "repetitions per grid point");
    experiment->add_option("--methods", methods_text, "comma-separated method list");
    experiment->add_option("--N", sim_cfg.n_individuals, "individuals per dataset");
    experiment->add_option("--p", sim_cfg.p, "false-positivity rate");
    experiment->add_option("--q", sim_cfg.q, "false-negativity rate");
    experiment->add_option("--sim-theta", sim_cfg.theta_T, "prevalence (risk mode)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (score->parsed()) return cmd_score(args);
        if (classify_cmd->parsed()) return cmd_classify(args);
        if (estimate_cmd->parsed()) return cmd_estimate(args);
        if (predict->parsed()) return cmd_predict(args, predict_table, n_max, n_new, s_new);
        if (simulate->parsed()) return cmd_simulate(args, sim_cfg, mammo, n_radiologists);
        if (experiment->parsed()) {
            if (grid_text.empty()) grid_text = experiment_mode == "bias" ? "0.05:0.5:0.05" : "0.1:0.5:0.02";
            return cmd_experiment(args, experiment_mode, grid_text, reps, methods_text, sim_cfg);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
