#include "binrep/prediction.hpp"

#include <functional>
#include <sstream>

namespace binrep {

double predict_plugin(int n_new, int s_new, const ModelParams& params) {
    if (n_new < 0 || s_new < 0 || s_new > n_new) {
        throw validation_error("predict: need 0 <= s_new <= n_new");
    }
    return likelihood_score(n_new, s_new, params);
}

double predict_bayes(int n_new, int s_new, const PosteriorSample& sample) {
    if (n_new < 0 || s_new < 0 || s_new > n_new) {
        throw validation_error("predict: need 0 <= s_new <= n_new");
    }
    if (sample.draws() == 0) throw validation_error("predict: empty posterior sample");
    double acc = 0.0;
    for (std::size_t d = 0; d < sample.draws(); ++d) {
        ModelParams draw{sample.theta(d), sample.p(d), sample.q(d)};
        acc += likelihood_score(n_new, s_new, draw);
    }
    return acc / static_cast<double>(sample.draws());
}

namespace {

PredictionTable build_table(int n_max, const ThresholdPair& thresholds,
                            const std::function<double(int, int)>& predictor) {
    if (n_max < 1) throw validation_error("prediction_table: n_max must be >= 1");
    thresholds.validate();
    PredictionTable out;
    for (int n = 1; n <= n_max; ++n) {
        for (int s = 0; s <= n; ++s) {
            PredictionRow row;
            row.n = n;
            row.s = s;
            row.score = predictor(n, s);
            row.decision = apply_thresholds(row.score, Rational{}, thresholds);
            out.rows.push_back(row);
        }
    }
    return out;
}

}  // namespace

PredictionTable prediction_table(int n_max, const ModelParams& params,
                                 const ThresholdPair& thresholds) {
    return build_table(n_max, thresholds,
                       [&](int n, int s) { return predict_plugin(n, s, params); });
}

PredictionTable prediction_table(int n_max, const PosteriorSample& sample,
                                 const ThresholdPair& thresholds) {
    return build_table(n_max, thresholds,
                       [&](int n, int s) { return predict_bayes(n, s, sample); });
}

std::string to_csv(const PredictionTable& table) {
    std::ostringstream out;
    out.precision(17);
    out << "n,s,score,decision\n";
    for (const auto& row : table.rows) {
        out << row.n << ',' << row.s << ',' << row.score << ',';
        switch (row.decision) {
            case Decision::zero: out << "0"; break;
            case Decision::indecisive: out << "0.5"; break;
            case Decision::one: out << "1"; break;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace binrep
