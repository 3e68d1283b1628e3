#include "quadrature_oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace binrep::testing {

namespace {

struct Axis {
    std::vector<double> node;
    std::vector<double> weight;
};

// Midpoint nodes over (lo, hi) weighted by an unnormalized Beta(a,b) density.
Axis beta_axis(double a, double b, double lo, double hi, int grid) {
    if (a < 1.0 || b < 1.0) {
        throw std::invalid_argument("oracle axis needs shape parameters >= 1");
    }
    Axis axis;
    const double h = (hi - lo) / grid;
    for (int j = 0; j < grid; ++j) {
        const double x = lo + (j + 0.5) * h;
        axis.node.push_back(x);
        axis.weight.push_back(std::pow(x, a - 1.0) * std::pow(1.0 - x, b - 1.0) * h);
    }
    return axis;
}

// Arcsine prior absorbed by theta = sin^2(pi u / 2).
Axis arcsine_axis(int grid) {
    Axis axis;
    const double h = 1.0 / grid;
    for (int j = 0; j < grid; ++j) {
        const double u = (j + 0.5) * h;
        const double s = std::sin(0.5 * M_PI * u);
        axis.node.push_back(s * s);
        axis.weight.push_back(h);
    }
    return axis;
}

}  // namespace

OracleResult quadrature_oracle(const ReplicateDataset& data, const PriorSpec& prior,
                               int grid_points, const std::vector<std::pair<int, int>>& predict_at) {
    const std::size_t N = data.size();
    if (N > 12) throw std::invalid_argument("oracle is exponential in N; use tiny datasets");

    const Axis theta_axis = (prior.a_T == 0.5 && prior.b_T == 0.5)
                                ? arcsine_axis(grid_points)
                                : beta_axis(prior.a_T, prior.b_T, 0.0, 1.0, grid_points);
    const Axis p_axis = beta_axis(prior.a_FP, prior.b_FP, 0.0, 0.5, grid_points);
    const Axis q_axis = beta_axis(prior.a_FN, prior.b_FN, 0.0, 0.5, grid_points);

    const std::size_t n_configs = std::size_t{1} << N;
    double z = 0.0, sum_theta = 0.0, sum_p = 0.0, sum_q = 0.0;
    std::vector<double> sum_t1(N, 0.0);
    std::vector<double> sum_pred(predict_at.size(), 0.0);

    // Per-axis caches of the per-individual emission terms.
    std::vector<std::vector<double>> neg_term(grid_points, std::vector<double>(N));
    std::vector<std::vector<double>> pos_term(grid_points, std::vector<double>(N));
    for (int j = 0; j < grid_points; ++j) {
        for (std::size_t i = 0; i < N; ++i) {
            const auto& rec = data[i];
            neg_term[j][i] = std::pow(p_axis.node[j], rec.s) *
                             std::pow(1.0 - p_axis.node[j], rec.n - rec.s);
            pos_term[j][i] = std::pow(1.0 - q_axis.node[j], rec.s) *
                             std::pow(q_axis.node[j], rec.n - rec.s);
        }
    }

    std::vector<double> f0(N), f1(N);
    for (int jt = 0; jt < grid_points; ++jt) {
        const double theta = theta_axis.node[jt];
        for (int jp = 0; jp < grid_points; ++jp) {
            for (int jq = 0; jq < grid_points; ++jq) {
                const double w_prior =
                    theta_axis.weight[jt] * p_axis.weight[jp] * q_axis.weight[jq];
                for (std::size_t i = 0; i < N; ++i) {
                    f0[i] = (1.0 - theta) * neg_term[jp][i];
                    f1[i] = theta * pos_term[jq][i];
                }
                double z_point = 0.0;
                std::vector<double> t1_point(N, 0.0);
                for (std::size_t cfg = 0; cfg < n_configs; ++cfg) {
                    double w = 1.0;
                    for (std::size_t i = 0; i < N; ++i) {
                        w *= (cfg >> i) & 1 ? f1[i] : f0[i];
                    }
                    z_point += w;
                    for (std::size_t i = 0; i < N; ++i) {
                        if ((cfg >> i) & 1) t1_point[i] += w;
                    }
                }
                const double wz = w_prior * z_point;
                z += wz;
                sum_theta += theta * wz;
                sum_p += p_axis.node[jp] * wz;
                sum_q += q_axis.node[jq] * wz;
                for (std::size_t i = 0; i < N; ++i) sum_t1[i] += w_prior * t1_point[i];
                for (std::size_t k = 0; k < predict_at.size(); ++k) {
                    const auto [n_new, s_new] = predict_at[k];
                    const double g1 = theta * std::pow(1.0 - q_axis.node[jq], s_new) *
                                      std::pow(q_axis.node[jq], n_new - s_new);
                    const double g0 = (1.0 - theta) * std::pow(p_axis.node[jp], s_new) *
                                      std::pow(1.0 - p_axis.node[jp], n_new - s_new);
                    sum_pred[k] += wz * g1 / (g1 + g0);
                }
            }
        }
    }

    OracleResult out;
    out.mean_theta = sum_theta / z;
    out.mean_p = sum_p / z;
    out.mean_q = sum_q / z;
    for (std::size_t i = 0; i < N; ++i) out.bayes_scores.push_back(sum_t1[i] / z);
    for (double v : sum_pred) out.predictive.push_back(v / z);
    return out;
}

}  // namespace binrep::testing
