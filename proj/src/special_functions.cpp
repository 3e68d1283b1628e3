#include "binrep/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "binrep/dataset.hpp"

namespace binrep::math {

double log_choose(int n, int k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double binom_pmf(int n, int k, double a) {
    if (k < 0 || k > n) return 0.0;
    if (a <= 0.0) return k == 0 ? 1.0 : 0.0;
    if (a >= 1.0) return k == n ? 1.0 : 0.0;
    return std::exp(log_choose(n, k) + k * std::log(a) + (n - k) * std::log1p(-a));
}

double log_sum_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double m = a > b ? a : b;
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_cont_frac(double a, double b, double x) {
    constexpr int kMaxIter = 10000;  // huge symmetric shapes need ~sqrt(max(a,b))
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw numerical_error("incomplete beta continued fraction did not converge");
}

}  // namespace

double reg_inc_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw numerical_error("incomplete beta requires a, b > 0");
    }
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cont_frac(a, b, x) / a;
    }
    return 1.0 - front * beta_cont_frac(b, a, 1.0 - x) / b;
}

double reg_inc_beta_inv(double a, double b, double y) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw numerical_error("incomplete beta inverse requires a, b > 0");
    }
    if (y <= 0.0) return 0.0;
    if (y >= 1.0) return 1.0;

    double lo = 0.0, hi = 1.0;
    double x = a / (a + b);  // mean as starting point
    const double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    for (int iter = 0; iter < 200; ++iter) {
        const double f = reg_inc_beta(a, b, x) - y;
        if (f > 0.0) {
            hi = x;
        } else if (f < 0.0) {
            lo = x;
        } else {
            return x;
        }
        // Newton step on f; pdf in log form to survive extreme shapes.
        const double log_pdf = (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_beta;
        double step = f / std::exp(log_pdf);
        double next = x - step;
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::fabs(next - x) <= 1e-16 * (1.0 + std::fabs(x))) {
            return next;
        }
        x = next;
    }
    return x;
}

}  // namespace binrep::math
