#pragma once

// Small numeric kernels used across the library: log binomial coefficients,
// binomial pmf in log space, and the regularized incomplete beta function
// with its inverse (the Beta CDF and quantile).

namespace binrep::math {

double log_choose(int n, int k);

// P(Bin(n, a) = k), computed through logarithms for stability.
double binom_pmf(int n, int k, double a);

// log(exp(a) + exp(b)) without overflow.
double log_sum_exp(double a, double b);

// Regularized incomplete beta function I_x(a, b) = P(Beta(a,b) <= x).
// Continued-fraction evaluation (Lentz), accurate to ~1e-14 relative.
double reg_inc_beta(double a, double b, double x);

// Inverse of reg_inc_beta in x: smallest x with I_x(a,b) = y.
// Newton iterations with a bisection safeguard.
double reg_inc_beta_inv(double a, double b, double y);

inline double beta_cdf(double a, double b, double x) { return reg_inc_beta(a, b, x); }
inline double beta_quantile(double a, double b, double u) { return reg_inc_beta_inv(a, b, u); }

}  // namespace binrep::math
