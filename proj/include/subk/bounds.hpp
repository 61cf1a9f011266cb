#pragma once

namespace subk {

/*
 * Lower bounds on the sub-k projection P = sum_{n<k} p_n implied by a
 * measured g^(k) below g_min(k) = k!/k^k.
 *
 * Every bound depends on (k, g) only through R = g / g_min(k) in [0, 1].
 * The public functions take g (or g_tilde) and validate 0 < g <= g_min(k);
 * the *_at_ratio variants take R directly and stay usable for k large
 * enough that g_min(k) underflows.
 *
 * The largest super-k weight Q_max compatible with g solves
 *
 *     1 - Q = k/(k-1) * [ (Q / R)^(1/k) - Q ].
 *
 * With u = Q^(1/k) and c = R^(-1/k) this is the concave polynomial equation
 * k c u - u^k - (k-1) = 0 on u in (0, 1], bracketed by
 * [(k-1)/(k c), min(1, 1/c)] and solved by bisection plus Newton polish.
 */

/// Q_max for 0 < g <= g_min(k); exactly 1 at g = g_min(k).
double solve_q_max(int k, double g);
double q_max_at_ratio(int k, double R);

/// P_min = 1 - Q_max.
double p_min(int k, double g);
double p_min_at_ratio(int k, double R);

/// (1 - p0) Q_max(k, g_tilde) with g_tilde = (1 - p0)^(k-1) g.
double q_max_with_vacuum(int k, double g, double p0);

/// Lower bound on P_tilde / Q, a function of g_tilde alone:
/// k/(k-1) [ (g_min / (g_tilde Q_max^(k-1)))^(1/k) - 1 ].
double ratio_bound(int k, double g_tilde);
double ratio_bound_at_ratio(int k, double R);

/// Lower bound on P obtained from the ratio bound rho via P >= rho / (1 + rho),
/// written as (X - 1) / (X - 1/k) with X = (g_min / (g_tilde Q_max^(k-1)))^(1/k).
double p_opt(int k, double g_tilde);
double p_opt_at_ratio(int k, double R);

/// Principal branch W0 on [-1/e, 0]. Throws OutOfDomain outside it (a slack
/// of 1e-15 below -1/e is clamped to the branch point).
double lambert_w0(double x);

/// Large-k limit of P_min: 1 + W0(-R/e), R in [0, 1].
double large_k_p(double R);

/// Large-k limit of the ratio bound: P / (1 - P), R in (0, 1].
double large_k_ratio(double R);

struct BoundReport {
    int k = 2;
    double g_input = 0.0;
    double p0 = 0.0;
    double g_tilde = 0.0;
    double R = 0.0;
    double q_max = 1.0;
    double p_min = 0.0;
    double p_opt = 0.0;
    double ratio_bound = 0.0;
    double large_k_p = 0.0;
};

/// Every bound for a measured g with assumed vacuum p0 (0 if unknown).
/// Needs g > 0, p0 in [0, 1) and g_tilde <= g_min(k).
BoundReport bound_report(int k, double g, double p0 = 0.0);

}  // namespace subk
