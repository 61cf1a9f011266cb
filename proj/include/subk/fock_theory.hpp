#pragma once

#include <utility>
#include <vector>

namespace subk {

/// g^(k) of the Fock state |n>: prod_{j<k} (n-j)/n, or 0 for n < k.
double g_fock(int k, long long n);

/// g_min(k) = k!/k^k, the Fock-state value g^(k)[|k>]. Evaluated as a ratio
/// product; underflows to 0 for k beyond ~740, use log_g_min there.
double g_min(int k);

/// log(k!/k^k) as a sum of log(j/k); finite for every k >= 2.
double log_g_min(int k);

/// g_fock(k, n) / g_fock(k, n + 1) for n >= k. Lies in (0, 1] and increases
/// towards 1 with n. Throws DomainError for n < k.
double monotonicity_ratio(int k, long long n);

/// True iff g_value < g_fock(k, n), i.e. the state has nonzero weight on
/// fewer than n photons. n = k is the main sub-k criterion.
bool detect_sub_n(double g_value, int k, long long n);

// Maximum of g^(k) over the mixing weight for two states with equal g^(k)
// (g1) whose mean photon numbers differ by the factor r = n2/n1.
struct MixtureExtremum {
    double s_star = 0.0;
    double g_max = 0.0;
    int k = 2;
    double r = 1.0;
    double g1 = 1.0;
};

/// Closed-form location and value of the maximum. The weight s_star belongs
/// to the state with mean n1. Throws DegenerateRatio for |r - 1| < 1e-6 and
/// OutOfRange for r <= 0 or g1 <= 0.
MixtureExtremum mixture_extremum(int k, double r, double g1);

/// g^(k) along s in [0, 1] (uniform grid, `points` nodes) for
/// s * coherent(1) + (1 - s) * coherent(r). Endpoints are 1.
std::vector<std::pair<double, double>> mixture_sweep(int k, double r, int points);

}  // namespace subk
