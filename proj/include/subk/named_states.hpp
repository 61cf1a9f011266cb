#pragma once

#include <string>
#include <variant>

#include "subk/photon_stats.hpp"

namespace subk {

// Tail mass left out when truncating infinite-support states. Kept far
// below the 1e-12 normalization target so that factorial moments of
// order k ~ 10 are still converged.
inline constexpr double kTailMass = 1e-30;

/// Poisson statistics with <n> = |alpha|^2 = mean_n.
PhotonStatistics coherent(double mean_n);

/// Geometric statistics (1 - lambda) lambda^n, lambda in [0, 1).
PhotonStatistics thermal(double lambda);

/// w |k-1><k-1| + (1 - w) |k><k|: the state that saturates the projection bounds.
PhotonStatistics two_point(int k, double w);

/// |alpha|^2 below which a coherent state has g_tilde^(k) < g_min(k):
/// -log(1 - g_min(k)^(1/(k-1))). Tends to 1 - ln(e - 1) for large k.
double coherent_threshold(int k);

/// 1 - ln(e - 1), the large-k limit of coherent_threshold.
double coherent_threshold_limit();

/// lambda* = k^(-1) k^(-1/(k-1)), at which thermal(lambda*) has
/// g_tilde^(k) = g_min(k).
double thermal_threshold(int k);

struct FockSpec {
    long long n = 0;
};
struct CoherentSpec {
    double mean_n = 0.0;
};
struct ThermalSpec {
    double lambda = 0.0;
};
struct TwoPointSpec {
    int k = 2;
    double w = 0.5;  // weight on |k-1>
};

using StateSpec = std::variant<FockSpec, CoherentSpec, ThermalSpec, TwoPointSpec>;

/// Validates the parameter domain and builds the distribution.
PhotonStatistics build_state(const StateSpec& spec);

std::string describe(const StateSpec& spec);

/// lambda = n / (1 + n), for specifying thermal light by its mean.
double thermal_lambda_from_mean(double mean_n);

}  // namespace subk
