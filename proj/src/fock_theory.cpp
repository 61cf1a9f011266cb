#include "subk/fock_theory.hpp"

#include <cmath>
#include <string>

#include "subk/errors.hpp"
#include "subk/named_states.hpp"
#include "subk/photon_stats.hpp"

namespace subk {

namespace {

void require_k(int k) {
    if (k < 2) fail(Error::Kind::DomainError, "correlation order k=" + std::to_string(k) + " must be >= 2");
}

}  // namespace

double g_fock(int k, long long n) {
    require_k(k);
    if (n < k) return 0.0;
    const double nd = static_cast<double>(n);
    double g = 1.0;
    for (int j = 1; j < k; ++j) g *= (nd - j) / nd;
    return g;
}

double g_min(int k) { return g_fock(k, k); }

double log_g_min(int k) {
    require_k(k);
    const double kd = k;
    double sum = 0.0;
    for (int j = 1; j < k; ++j) sum += std::log(j / kd);
    return sum;
}

double monotonicity_ratio(int k, long long n) {
    require_k(k);
    if (n < k) {
        fail(Error::Kind::DomainError,
             "monotonicity ratio needs n >= k (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
    }
    // prod_{j<k} [(n-j)/n] / [(n+1-j)/(n+1)], paired factor by factor.
    const double nd = static_cast<double>(n);
    double ratio = 1.0;
    for (int j = 1; j < k; ++j) ratio *= ((nd - j) * (nd + 1.0)) / (nd * (nd + 1.0 - j));
    return ratio;
}

bool detect_sub_n(double g_value, int k, long long n) {
    if (n < k) {
        fail(Error::Kind::DomainError,
             "detection needs n >= k (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
    }
    return g_value < g_fock(k, n);
}

MixtureExtremum mixture_extremum(int k, double r, double g1) {
    require_k(k);
    if (!(r > 0.0) || !(g1 > 0.0)) fail(Error::Kind::OutOfRange, "mixture_extremum needs r > 0 and g1 > 0");
    if (std::abs(r - 1.0) < 1e-6) {
        fail(Error::Kind::DegenerateRatio, "r = 1: g^(k) is constant along the mixture");
    }

    const double kd = k;
    const double log_r = std::log(r);
    const double rk = std::exp(kd * log_r);
    // x^m - 1 without cancellation near r = 1.
    const double rk_m1 = std::expm1(kd * log_r);
    const double r_m1 = std::expm1(log_r);
    const double rk1_m1 = std::expm1((kd - 1.0) * log_r);

    MixtureExtremum out;
    out.k = k;
    out.r = r;
    out.g1 = g1;
    out.s_star = (-r * rk_m1 + kd * r_m1 * rk) / ((kd - 1.0) * r_m1 * rk_m1);

    // (r^k-1)^k (k-1)^(k-1) / [r^(k-1) (r-1) k^k (r^(k-1)-1)^(k-1)].
    // Numerator and denominator share the sign (-1)^k for r < 1, so the
    // magnitude is taken in log space.
    const double log_value = kd * std::log(std::abs(rk_m1)) + (kd - 1.0) * std::log(kd - 1.0) -
                             (kd - 1.0) * log_r - std::log(std::abs(r_m1)) - kd * std::log(kd) -
                             (kd - 1.0) * std::log(std::abs(rk1_m1));
    out.g_max = g1 * std::exp(log_value);
    return out;
}

std::vector<std::pair<double, double>> mixture_sweep(int k, double r, int points) {
    require_k(k);
    if (points < 2) fail(Error::Kind::OutOfRange, "mixture sweep needs at least 2 points");
    if (!(r > 0.0)) fail(Error::Kind::OutOfRange, "mixture sweep needs r > 0");

    const auto first = coherent(1.0);
    const auto second = coherent(r);
    std::vector<std::pair<double, double>> curve;
    curve.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double s = (i == points - 1) ? 1.0 : static_cast<double>(i) / (points - 1);
        curve.emplace_back(s, g_k(mix(first, second, s), k));
    }
    return curve;
}

}  // namespace subk
