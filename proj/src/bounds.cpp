#include "subk/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "subk/errors.hpp"
#include "subk/fock_theory.hpp"

namespace subk {

namespace {

constexpr double kRatioSlack = 1e-12;
// log g and the summed log g_min differ by a few ulps even when g == g_min(k);
// the root is double there, so that noise would show up as ~1e-8 in P_min.
constexpr double kRatioSnap = 1e-14;
constexpr int kMaxBisection = 200;

std::string str(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void require_k(int k) {
    if (k < 2) fail(Error::Kind::DomainError, "correlation order k=" + std::to_string(k) + " must be >= 2");
}

// R in (0, 1] from a measured g; tiny overshoot above g_min is clamped.
double log_ratio_from_g(int k, double g) {
    require_k(k);
    if (!(g > 0.0) || !std::isfinite(g)) {
        fail(Error::Kind::OutOfRange, "bounds need g > 0, got " + str(g));
    }
    const double log_r = std::log(g) - log_g_min(k);
    if (log_r > kRatioSlack) {
        fail(Error::Kind::OutOfRange,
             "g=" + str(g) + " exceeds g_min(" + std::to_string(k) + ")=" + str(g_min(k)) +
                 "; no sub-k bound applies");
    }
    return log_r > -kRatioSnap ? 0.0 : log_r;
}

double log_ratio_from_r(double R) {
    if (!(R > 0.0) || R > 1.0 + kRatioSlack) {
        fail(Error::Kind::OutOfRange, "R = g/g_min must lie in (0, 1], got " + str(R));
    }
    return std::min(std::log(R), 0.0);
}

// Root u = Q_max^(1/k) of k c u - u^k - (k-1) with log c = -log R / k.
// Returns log u.
double solve_log_u(int k, double log_r) {
    if (log_r == 0.0) return 0.0;
    const double kd = k;
    const double log_c = -log_r / kd;
    const double c = std::exp(log_c);
    auto f = [&](double u) { return kd * c * u - std::pow(u, kd) - (kd - 1.0); };

    double lo = (kd - 1.0) / kd / c;  // f(lo) = -lo^k < 0
    double hi = std::min(1.0, 1.0 / c);  // f(hi) >= 0
    for (int it = 0; it < kMaxBisection; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * hi) break;
    }
    return std::log(0.5 * (lo + hi));
}

// X = (g_min / (g Q_max^(k-1)))^(1/k) = c / u^(k-1); returns X - 1.
double x_minus_one(int k, double log_r) {
    const double log_u = solve_log_u(k, log_r);
    const double log_x = -log_r / k - (k - 1) * log_u;
    return std::expm1(std::max(log_x, 0.0));
}

double q_from_log_ratio(int k, double log_r) { return std::exp(k * solve_log_u(k, log_r)); }

double ratio_from_log_ratio(int k, double log_r) {
    const double kd = k;
    return kd / (kd - 1.0) * x_minus_one(k, log_r);
}

double p_opt_from_log_ratio(int k, double log_r) {
    const double xm1 = x_minus_one(k, log_r);
    return xm1 / (xm1 + 1.0 - 1.0 / k);
}

}  // namespace

double solve_q_max(int k, double g) { return q_from_log_ratio(k, log_ratio_from_g(k, g)); }

double q_max_at_ratio(int k, double R) {
    require_k(k);
    return q_from_log_ratio(k, log_ratio_from_r(R));
}

double p_min(int k, double g) { return 1.0 - solve_q_max(k, g); }

double p_min_at_ratio(int k, double R) { return 1.0 - q_max_at_ratio(k, R); }

double q_max_with_vacuum(int k, double g, double p0) {
    require_k(k);
    if (!(p0 >= 0.0 && p0 < 1.0)) fail(Error::Kind::OutOfRange, "p0 must lie in [0, 1), got " + str(p0));
    const double g_tilde = std::pow(1.0 - p0, k - 1) * g;
    return (1.0 - p0) * solve_q_max(k, g_tilde);
}

double ratio_bound(int k, double g_tilde) { return ratio_from_log_ratio(k, log_ratio_from_g(k, g_tilde)); }

double ratio_bound_at_ratio(int k, double R) {
    require_k(k);
    return ratio_from_log_ratio(k, log_ratio_from_r(R));
}

double p_opt(int k, double g_tilde) { return p_opt_from_log_ratio(k, log_ratio_from_g(k, g_tilde)); }

double p_opt_at_ratio(int k, double R) {
    require_k(k);
    return p_opt_from_log_ratio(k, log_ratio_from_r(R));
}

double lambert_w0(double x) {
    constexpr double branch = -1.0 / std::numbers::e;
    if (!(x <= 0.0) || x < branch - 1e-15) {
        fail(Error::Kind::OutOfDomain, "lambert_w0 is defined here on [-1/e, 0], got " + str(x));
    }
    if (x == 0.0) return 0.0;
    if (x <= branch) return -1.0;

    double w;
    if (x < -0.25) {
        // Series about the branch point in p = sqrt(2 (e x + 1)).
        const double p = std::sqrt(std::max(0.0, 2.0 * (std::numbers::e * x + 1.0)));
        if (p < 1e-9) return -1.0 + p - p * p / 3.0;
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
    } else {
        w = x - x * x + 1.5 * x * x * x;
    }

    // Halley iteration on w e^w - x.
    for (int it = 0; it < 50; ++it) {
        const double ew = std::exp(w);
        const double residual = w * ew - x;
        const double wp1 = w + 1.0;
        if (wp1 <= 0.0) break;
        const double step = residual / (ew * wp1 - (w + 2.0) * residual / (2.0 * wp1));
        w -= step;
        if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(w))) break;
    }
    return std::clamp(w, -1.0, 0.0);
}

double large_k_p(double R) {
    if (!(R >= 0.0 && R <= 1.0)) fail(Error::Kind::OutOfRange, "R must lie in [0, 1], got " + str(R));
    if (R == 1.0) return 0.0;
    return 1.0 + lambert_w0(-R / std::numbers::e);
}

double large_k_ratio(double R) {
    if (R == 0.0) fail(Error::Kind::DomainError, "large-k ratio bound diverges at R = 0");
    if (!(R > 0.0 && R <= 1.0)) fail(Error::Kind::OutOfRange, "R must lie in (0, 1], got " + str(R));
    const double p = large_k_p(R);
    return p / (1.0 - p);
}

BoundReport bound_report(int k, double g, double p0) {
    require_k(k);
    if (!(g > 0.0)) fail(Error::Kind::OutOfRange, "bound report needs g > 0, got " + str(g));
    if (!(p0 >= 0.0 && p0 < 1.0)) fail(Error::Kind::OutOfRange, "p0 must lie in [0, 1), got " + str(p0));

    BoundReport out;
    out.k = k;
    out.g_input = g;
    out.p0 = p0;
    out.g_tilde = std::pow(1.0 - p0, k - 1) * g;
    const double log_r = log_ratio_from_g(k, out.g_tilde);
    out.R = std::exp(log_r);
    out.q_max = (1.0 - p0) * q_from_log_ratio(k, log_r);
    out.p_min = 1.0 - q_from_log_ratio(k, log_r);
    out.p_opt = p_opt_from_log_ratio(k, log_r);
    out.ratio_bound = ratio_from_log_ratio(k, log_r);
    out.large_k_p = large_k_p(out.R);
    return out;
}

}  // namespace subk
