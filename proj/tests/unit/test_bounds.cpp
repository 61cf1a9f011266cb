#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "subk/bounds.hpp"
#include "subk/errors.hpp"
#include "subk/fock_theory.hpp"
#include "subk/named_states.hpp"
#include "subk/photon_stats.hpp"

using namespace subk;

namespace {

// Residual of 1 - Q = k/(k-1) [ (g_min Q / g)^(1/k) - Q ] evaluated directly in Q.
double bound_residual(int k, double g, double q) {
    return static_cast<double>(k) / (k - 1) * (std::pow(g_min(k) * q / g, 1.0 / k) - q) + q - 1.0;
}

Error::Kind error_kind(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return Error::Kind::ParseError;
}

}  // namespace

TEST_CASE("solve_q_max against the k = 2 closed form") {
    for (int i = 1; i <= 9; ++i) {
        const double g = 0.05 * i;
        CHECK(std::abs(solve_q_max(2, g) - oracle::q_max_k2(g)) < 1e-10);
    }
    for (int k : {2, 3, 5, 17, 100}) CHECK(solve_q_max(k, g_min(k)) == 1.0);
}

TEST_CASE("solve_q_max residual") {
    const double g = g_min(3) / 2.0;
    const double q = solve_q_max(3, g);
    CHECK(q > 0.0);
    CHECK(q < 1.0);
    CHECK(std::abs(bound_residual(3, g, q)) < 1e-10);

    for (int k : {2, 4, 7, 20, 60}) {
        for (double R : {1e-6, 0.01, 0.3, 0.9, 0.999}) {
            const double gk = R * g_min(k);
            CHECK(std::abs(bound_residual(k, gk, solve_q_max(k, gk))) < 1e-10);
        }
    }
}

TEST_CASE("solve_q_max rejects values outside (0, g_min]") {
    CHECK(error_kind([] { solve_q_max(2, 0.0); }) == Error::Kind::OutOfRange);
    CHECK(error_kind([] { solve_q_max(2, -0.1); }) == Error::Kind::OutOfRange);
    CHECK(error_kind([] { solve_q_max(2, 0.5001); }) == Error::Kind::OutOfRange);
    CHECK(error_kind([] { solve_q_max(3, 0.3); }) == Error::Kind::OutOfRange);
    CHECK_NOTHROW(solve_q_max(2, 0.5 * (1.0 + 1e-14)));
}

TEST_CASE("p_min") {
    CHECK(std::abs(p_min(2, 0.25) - (1.0 - (1.0 - 0.25 - std::sqrt(0.5)) / 0.25)) < 1e-10);
    CHECK(p_min(5, g_min(5)) == 0.0);
    double previous = 1.0;
    for (int i = 1; i <= 100; ++i) {
        const double p = p_min(4, g_min(4) * i / 100.0);
        CHECK(p <= previous);
        CHECK(p >= 0.0);
        previous = p;
    }
    CHECK(p_min_at_ratio(3, 0.4) == doctest::Approx(p_min(3, 0.4 * g_min(3))).epsilon(1e-13));
}

TEST_CASE("p_min maximum deviation between k = 2 and k = 100 is about 0.09") {
    double worst = 0.0;
    for (int i = 1; i <= 1000; ++i) {
        const double R = i / 1000.0;
        worst = std::max(worst, std::abs(p_min_at_ratio(2, R) - p_min_at_ratio(100, R)));
    }
    CHECK(worst == doctest::Approx(0.09).epsilon(0.01 / 0.09));
}

TEST_CASE("q_max_with_vacuum") {
    for (double g : {0.1, 0.3, 0.45}) CHECK(q_max_with_vacuum(2, g, 0.0) == solve_q_max(2, g));
    CHECK(q_max_with_vacuum(2, 0.6, 0.5) == doctest::Approx(0.5 * oracle::q_max_k2(0.3)).epsilon(1e-10));
    // At fixed g_tilde = (1 - p0)^(k-1) g the result shrinks with p0.
    const double g_tilde = 0.1;
    double previous = 2.0;
    for (double p0 = 0.0; p0 < 0.9; p0 += 0.1) {
        const double g = g_tilde / std::pow(1.0 - p0, 2);
        const double q = q_max_with_vacuum(3, g, p0);
        CHECK(q < previous);
        previous = q;
    }
    CHECK_THROWS_AS(q_max_with_vacuum(2, 0.3, 1.0), Error);
}

TEST_CASE("ratio_bound") {
    for (int i = 1; i < 100; ++i) {
        const double g = 0.5 * i / 100.0;
        const double u = std::sqrt(1.0 - 2.0 * g);
        CHECK(std::abs(ratio_bound(2, g) - 2.0 * u / (1.0 - u)) < 1e-10 * std::max(1.0, 2.0 * u / (1.0 - u)));
    }
    CHECK(ratio_bound(6, g_min(6)) == 0.0);

    // The bound is attained by a two-point state on |3>, |4> at g = g_min(4)/4;
    // vacuum mixed in afterwards leaves both g_tilde and P_tilde/Q unchanged.
    const int k = 4;
    const double target = g_min(k) / 4.0;
    double lo = 0.0, hi = 1.0;  // weight on |3>; g decreases with it
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g_k(two_point(k, mid), k) > target ? lo : hi) = mid;
    }
    const auto state = mix_vacuum(two_point(k, 0.5 * (lo + hi)), 0.37);
    CHECK(g_tilde_k(state, k) == doctest::Approx(target).epsilon(1e-12));
    const auto split = split_at_k(state, k);
    CHECK(split.P_tilde / split.Q == doctest::Approx(ratio_bound(k, target)).epsilon(1e-8));
}

TEST_CASE("p_opt") {
    for (int i = 1; i < 100; ++i) {
        const double g = 0.5 * i / 100.0;
        const double u = std::sqrt(1.0 - 2.0 * g);
        CHECK(std::abs(p_opt(2, g) - 2.0 * u / (1.0 + u)) < 1e-10);
    }
    CHECK(p_opt(3, g_min(3)) == 0.0);
    const double g = g_min(100) / 2.0;
    CHECK(std::abs(p_opt(100, g) - p_min(100, g)) < 0.01);
    for (int k : {2, 3, 8, 40}) {
        for (double R : {0.001, 0.2, 0.8, 0.99}) {
            CHECK(p_opt_at_ratio(k, R) >= p_min_at_ratio(k, R) - 1e-12);
        }
    }
}

TEST_CASE("property: tightness on two-point states") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.001, 0.999);
    for (int trial = 0; trial < 500; ++trial) {
        const int k = 2 + static_cast<int>(rng() % 7);
        const double w = u(rng);
        const auto state = two_point(k, w);
        const double g = g_k(state, k);
        CHECK(std::abs(p_min(k, g) - w) < 1e-8);
    }
    // Exact P of the k = 2 equal-weight state.
    CHECK(std::abs(p_min(2, g_k(two_point(2, 0.5), 2)) - 0.5) < 1e-10);
}

TEST_CASE("property: soundness on random states below g_min") {
    std::mt19937_64 rng(29);
    int applicable = 0;
    for (int trial = 0; trial < 4000; ++trial) {
        const int k = 2 + static_cast<int>(rng() % 5);
        const auto state = make_statistics(oracle::random_sub_k_probs(rng, k));
        if (mean_photon_number(state) == 0.0) continue;
        const double gt = g_tilde_k(state, k);
        if (!(gt > 0.0 && gt < g_min(k))) continue;
        ++applicable;
        const auto split = split_at_k(state, k);
        CHECK(split.P >= p_opt(k, gt) - 1e-10);
        CHECK(split.P >= 1.0 - q_max_with_vacuum(k, g_k(state, k), state.p0()) - 1e-10);
        CHECK(split.P_tilde / split.Q >= ratio_bound(k, gt) - 1e-10);
    }
    CHECK(applicable > 500);
}

TEST_CASE("property: bounds decrease with k at fixed R") {
    for (int i = 1; i <= 50; ++i) {
        const double R = i / 50.0 - 1e-9;
        double previous = 2.0;
        for (int k : {2, 3, 4, 5, 100}) {
            const double p = p_min_at_ratio(k, R);
            CHECK(p < previous);
            previous = p;
        }
    }
}

TEST_CASE("lambert_w0") {
    CHECK(lambert_w0(0.0) == 0.0);
    CHECK(lambert_w0(-1.0 / std::numbers::e) == -1.0);
    const double w = lambert_w0(-0.1);
    CHECK(std::abs(w * std::exp(w) + 0.1) < 1e-12);
    CHECK(w == doctest::Approx(oracle::lambert_w0_bisect(-0.1)).epsilon(1e-12));
    CHECK(error_kind([] { lambert_w0(0.1); }) == Error::Kind::OutOfDomain);
    CHECK(error_kind([] { lambert_w0(-0.5); }) == Error::Kind::OutOfDomain);
    CHECK_NOTHROW(lambert_w0(-1.0 / std::numbers::e - 5e-16));
}

TEST_CASE("property: lambert_w0 round trip over the domain") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1.0 / std::numbers::e, 0.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng);
        const double w = lambert_w0(x);
        CHECK(w >= -1.0);
        CHECK(w <= 0.0);
        CHECK(std::abs(w * std::exp(w) - x) < 1e-12);
    }
    for (double eps : {1e-20, 1e-16, 1e-12, 1e-8, 1e-4}) {
        const double x = -1.0 / std::numbers::e + eps;
        const double w = lambert_w0(x);
        CHECK(std::abs(w * std::exp(w) - x) < 1e-12);
        CHECK(w == doctest::Approx(oracle::lambert_w0_bisect(x)).epsilon(1e-6));
    }
}

TEST_CASE("large_k_p") {
    CHECK(large_k_p(1.0) == 0.0);
    CHECK(large_k_p(0.0) == 1.0);
    for (int i = 0; i <= 100; ++i) {
        const double R = i / 100.0;
        const double p = large_k_p(R);
        CHECK(std::abs(R - (1.0 - p) * std::exp(p)) < 1e-10);
    }
    const double h = 1e-6;
    const double slope = (large_k_p(0.5 + h) - large_k_p(0.5 - h)) / (2 * h);
    const double p = large_k_p(0.5);
    CHECK(std::abs(slope + std::exp(-p) / p) < 1e-5);
}

TEST_CASE("large-k convergence of p_min at k = 100") {
    double worst = 0.0;
    for (int i = 1; i <= 100; ++i) {
        const double R = i / 100.0;
        worst = std::max(worst, std::abs(p_min_at_ratio(100, R) - large_k_p(R)));
        CHECK(p_min_at_ratio(100, R) >= large_k_p(R) - 1e-12);
    }
    CHECK(worst < 0.01);
}

TEST_CASE("large_k_ratio") {
    CHECK(large_k_ratio(1.0) == 0.0);
    CHECK(large_k_ratio(0.5) == large_k_p(0.5) / (1.0 - large_k_p(0.5)));
    CHECK(error_kind([] { large_k_ratio(0.0); }) == Error::Kind::DomainError);
    const double at_02 = ratio_bound(100, 0.2 * g_min(100));
    CHECK(std::abs(large_k_ratio(0.2) / at_02 - 1.0) < 0.05);
    for (int i = 5; i < 100; ++i) {
        const double R = i / 100.0;
        CHECK(std::abs(std::log(large_k_ratio(R)) - std::log(ratio_bound_at_ratio(100, R))) < 0.05);
    }
}

TEST_CASE("bound_report") {
    const auto r = bound_report(2, 0.3, 0.0);
    CHECK(std::abs(r.p_opt - 2.0 * std::sqrt(0.4) / (1.0 + std::sqrt(0.4))) < 1e-10);
    CHECK(r.p_min == doctest::Approx(1.0 - r.q_max).epsilon(1e-14));
    CHECK(r.R == doctest::Approx(0.6).epsilon(1e-14));

    for (int k : {2, 3, 10}) {
        const auto edge = bound_report(k, g_min(k), 0.0);
        CHECK(edge.q_max == 1.0);
        CHECK(edge.p_min == 0.0);
        CHECK(edge.p_opt == 0.0);
        CHECK(edge.ratio_bound == 0.0);
        CHECK(edge.large_k_p == 0.0);
    }

    // Only g_tilde matters: the same g_tilde reached through a different (g, p0).
    const auto a = bound_report(3, 0.15, 0.2);
    const auto b = bound_report(3, 0.15 * 0.64, 0.0);
    CHECK(a.g_tilde == doctest::Approx(b.g_tilde).epsilon(1e-15));
    CHECK(a.p_opt == doctest::Approx(b.p_opt).epsilon(1e-12));
    CHECK(a.ratio_bound == doctest::Approx(b.ratio_bound).epsilon(1e-12));
    CHECK(a.p_min == doctest::Approx(b.p_min).epsilon(1e-12));
    CHECK(a.q_max == doctest::Approx(0.8 * b.q_max).epsilon(1e-12));

    // Vacuum pulls g above g_min while g_tilde stays below.
    const auto vac = bound_report(2, 0.6, 0.5);
    CHECK(vac.g_tilde == doctest::Approx(0.3));
    CHECK(vac.q_max == doctest::Approx(0.5 * oracle::q_max_k2(0.3)).epsilon(1e-10));

    CHECK(error_kind([] { bound_report(2, 0.6, 0.0); }) == Error::Kind::OutOfRange);
    CHECK(error_kind([] { bound_report(2, 0.0, 0.0); }) == Error::Kind::OutOfRange);
}

TEST_CASE("p_opt coincides with p_min at g_tilde") {
    // rho = P_min / Q_max holds at the root, so rho / (1 + rho) = P_min.
    for (int k : {2, 3, 6, 30}) {
        for (double R : {0.01, 0.25, 0.5, 0.75, 0.95}) {
            CHECK(p_opt_at_ratio(k, R) == doctest::Approx(p_min_at_ratio(k, R)).epsilon(1e-11));
        }
    }
}
