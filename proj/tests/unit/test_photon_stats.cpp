#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "subk/errors.hpp"
#include "subk/named_states.hpp"
#include "subk/photon_stats.hpp"

using namespace subk;

TEST_CASE("make_statistics normalizes and trims") {
    const auto vac = make_statistics({1.0});
    CHECK(vac.nmax() == 0);
    CHECK(vac.p0() == 1.0);

    const auto trimmed = make_statistics({0.5, 0.5, 0.0});
    CHECK(trimmed.nmax() == 1);
    CHECK(trimmed.p(1) == 0.5);

    const auto forced = make_statistics({2.0, 2.0});
    CHECK(forced.p(0) == 0.5);
    CHECK(forced.p(1) == 0.5);
    CHECK(forced.p(7) == 0.0);
}

TEST_CASE("make_statistics rejects bad input") {
    auto kind_of = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.kind();
        }
        FAIL("no error thrown");
        return Error::Kind::ParseError;
    };
    CHECK(kind_of([] { make_statistics({0.5, -0.1, 0.6}); }) == Error::Kind::NegativeProbability);
    CHECK(kind_of([] { make_statistics({0.0, 0.0}); }) == Error::Kind::ZeroMass);
    CHECK(kind_of([] { make_statistics(std::span<const double>{}); }) == Error::Kind::ZeroMass);
    CHECK(kind_of([] { make_statistics({std::nan(""), 1.0}); }) == Error::Kind::NegativeProbability);
}

TEST_CASE("mean photon number") {
    CHECK(mean_photon_number(fock(3)) == 3.0);
    CHECK(mean_photon_number(make_statistics({0.5, 0.0, 0.5})) == 1.0);
    CHECK(mean_photon_number(coherent(0.63)) == doctest::Approx(0.63).epsilon(1e-9));
}

TEST_CASE("g_k on Fock and thermal states") {
    CHECK(g_k(fock(2), 2) == 0.5);
    CHECK(g_k(fock(1), 2) == 0.0);
    CHECK(g_k(fock(5), 7) == 0.0);
    CHECK(g_k(fock(4), 1) == 1.0);
    for (double lambda : {0.1, 0.5, 0.8}) {
        CHECK(g_k(thermal(lambda), 3) == doctest::Approx(6.0).epsilon(1e-6));
    }
    CHECK_THROWS_AS(g_k(fock(0), 2), Error);
}

TEST_CASE("g_tilde_k") {
    // Coherent light at the k = 2 boundary <n> = ln 2: g_tilde = 1 - e^{-ln 2} = 1/2.
    CHECK(g_tilde_k(coherent(std::log(2.0)), 2) == doctest::Approx(0.5).epsilon(1e-9));

    const auto no_vac = make_statistics({0.0, 0.3, 0.4, 0.3});
    CHECK(g_tilde_k(no_vac, 3) == doctest::Approx(g_k(no_vac, 3)).epsilon(1e-15));

    const auto with_vac = make_statistics({0.5, 0.25, 0.25});
    const auto reference = make_statistics({0.0, 0.5, 0.5});
    // Both sides by hand: reference <n> = 1.5, <n(n-1)> = 1 -> g = 1/2.25.
    CHECK(g_k(reference, 2) == doctest::Approx(1.0 / 2.25).epsilon(1e-14));
    CHECK(g_tilde_k(with_vac, 2) == doctest::Approx(1.0 / 2.25).epsilon(1e-12));
}

TEST_CASE("remove_vacuum and mix_vacuum") {
    CHECK(remove_vacuum(make_statistics({0.5, 0.5})) == fock(1));
    CHECK(remove_vacuum(fock(1)) == fock(1));
    const auto r = remove_vacuum(make_statistics({0.9, 0.0, 0.05, 0.05}));
    CHECK(r.p(2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r.p(3) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r.p0() == 0.0);
    CHECK_THROWS_AS(remove_vacuum(fock(0)), Error);

    CHECK(mix_vacuum(fock(1), 0.5) == make_statistics({0.5, 0.5}));
    const auto s = make_statistics({0.0, 0.2, 0.8});
    CHECK(mix_vacuum(s, 0.0) == s);

    const auto pair = make_statistics({0.0, 0.0, 0.5, 0.5});
    const double before = g_k(pair, 2);
    const double after = g_k(mix_vacuum(pair, 0.3), 2);
    CHECK(before / after == doctest::Approx(0.7).epsilon(1e-12));

    try {
        mix_vacuum(make_statistics({0.1, 0.9}), 0.2);
        FAIL("expected SourceHasVacuum");
    } catch (const Error& e) {
        CHECK(e.kind() == Error::Kind::SourceHasVacuum);
    }
}

TEST_CASE("mix endpoints and convex combination") {
    const auto a = fock(1), b = fock(3);
    CHECK(mix(a, b, 1.0) == a);
    CHECK(mix(a, b, 0.0) == b);
    const auto m = mix(a, b, 0.5);
    CHECK(m.p(1) == 0.5);
    CHECK(m.p(3) == 0.5);
    CHECK(m.p(2) == 0.0);
    CHECK_THROWS_AS(mix(a, b, 1.5), Error);
}

TEST_CASE("split_at_k") {
    const auto s = split_at_k(make_statistics({0.0, 0.5, 0.5}), 2);
    CHECK(s.P == 0.5);
    CHECK(s.Q == 0.5);
    CHECK(s.P_tilde == 0.5);
    CHECK(*s.N_P == 1.0);
    CHECK(*s.N_Q == 2.0);
    CHECK(*s.g_Q == 0.5);

    const auto f = split_at_k(fock(5), 2);
    CHECK(f.P == 0.0);
    CHECK(f.Q == 1.0);
    CHECK_FALSE(f.N_P.has_value());
    CHECK(*f.N_Q == 5.0);

    const auto low = split_at_k(fock(1), 3);
    CHECK_FALSE(low.N_Q.has_value());
    CHECK_FALSE(low.g_Q.has_value());

    // Poisson partial sum e^{-1}(1 + 1 + 1/2).
    const auto c = split_at_k(coherent(1.0), 3);
    CHECK(c.P == doctest::Approx(std::exp(-1.0) * 2.5).epsilon(1e-9));
}

TEST_CASE("property: exact split identity N_P P = N_Q [(g_Q Q / g)^(1/k) - Q]") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> pick_k(2, 6);
    int checked = 0;
    while (checked < 1000) {
        const int k = pick_k(rng);
        const auto probs = oracle::random_probs(rng, static_cast<std::size_t>(k) + rng() % 20);
        const auto s = make_statistics(probs);
        const auto split = split_at_k(s, k);
        if (!(split.P > 0.0 && split.Q > 0.0) || mean_photon_number(s) == 0.0) continue;
        const double g = g_k(s, k);
        const double lhs = *split.N_P * split.P;
        const double rhs = *split.N_Q * (std::pow(*split.g_Q * split.Q / g, 1.0 / k) - split.Q);
        // Relative to the scale of the terms that cancel on the right-hand side.
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(std::abs(lhs), *split.N_Q * split.Q));
        CHECK(split.P + split.Q == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(*split.N_P <= k - 1.0 + 1e-12);
        CHECK(*split.N_Q >= k - 1e-12);
        ++checked;
    }
}

TEST_CASE("property: quasiconcavity of g_k under mixing") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const int k = 2 + static_cast<int>(rng() % 5);
        const auto s1 = make_statistics(oracle::random_probs(rng, 1 + rng() % 15));
        const auto s2 = make_statistics(oracle::random_probs(rng, 1 + rng() % 15));
        if (mean_photon_number(s1) == 0.0 || mean_photon_number(s2) == 0.0) continue;
        const double w = u(rng);
        const double mixed = g_k(mix(s1, s2, w), k);
        CHECK(mixed >= std::min(g_k(s1, k), g_k(s2, k)) - 1e-12);
    }
}

TEST_CASE("property: vacuum scaling and post-selection identity") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 0.99);
    for (int i = 0; i < 300; ++i) {
        const int k = 2 + static_cast<int>(rng() % 5);
        auto probs = oracle::random_probs(rng, 2 + rng() % 12);
        const auto with_vac = make_statistics(probs);
        if (with_vac.nmax() == 0) continue;
        CHECK(g_tilde_k(with_vac, k) == doctest::Approx(g_k(remove_vacuum(with_vac), k)).epsilon(1e-12));

        probs[0] = 0.0;
        if (std::all_of(probs.begin(), probs.end(), [](double p) { return p == 0.0; })) continue;
        const auto source = make_statistics(probs);
        const double p0 = u(rng);
        const double scaled = g_k(mix_vacuum(source, p0), k) * std::pow(1.0 - p0, k - 1);
        CHECK(scaled == doctest::Approx(g_k(source, k)).epsilon(1e-12));
    }
}

TEST_CASE("property: ratio-product g_k matches log-space evaluation up to nmax 1000, k 100") {
    std::mt19937_64 rng(17);
    for (std::size_t nmax : {50u, 200u, 1000u}) {
        for (int k : {2, 5, 20, 50, 100}) {
            // Spread mass broadly so <n> is large enough to keep g finite.
            auto probs = oracle::random_probs(rng, nmax);
            const auto s = make_statistics(probs);
            const double fast = g_k(s, k);
            const double slow = oracle::g_k_logspace(std::vector<double>(s.probs().begin(), s.probs().end()), k);
            CHECK(fast == doctest::Approx(slow).epsilon(1e-9));
        }
    }
}

TEST_CASE("correlation report fields") {
    const auto s = make_statistics({0.2, 0.3, 0.5});
    const auto r = correlation_report(s, 2);
    CHECK(r.p0 == doctest::Approx(0.2));
    CHECK(r.mean_n == doctest::Approx(1.3));
    CHECK(r.g == doctest::Approx(1.0 / 1.69).epsilon(1e-14));
    CHECK(r.g_tilde == doctest::Approx(0.8 * r.g).epsilon(1e-12));
}
