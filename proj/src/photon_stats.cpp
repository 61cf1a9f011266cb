#include "subk/photon_stats.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "subk/errors.hpp"

namespace subk {

const char* to_string(Error::Kind kind) noexcept {
    switch (kind) {
        case Error::Kind::NegativeProbability: return "NegativeProbability";
        case Error::Kind::ZeroMass: return "ZeroMass";
        case Error::Kind::VacuumOnlyState: return "VacuumOnlyState";
        case Error::Kind::SourceHasVacuum: return "SourceHasVacuum";
        case Error::Kind::DomainError: return "DomainError";
        case Error::Kind::DegenerateRatio: return "DegenerateRatio";
        case Error::Kind::OutOfRange: return "OutOfRange";
        case Error::Kind::OutOfDomain: return "OutOfDomain";
        case Error::Kind::ZeroMeanSample: return "ZeroMeanSample";
        case Error::Kind::AllVacuumEvents: return "AllVacuumEvents";
        case Error::Kind::ParseError: return "ParseError";
    }
    return "Unknown";
}

namespace {

void require_order(int k, int lowest) {
    if (k < lowest) {
        fail(Error::Kind::DomainError,
             "correlation order k=" + std::to_string(k) + " must be >= " + std::to_string(lowest));
    }
}

// Sum over n >= k of p_n * prod_{j<k} (n-j)/mean.
double falling_moment_ratio(std::span<const double> probs, int k, double mean) {
    double total = 0.0;
    for (std::size_t n = static_cast<std::size_t>(k); n < probs.size(); ++n) {
        if (probs[n] == 0.0) continue;
        double term = probs[n];
        const double nd = static_cast<double>(n);
        for (int j = 0; j < k; ++j) term *= (nd - j) / mean;
        total += term;
    }
    return total;
}

}  // namespace

PhotonStatistics make_statistics(std::span<const double> probs) {
    double sum = 0.0;
    for (std::size_t n = 0; n < probs.size(); ++n) {
        if (!(probs[n] >= 0.0)) {
            fail(Error::Kind::NegativeProbability,
                 "probability p_" + std::to_string(n) + " = " + std::to_string(probs[n]) + " is negative");
        }
        sum += probs[n];
    }
    if (!(sum > 0.0) || !std::isfinite(sum)) fail(Error::Kind::ZeroMass, "distribution has no positive finite mass");

    std::size_t last = probs.size();
    while (last > 0 && probs[last - 1] == 0.0) --last;

    std::vector<double> out(probs.begin(), probs.begin() + static_cast<std::ptrdiff_t>(last));
    for (auto& p : out) p /= sum;
    return PhotonStatistics(std::move(out));
}

PhotonStatistics fock(std::size_t n) {
    std::vector<double> probs(n + 1, 0.0);
    probs[n] = 1.0;
    return make_statistics(probs);
}

double mean_photon_number(const PhotonStatistics& s) noexcept {
    const auto probs = s.probs();
    double mean = 0.0;
    for (std::size_t n = 1; n < probs.size(); ++n) mean += static_cast<double>(n) * probs[n];
    return mean;
}

double g_k(const PhotonStatistics& s, int k) {
    require_order(k, 1);
    const double mean = mean_photon_number(s);
    if (!(mean > 0.0)) fail(Error::Kind::VacuumOnlyState, "g^(k) is undefined for the vacuum state");
    if (s.nmax() < static_cast<std::size_t>(k)) return 0.0;
    return falling_moment_ratio(s.probs(), k, mean);
}

double g_tilde_k(const PhotonStatistics& s, int k) {
    require_order(k, 2);
    const double g = g_k(s, k);
    return std::pow(1.0 - s.p0(), k - 1) * g;
}

CorrelationReport correlation_report(const PhotonStatistics& s, int k) {
    CorrelationReport report;
    report.k = k;
    report.mean_n = mean_photon_number(s);
    report.g = g_k(s, k);
    report.p0 = s.p0();
    report.g_tilde = std::pow(1.0 - report.p0, k - 1) * report.g;
    return report;
}

PhotonStatistics remove_vacuum(const PhotonStatistics& s) {
    if (s.nmax() == 0) fail(Error::Kind::VacuumOnlyState, "cannot remove vacuum from the vacuum state");
    std::vector<double> probs(s.probs().begin(), s.probs().end());
    probs[0] = 0.0;
    return make_statistics(probs);
}

PhotonStatistics mix_vacuum(const PhotonStatistics& s, double p0_add) {
    if (s.p0() != 0.0) fail(Error::Kind::SourceHasVacuum, "mix_vacuum requires a source without vacuum component");
    if (!(p0_add >= 0.0 && p0_add < 1.0)) {
        fail(Error::Kind::OutOfRange, "vacuum weight must lie in [0, 1), got " + std::to_string(p0_add));
    }
    std::vector<double> probs(s.probs().begin(), s.probs().end());
    for (auto& p : probs) p *= (1.0 - p0_add);
    probs[0] = p0_add;
    return make_statistics(probs);
}

PhotonStatistics mix(const PhotonStatistics& s1, const PhotonStatistics& s2, double weight) {
    if (!(weight >= 0.0 && weight <= 1.0)) {
        fail(Error::Kind::OutOfRange, "mixing weight must lie in [0, 1], got " + std::to_string(weight));
    }
    if (weight == 1.0) return s1;
    if (weight == 0.0) return s2;
    const std::size_t size = std::max(s1.nmax(), s2.nmax()) + 1;
    std::vector<double> probs(size);
    for (std::size_t n = 0; n < size; ++n) probs[n] = weight * s1.p(n) + (1.0 - weight) * s2.p(n);
    return make_statistics(probs);
}

SplitSummary split_at_k(const PhotonStatistics& s, int k) {
    require_order(k, 2);
    const auto probs = s.probs();
    const auto kk = static_cast<std::size_t>(k);

    SplitSummary out;
    out.k = k;
    double sub_moment = 0.0;
    double super_moment = 0.0;
    for (std::size_t n = 0; n < probs.size(); ++n) {
        const double weighted = static_cast<double>(n) * probs[n];
        if (n < kk) {
            out.P += probs[n];
            sub_moment += weighted;
        } else {
            out.Q += probs[n];
            super_moment += weighted;
        }
    }
    out.P_tilde = out.P - probs[0];

    if (out.P > 0.0) out.N_P = sub_moment / out.P;
    if (out.Q > 0.0) {
        out.N_Q = super_moment / out.Q;
        // g of rho_Q: rescale the super-k tail by 1/Q and normalize by N_Q.
        std::vector<double> tail(probs.begin(), probs.end());
        for (std::size_t n = 0; n < kk && n < tail.size(); ++n) tail[n] = 0.0;
        for (auto& p : tail) p /= out.Q;
        out.g_Q = falling_moment_ratio(tail, k, *out.N_Q);
    }
    return out;
}

}  // namespace subk
