#include "subk/named_states.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "subk/errors.hpp"
#include "subk/fock_theory.hpp"

namespace subk {

PhotonStatistics coherent(double mean_n) {
    if (!(mean_n >= 0.0) || !std::isfinite(mean_n)) {
        fail(Error::Kind::OutOfRange, "coherent state needs a finite mean photon number >= 0");
    }
    if (mean_n == 0.0) return fock(0);

    // log p_n = -mu + n log mu - log n!
    const double log_mu = std::log(mean_n);
    std::vector<double> probs;
    double log_p = -mean_n;
    for (std::size_t n = 0;; ++n) {
        if (n > 0) log_p += log_mu - std::log(static_cast<double>(n));
        probs.push_back(std::exp(log_p));
        const double next = static_cast<double>(n + 1);
        if (next > mean_n + 1.0) {
            // Past the mode the tail after n is bounded by p_{n+1} / (1 - mu/(n+2)).
            const double log_tail =
                log_p + log_mu - std::log(next) - std::log1p(-mean_n / (next + 1.0));
            if (log_tail < std::log(kTailMass)) break;
        }
    }
    return make_statistics(probs);
}

PhotonStatistics thermal(double lambda) {
    if (!(lambda >= 0.0 && lambda < 1.0)) {
        fail(Error::Kind::OutOfRange, "thermal state needs lambda in [0, 1)");
    }
    if (lambda == 0.0) return fock(0);

    // Tail after n is lambda^(n+1).
    const auto last = static_cast<std::size_t>(std::ceil(std::log(kTailMass) / std::log(lambda)));
    std::vector<double> probs(last + 1);
    double weight = 1.0 - lambda;
    for (auto& p : probs) {
        p = weight;
        weight *= lambda;
    }
    return make_statistics(probs);
}

PhotonStatistics two_point(int k, double w) {
    if (k < 2) fail(Error::Kind::DomainError, "two-point state needs k >= 2");
    if (!(w >= 0.0 && w <= 1.0)) fail(Error::Kind::OutOfRange, "two-point weight must lie in [0, 1]");
    std::vector<double> probs(static_cast<std::size_t>(k) + 1, 0.0);
    probs[static_cast<std::size_t>(k) - 1] = w;
    probs[static_cast<std::size_t>(k)] = 1.0 - w;
    return make_statistics(probs);
}

double coherent_threshold(int k) {
    // g_min^(1/(k-1)); pow keeps k = 2 exact, the log form covers underflowed g_min.
    const double gm = g_min(k);
    const double root = gm > std::numeric_limits<double>::min() ? std::pow(gm, 1.0 / (k - 1))
                                                                : std::exp(log_g_min(k) / (k - 1));
    return -std::log1p(-root);
}

double coherent_threshold_limit() { return 1.0 - std::log(std::numbers::e - 1.0); }

double thermal_threshold(int k) {
    if (k < 2) fail(Error::Kind::DomainError, "thermal threshold needs k >= 2");
    const double kd = k;
    return std::pow(kd, -kd / (kd - 1.0));
}

double thermal_lambda_from_mean(double mean_n) {
    if (!(mean_n >= 0.0) || !std::isfinite(mean_n)) {
        fail(Error::Kind::OutOfRange, "thermal mean photon number must be finite and >= 0");
    }
    return mean_n / (1.0 + mean_n);
}

namespace {

struct Builder {
    PhotonStatistics operator()(const FockSpec& s) const {
        if (s.n < 0) fail(Error::Kind::OutOfRange, "Fock photon number must be >= 0");
        return fock(static_cast<std::size_t>(s.n));
    }
    PhotonStatistics operator()(const CoherentSpec& s) const { return coherent(s.mean_n); }
    PhotonStatistics operator()(const ThermalSpec& s) const { return thermal(s.lambda); }
    PhotonStatistics operator()(const TwoPointSpec& s) const { return two_point(s.k, s.w); }
};

struct Describer {
    std::string operator()(const FockSpec& s) const { return "fock(n=" + std::to_string(s.n) + ")"; }
    std::string operator()(const CoherentSpec& s) const { return format("coherent(mean_n=", s.mean_n); }
    std::string operator()(const ThermalSpec& s) const { return format("thermal(lambda=", s.lambda); }
    std::string operator()(const TwoPointSpec& s) const {
        std::ostringstream os;
        os.precision(17);
        os << "two_point(k=" << s.k << ",w=" << s.w << ")";
        return os.str();
    }
    static std::string format(const char* head, double v) {
        std::ostringstream os;
        os.precision(17);
        os << head << v << ")";
        return os.str();
    }
};

}  // namespace

PhotonStatistics build_state(const StateSpec& spec) { return std::visit(Builder{}, spec); }

std::string describe(const StateSpec& spec) { return std::visit(Describer{}, spec); }

}  // namespace subk
