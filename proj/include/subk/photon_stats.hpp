#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace subk {

/// Finite photon-number distribution p_0..p_nmax.
///
/// Always normalized, non-negative, with trailing zeros trimmed so that
/// nmax() is the largest occupied photon number. Instances are immutable;
/// build them through make_statistics() or the named-state constructors.
class PhotonStatistics {
  public:
    /// Probability of exactly n photons; 0 beyond nmax.
    double p(std::size_t n) const noexcept { return n < probs_.size() ? probs_[n] : 0.0; }
    double p0() const noexcept { return probs_.front(); }
    std::size_t nmax() const noexcept { return probs_.size() - 1; }
    std::span<const double> probs() const noexcept { return probs_; }

    bool operator==(const PhotonStatistics&) const = default;

  private:
    friend PhotonStatistics make_statistics(std::span<const double> probs);
    explicit PhotonStatistics(std::vector<double> probs) : probs_(std::move(probs)) {}

    std::vector<double> probs_;
};

// Sub-k / super-k decomposition. Quantities that require dividing by an
// empty subspace weight are left unset.
struct SplitSummary {
    int k = 2;
    double P = 0.0;
    double Q = 0.0;
    double P_tilde = 0.0;
    std::optional<double> N_P;
    std::optional<double> N_Q;
    std::optional<double> g_Q;
};

struct CorrelationReport {
    int k = 2;
    double mean_n = 0.0;
    double g = 0.0;
    double p0 = 0.0;
    double g_tilde = 0.0;
};

/// Normalizes `probs` by its sum and trims trailing zeros.
/// Throws NegativeProbability for any entry < 0 (or NaN) and ZeroMass when the
/// sum is not positive.
PhotonStatistics make_statistics(std::span<const double> probs);
inline PhotonStatistics make_statistics(std::initializer_list<double> probs) {
    return make_statistics(std::span<const double>(probs.begin(), probs.size()));
}

/// Fock state |n>.
PhotonStatistics fock(std::size_t n);

double mean_photon_number(const PhotonStatistics& s) noexcept;

/// k-th order correlation g^(k)(0) = <a^+k a^k> / <a^+ a>^k.
///
/// Each term is a product of ratios (n-j)/<n>, so neither the falling
/// factorial nor <n>^k is ever formed on its own. Exactly 0 when nmax < k.
/// Throws VacuumOnlyState when <n> = 0.
double g_k(const PhotonStatistics& s, int k);

/// Effective correlation (1 - p0)^(k-1) g^(k): the value g^(k) takes once the
/// vacuum component is removed.
double g_tilde_k(const PhotonStatistics& s, int k);

CorrelationReport correlation_report(const PhotonStatistics& s, int k);

PhotonStatistics remove_vacuum(const PhotonStatistics& s);

/// p0_add |0><0| + (1 - p0_add) s. The source must be vacuum-free.
PhotonStatistics mix_vacuum(const PhotonStatistics& s, double p0_add);

/// Convex combination weight * s1 + (1 - weight) * s2.
PhotonStatistics mix(const PhotonStatistics& s1, const PhotonStatistics& s2, double weight);

SplitSummary split_at_k(const PhotonStatistics& s, int k);

}  // namespace subk
