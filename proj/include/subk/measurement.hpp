#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "subk/photon_stats.hpp"

namespace subk {

/// Photon counts from an ideal photon-number-resolving detector, one entry
/// per event.
struct SampleBatch {
    std::vector<std::uint32_t> counts;
    std::uint64_t seed = 0;
    std::string source;
};

/// Draws n_events i.i.d. counts from `s` by inverse-CDF lookup.
///
/// Events are produced in fixed blocks of kSampleBlock; block b runs its own
/// std::mt19937_64 seeded with splitmix64(seed, b) and uniforms are built from
/// the top 53 bits of each output. The result therefore depends only on
/// (s, n_events, seed), independent of how many threads fill the blocks.
SampleBatch sample(const PhotonStatistics& s, std::size_t n_events, std::uint64_t seed,
                   std::string source = {});

inline constexpr std::size_t kSampleBlock = 1u << 16;

/// Sub-seed for lane `index` of a stream seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

struct GkEstimate {
    double g = 0.0;
    bool zero_kth_moment = false;  // no event with n >= k; g reported as 0
};

/// Empirical g^(k): mean of n(n-1)...(n-k+1) over (mean n)^k.
/// Throws ZeroMeanSample when every count is 0.
GkEstimate estimate_g_k(std::span<const std::uint32_t> counts, int k);
inline GkEstimate estimate_g_k(const SampleBatch& batch, int k) { return estimate_g_k(batch.counts, k); }

struct EstimateOptions {
    int bootstrap_resamples = 200;
    unsigned lanes = 0;  // 0: hardware concurrency
};

struct EstimateReport {
    int k = 2;
    double g_hat = 0.0;
    double p0_hat = 0.0;
    double g_tilde_postselect = 0.0;
    double g_tilde_corrected = 0.0;
    std::size_t n_events = 0;
    std::size_t n_retained = 0;
    double stderr_g = 0.0;
    double stderr_postselect = 0.0;
    double stderr_corrected = 0.0;
    bool zero_kth_moment = false;
};

/// Two routes to g_tilde^(k): g^(k) over the events left after discarding
/// zero counts, and (1 - p0_hat)^(k-1) g_hat over the whole batch. Standard
/// errors come from a bootstrap whose resample r is seeded with
/// derive_seed(batch.seed ^ kBootstrapSalt, r).
/// Throws AllVacuumEvents when no event registered a photon.
EstimateReport estimate_g_tilde_postselect(const SampleBatch& batch, int k, const EstimateOptions& options = {});

inline constexpr std::uint64_t kBootstrapSalt = 0xb0075742a9c3d1e5ULL;

/// One count per line.
void write_counts(std::ostream& os, const SampleBatch& batch);
std::vector<std::uint32_t> read_counts(std::istream& is);

}  // namespace subk
