#include "subk/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <string>

#include "parallel.hpp"
#include "subk/errors.hpp"

namespace subk {

namespace {

// Uniform double in [0, 1) from the top 53 bits.
double to_unit(std::uint64_t bits) noexcept { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

using Histogram = std::vector<std::uint64_t>;

Histogram histogram(std::span<const std::uint32_t> counts) {
    Histogram h;
    for (auto n : counts) {
        if (n >= h.size()) h.resize(n + 1, 0);
        ++h[n];
    }
    return h;
}

struct HistogramMoments {
    std::uint64_t total = 0;
    double mean = 0.0;
};

HistogramMoments moments(const Histogram& h) {
    HistogramMoments m;
    double weighted = 0.0;
    for (std::size_t n = 0; n < h.size(); ++n) {
        m.total += h[n];
        weighted += static_cast<double>(n) * static_cast<double>(h[n]);
    }
    if (m.total > 0) m.mean = weighted / static_cast<double>(m.total);
    return m;
}

// Empirical g^(k) in ratio-product form. Requires a positive mean.
double g_from_histogram(const Histogram& h, int k, const HistogramMoments& m) {
    const double total = static_cast<double>(m.total);
    double g = 0.0;
    for (std::size_t n = static_cast<std::size_t>(k); n < h.size(); ++n) {
        if (h[n] == 0) continue;
        double term = static_cast<double>(h[n]) / total;
        for (int j = 0; j < k; ++j) term *= (static_cast<double>(n) - j) / m.mean;
        g += term;
    }
    return g;
}

struct RouteEstimates {
    bool valid = false;
    double g_hat = 0.0;
    double postselect = 0.0;
    double corrected = 0.0;
};

RouteEstimates routes(const Histogram& h, int k) {
    RouteEstimates out;
    const auto all = moments(h);
    if (!(all.mean > 0.0)) return out;
    out.g_hat = g_from_histogram(h, k, all);
    const double p0 = static_cast<double>(h[0]) / static_cast<double>(all.total);
    out.corrected = std::pow(1.0 - p0, k - 1) * out.g_hat;

    Histogram retained = h;
    retained[0] = 0;
    out.postselect = g_from_histogram(retained, k, moments(retained));
    out.valid = true;
    return out;
}

double sample_stddev(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

void require_k(int k) {
    if (k < 2) fail(Error::Kind::DomainError, "correlation order k=" + std::to_string(k) + " must be >= 2");
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    // splitmix64 finalizer over seed + (index + 1) * golden gamma.
    std::uint64_t z = seed + (index + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

SampleBatch sample(const PhotonStatistics& s, std::size_t n_events, std::uint64_t seed, std::string source) {
    if (n_events == 0) fail(Error::Kind::OutOfRange, "sample needs at least one event");

    const auto probs = s.probs();
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (std::size_t n = 0; n < probs.size(); ++n) {
        acc += probs[n];
        cdf[n] = acc;
    }
    cdf.back() = 1.0;

    SampleBatch batch;
    batch.seed = seed;
    batch.source = std::move(source);
    batch.counts.resize(n_events);

    const std::size_t blocks = (n_events + kSampleBlock - 1) / kSampleBlock;
    detail::parallel_for(blocks, 0, [&](std::size_t b) {
        std::mt19937_64 engine(derive_seed(seed, b));
        const std::size_t begin = b * kSampleBlock;
        const std::size_t end = std::min(n_events, begin + kSampleBlock);
        for (std::size_t i = begin; i < end; ++i) {
            const double u = to_unit(engine());
            const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            batch.counts[i] = static_cast<std::uint32_t>(std::min<std::ptrdiff_t>(
                it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
        }
    });
    return batch;
}

GkEstimate estimate_g_k(std::span<const std::uint32_t> counts, int k) {
    require_k(k);
    const auto h = histogram(counts);
    const auto m = moments(h);
    if (!(m.mean > 0.0)) fail(Error::Kind::ZeroMeanSample, "sample mean is zero; g^(k) is undefined");
    GkEstimate out;
    out.zero_kth_moment = h.size() <= static_cast<std::size_t>(k);
    out.g = g_from_histogram(h, k, m);
    return out;
}

EstimateReport estimate_g_tilde_postselect(const SampleBatch& batch, int k, const EstimateOptions& options) {
    require_k(k);
    const auto h = histogram(batch.counts);
    const auto m = moments(h);
    if (m.total == 0 || h.size() < 2) {
        fail(Error::Kind::AllVacuumEvents, "every event registered zero photons; nothing survives post-selection");
    }

    EstimateReport report;
    report.k = k;
    report.n_events = m.total;
    report.n_retained = m.total - h[0];
    report.p0_hat = 1.0 - static_cast<double>(report.n_retained) / static_cast<double>(report.n_events);
    report.zero_kth_moment = h.size() <= static_cast<std::size_t>(k);

    const auto point = routes(h, k);
    report.g_hat = point.g_hat;
    report.g_tilde_postselect = point.postselect;
    report.g_tilde_corrected = point.corrected;

    if (options.bootstrap_resamples < 2) return report;

    // Resampling events with replacement is a draw from the empirical
    // histogram; integer cumulative counts keep the draw exact.
    std::vector<std::uint64_t> cumulative(h.size());
    std::uint64_t acc = 0;
    for (std::size_t n = 0; n < h.size(); ++n) cumulative[n] = (acc += h[n]);

    const auto resamples = static_cast<std::size_t>(options.bootstrap_resamples);
    std::vector<RouteEstimates> draws(resamples);
    detail::parallel_for(resamples, options.lanes, [&](std::size_t r) {
        std::mt19937_64 engine(derive_seed(batch.seed ^ kBootstrapSalt, r));
        Histogram res(h.size(), 0);
        const double total = static_cast<double>(m.total);
        for (std::uint64_t i = 0; i < m.total; ++i) {
            auto pick = static_cast<std::uint64_t>(to_unit(engine()) * total);
            pick = std::min(pick, m.total - 1);
            const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
            ++res[static_cast<std::size_t>(it - cumulative.begin())];
        }
        draws[r] = routes(res, k);
    });

    std::vector<double> g_hat, post, corr;
    for (const auto& d : draws) {
        if (!d.valid) continue;
        g_hat.push_back(d.g_hat);
        post.push_back(d.postselect);
        corr.push_back(d.corrected);
    }
    report.stderr_g = sample_stddev(g_hat);
    report.stderr_postselect = sample_stddev(post);
    report.stderr_corrected = sample_stddev(corr);
    return report;
}

void write_counts(std::ostream& os, const SampleBatch& batch) {
    for (auto n : batch.counts) os << n << '\n';
}

std::vector<std::uint32_t> read_counts(std::istream& is) {
    std::vector<std::uint32_t> counts;
    std::string line;
    std::size_t row = 0;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty()) continue;
        std::size_t used = 0;
        unsigned long value = 0;
        try {
            value = std::stoul(line, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != line.size() || line.front() == '-') {
            fail(Error::Kind::ParseError, "line " + std::to_string(row) + ": expected a photon count, got '" + line + "'");
        }
        counts.push_back(static_cast<std::uint32_t>(value));
    }
    return counts;
}

}  // namespace subk
