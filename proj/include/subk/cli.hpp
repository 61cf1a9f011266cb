#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include <json.hpp>

#include "subk/bounds.hpp"
#include "subk/io.hpp"
#include "subk/measurement.hpp"
#include "subk/photon_stats.hpp"

namespace subk::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInputError = 1,
    kCriterionNotMet = 2,
};

/// Entry point of the `subk` tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// R grid (uniform from r_min to 1, default r_min = 1/points) with p_min and
/// ratio_bound per k followed by the large-k columns.
SweepTable bound_sweep(const std::vector<int>& ks, int points, std::optional<double> r_min = std::nullopt);

/// g^(k) of s coherent(1) + (1 - s) coherent(r) and of the same mixture
/// with 1/r, per k. Metadata carries the closed-form and numerically refined
/// maxima of every curve.
SweepTable mixture_table(const std::vector<int>& ks, double r, int points);

struct NumericMaximum {
    double s = 0.0;
    double g = 0.0;
};

/// Golden-section maximum of g^(k) along the two-coherent-state mixture.
NumericMaximum numeric_mixture_max(int k, double r);

nlohmann::json to_json(const CorrelationReport& report);
nlohmann::json to_json(const SplitSummary& split);
nlohmann::json to_json(const BoundReport& report);
nlohmann::json to_json(const EstimateReport& report);

}  // namespace subk::cli
