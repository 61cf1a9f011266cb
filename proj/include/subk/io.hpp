#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "subk/photon_stats.hpp"

namespace subk {

/// Input sums must be within this of 1; they are then renormalized.
inline constexpr double kNormalizationTolerance = 1e-9;

/// Reads a photon-number distribution.
///
/// Two layouts are accepted:
///   - CSV with header `n,p`, one `n,p` row per photon number; photon numbers
///     that never appear have probability 0. Blank lines and lines starting
///     with '#' are skipped.
///   - A JSON array of probabilities indexed from n = 0.
/// The layout is picked from the first non-blank character ('[' means JSON).
/// Errors name the offending row (CSV) or index (JSON).
PhotonStatistics read_distribution(std::istream& is);
PhotonStatistics read_distribution_file(const std::filesystem::path& path);

void write_distribution_csv(std::ostream& os, const PhotonStatistics& s);
void write_distribution_json(std::ostream& os, const PhotonStatistics& s);

/// %.17g: enough digits for an exact double round trip.
std::string format_double(double v);

// Column-oriented numeric table. The first column is the sweep variable and
// must be strictly increasing; metadata is emitted as leading `# key=value`
// lines.
struct SweepTable {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
    std::vector<std::pair<std::string, std::string>> metadata;

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
    const std::vector<double>& column(const std::string& name) const;
    /// Checks equal column lengths and a strictly increasing first column.
    void validate() const;
};

void write_csv(std::ostream& os, const SweepTable& table);
SweepTable read_csv(std::istream& is);

}  // namespace subk
