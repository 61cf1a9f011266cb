#include "subk/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include <json.hpp>

#include "subk/errors.hpp"

namespace subk {

namespace {

std::string trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t\r");
    return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_real(const std::string& text, const std::string& where) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc() || ptr != end) {
        fail(Error::Kind::ParseError, where + ": '" + text + "' is not a number");
    }
    return value;
}

PhotonStatistics finish(std::vector<double> probs, const std::string& origin) {
    if (probs.empty()) fail(Error::Kind::ParseError, origin + ": no probabilities found");
    double sum = 0.0;
    for (double p : probs) sum += p;
    if (!(std::abs(sum - 1.0) <= kNormalizationTolerance)) {
        fail(Error::Kind::ParseError, origin + ": probabilities sum to " + format_double(sum) +
                                        ", outside the normalization tolerance 1e-9");
    }
    return make_statistics(probs);
}

PhotonStatistics read_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(Error::Kind::ParseError, std::string("JSON distribution: ") + e.what());
    }
    if (!doc.is_array()) fail(Error::Kind::ParseError, "JSON distribution must be an array of probabilities");
    std::vector<double> probs;
    for (std::size_t n = 0; n < doc.size(); ++n) {
        if (!doc[n].is_number()) {
            fail(Error::Kind::ParseError, "JSON distribution index " + std::to_string(n) + ": not a number");
        }
        const double p = doc[n].get<double>();
        if (p < 0.0) {
            fail(Error::Kind::NegativeProbability,
                 "JSON distribution index " + std::to_string(n) + ": negative probability " + format_double(p));
        }
        probs.push_back(p);
    }
    return finish(std::move(probs), "JSON distribution");
}

PhotonStatistics read_csv_distribution(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t row = 0;
    bool header_seen = false;
    std::map<long long, double> entries;

    while (std::getline(in, line)) {
        ++row;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto cells = split_commas(body);
        const std::string where = "row " + std::to_string(row);
        if (!header_seen) {
            if (cells.size() != 2 || cells[0] != "n" || cells[1] != "p") {
                fail(Error::Kind::ParseError, where + ": expected header 'n,p', got '" + body + "'");
            }
            header_seen = true;
            continue;
        }
        if (cells.size() != 2) fail(Error::Kind::ParseError, where + ": expected 2 columns, got " + std::to_string(cells.size()));

        long long n = -1;
        const auto& n_text = cells[0];
        const auto [ptr, ec] = std::from_chars(n_text.data(), n_text.data() + n_text.size(), n);
        if (n_text.empty() || ec != std::errc() || ptr != n_text.data() + n_text.size() || n < 0) {
            fail(Error::Kind::ParseError, where + ": photon number '" + n_text + "' is not a non-negative integer");
        }
        const double p = parse_real(cells[1], where);
        if (p < 0.0) fail(Error::Kind::NegativeProbability, where + ": negative probability " + cells[1]);
        if (!std::isfinite(p)) fail(Error::Kind::ParseError, where + ": probability is not finite");
        if (!entries.emplace(n, p).second) {
            fail(Error::Kind::ParseError, where + ": photon number " + std::to_string(n) + " listed twice");
        }
    }
    if (!header_seen) fail(Error::Kind::ParseError, "CSV distribution is empty");
    if (entries.empty()) fail(Error::Kind::ParseError, "CSV distribution has no rows");

    std::vector<double> probs(static_cast<std::size_t>(entries.rbegin()->first) + 1, 0.0);
    for (const auto& [n, p] : entries) probs[static_cast<std::size_t>(n)] = p;
    return finish(std::move(probs), "CSV distribution");
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

PhotonStatistics read_distribution(std::istream& is) {
    const std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') return read_json(text);
    return read_csv_distribution(text);
}

PhotonStatistics read_distribution_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(Error::Kind::ParseError, "cannot open distribution file '" + path.string() + "'");
    try {
        return read_distribution(in);
    } catch (const Error& e) {
        throw Error(e.kind(), path.string() + ": " + e.what());
    }
}

void write_distribution_csv(std::ostream& os, const PhotonStatistics& s) {
    os << "n,p\n";
    const auto probs = s.probs();
    for (std::size_t n = 0; n < probs.size(); ++n) {
        if (probs[n] != 0.0) os << n << ',' << format_double(probs[n]) << '\n';
    }
}

void write_distribution_json(std::ostream& os, const PhotonStatistics& s) {
    os << '[';
    const auto probs = s.probs();
    for (std::size_t n = 0; n < probs.size(); ++n) os << (n ? "," : "") << format_double(probs[n]);
    os << "]\n";
}

const std::vector<double>& SweepTable::column(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) fail(Error::Kind::ParseError, "table has no column '" + name + "'");
    return columns[static_cast<std::size_t>(it - names.begin())];
}

void SweepTable::validate() const {
    if (names.size() != columns.size() || names.empty()) {
        fail(Error::Kind::ParseError, "table needs one name per column and at least one column");
    }
    for (const auto& c : columns) {
        if (c.size() != rows()) fail(Error::Kind::ParseError, "table columns differ in length");
    }
    const auto& first = columns.front();
    for (std::size_t i = 1; i < first.size(); ++i) {
        if (!(first[i] > first[i - 1])) {
            fail(Error::Kind::ParseError, "column '" + names.front() + "' is not strictly increasing at row " +
                                              std::to_string(i + 1));
        }
    }
}

void write_csv(std::ostream& os, const SweepTable& table) {
    table.validate();
    for (const auto& [key, value] : table.metadata) os << "# " << key << '=' << value << '\n';
    for (std::size_t c = 0; c < table.names.size(); ++c) os << (c ? "," : "") << table.names[c];
    os << '\n';
    for (std::size_t r = 0; r < table.rows(); ++r) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            os << (c ? "," : "") << format_double(table.columns[c][r]);
        }
        os << '\n';
    }
}

SweepTable read_csv(std::istream& is) {
    SweepTable table;
    std::string line;
    std::size_t row = 0;
    while (std::getline(is, line)) {
        ++row;
        const auto body = trim(line);
        if (body.empty()) continue;
        if (body.front() == '#') {
            const auto meta = trim(std::string_view(body).substr(1));
            const auto eq = meta.find('=');
            if (eq == std::string::npos) {
                table.metadata.emplace_back(meta, "");
            } else {
                table.metadata.emplace_back(meta.substr(0, eq), meta.substr(eq + 1));
            }
            continue;
        }
        const auto cells = split_commas(body);
        if (table.names.empty()) {
            table.names = cells;
            table.columns.assign(cells.size(), {});
            continue;
        }
        if (cells.size() != table.names.size()) {
            fail(Error::Kind::ParseError, "row " + std::to_string(row) + ": expected " +
                                              std::to_string(table.names.size()) + " columns");
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            table.columns[c].push_back(parse_real(cells[c], "row " + std::to_string(row)));
        }
    }
    table.validate();
    return table;
}

}  // namespace subk
