#include "subk/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "subk/errors.hpp"
#include "subk/fock_theory.hpp"
#include "subk/named_states.hpp"

namespace subk::cli {

namespace {

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

std::string join_ints(const std::vector<int>& ks) {
    std::string s;
    for (std::size_t i = 0; i < ks.size(); ++i) s += (i ? "," : "") + std::to_string(ks[i]);
    return s;
}

std::string r_label(double r) { return format_double(r); }

// Writes through `out` when path is "-" or empty, otherwise to the file.
void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& body) {
    if (path.empty() || path == "-") {
        body(out);
        return;
    }
    std::ofstream file(path);
    if (!file) fail(Error::Kind::ParseError, "cannot write output file '" + path + "'");
    body(file);
    file.flush();
    if (!file) fail(Error::Kind::ParseError, "failed while writing output file '" + path + "'");
}

// Smallest n >= k with g < g_fock(k, n), if g < 1.
std::optional<long long> smallest_detectable_n(double g, int k) {
    if (!(g < 1.0)) return std::nullopt;
    if (detect_sub_n(g, k, k)) return k;
    long long lo = k;  // not detectable
    long long hi = 2LL * k;
    while (!detect_sub_n(g, k, hi)) {
        lo = hi;
        if (hi > (1LL << 52)) return std::nullopt;
        hi *= 2;
    }
    while (hi - lo > 1) {
        const long long mid = lo + (hi - lo) / 2;
        (detect_sub_n(g, k, mid) ? hi : lo) = mid;
    }
    return hi;
}

void print_rows(std::ostream& os, const std::string& section, const nlohmann::json& obj) {
    for (const auto& [key, value] : obj.items()) {
        os << section << ',' << key << ',';
        if (value.is_number_float()) {
            os << format_double(value.get<double>());
        } else if (value.is_null()) {
            // absent
        } else if (value.is_string()) {
            os << value.get<std::string>();
        } else {
            os << value.dump();
        }
        os << '\n';
    }
}

void print_document(std::ostream& os, const nlohmann::json& doc, const std::string& format) {
    if (format == "csv") {
        os << "section,field,value\n";
        for (const auto& [section, obj] : doc.items()) {
            if (obj.is_object()) {
                print_rows(os, section, obj);
            } else {
                print_rows(os, "summary", nlohmann::json{{section, obj}});
            }
        }
    } else {
        os << doc.dump(2) << '\n';
    }
}

struct AnalyzeOptions {
    std::string input;
    std::optional<double> g;
    double p0 = 0.0;
    int k = 2;
    std::string format = "json";
};

int cmd_analyze(const AnalyzeOptions& opt, std::ostream& out, std::ostream& err) {
    nlohmann::json doc;
    double g_tilde = 0.0;
    double g_raw = 0.0;
    double p0 = opt.p0;

    if (!opt.input.empty()) {
        const auto stats = read_distribution_file(opt.input);
        if (mean_photon_number(stats) == 0.0) {
            fail(Error::Kind::VacuumOnlyState, opt.input + ": vacuum-only state, g^(k) is undefined");
        }
        const auto corr = correlation_report(stats, opt.k);
        doc["correlation"] = to_json(corr);
        doc["split"] = to_json(split_at_k(stats, opt.k));
        g_raw = corr.g;
        g_tilde = corr.g_tilde;
        p0 = corr.p0;
    } else {
        g_raw = *opt.g;
        if (!(g_raw >= 0.0)) fail(Error::Kind::OutOfRange, "--g must be >= 0");
        if (!(p0 >= 0.0 && p0 < 1.0)) fail(Error::Kind::OutOfRange, "--p0 must lie in [0, 1)");
        g_tilde = std::pow(1.0 - p0, opt.k - 1) * g_raw;
    }

    const double gm = g_min(opt.k);
    const bool criterion = detect_sub_n(g_tilde, opt.k, opt.k);
    nlohmann::json detection = {
        {"k", opt.k},
        {"g_min", gm},
        {"g", g_raw},
        {"g_tilde", g_tilde},
        {"criterion_met", criterion},
    };
    const auto n_detect = smallest_detectable_n(g_raw, opt.k);
    detection["smallest_detectable_n"] = n_detect ? nlohmann::json(*n_detect) : nlohmann::json();
    doc["detection"] = detection;

    if (g_tilde == 0.0) {
        doc["bounds"] = {{"applicable", false}, {"reason", "g = 0: no weight on k or more photons, P = 1"}};
    } else if (std::log(g_tilde) - log_g_min(opt.k) <= 1e-12) {
        auto bounds = to_json(bound_report(opt.k, g_raw, p0));
        bounds["applicable"] = true;
        doc["bounds"] = bounds;
    } else {
        doc["bounds"] = {{"applicable", false}, {"reason", "g_tilde >= g_min: no sub-k bound"}};
    }

    print_document(out, doc, opt.format);
    if (!criterion) {
        err << "criterion not met: g_tilde = " << format_double(g_tilde) << " >= g_min(" << opt.k
            << ") = " << format_double(gm) << '\n';
        return kCriterionNotMet;
    }
    return kSuccess;
}

struct SweepOptions {
    std::vector<int> ks{2, 3, 4, 5, 100};
    int points = 500;
    std::optional<double> r_min;
    std::string output = "-";
};

struct MixtureOptions {
    std::vector<int> ks{2, 3, 4};
    double r = 10.0;
    int points = 1001;
    std::string output = "-";
};

struct StateOptions {
    std::string kind;
    int k = 2;
    std::optional<double> mean;
    std::optional<double> lambda;
};

int cmd_state(const StateOptions& opt, std::ostream& out) {
    nlohmann::json doc;
    doc["kind"] = opt.kind;
    doc["k"] = opt.k;
    doc["g_min"] = g_min(opt.k);

    std::optional<PhotonStatistics> probe;
    if (opt.kind == "coherent") {
        const double x = coherent_threshold(opt.k);
        doc["threshold_mean_n"] = x;
        doc["g_tilde_at_threshold"] = g_tilde_k(coherent(x), opt.k);
        doc["large_k_limit_mean_n"] = coherent_threshold_limit();
        if (opt.lambda) fail(Error::Kind::OutOfRange, "--lambda applies to thermal states only");
        if (opt.mean) probe = coherent(*opt.mean);
    } else {
        const double lambda = thermal_threshold(opt.k);
        doc["threshold_lambda"] = lambda;
        doc["threshold_mean_n"] = lambda / (1.0 - lambda);
        doc["g_tilde_at_threshold"] = g_tilde_k(thermal(lambda), opt.k);
        doc["large_k_limit_lambda"] = 0.0;
        if (opt.mean && opt.lambda) fail(Error::Kind::OutOfRange, "give either --mean or --lambda, not both");
        if (opt.mean) probe = thermal(thermal_lambda_from_mean(*opt.mean));
        if (opt.lambda) probe = thermal(*opt.lambda);
    }

    if (probe) {
        nlohmann::json state;
        state["mean_n"] = mean_photon_number(*probe);
        if (state["mean_n"].get<double>() > 0.0) {
            const auto corr = correlation_report(*probe, opt.k);
            state["g"] = corr.g;
            state["p0"] = corr.p0;
            state["g_tilde"] = corr.g_tilde;
            state["criterion_met"] = detect_sub_n(corr.g_tilde, opt.k, opt.k);
        }
        doc["state"] = state;
    }
    out << doc.dump(2) << '\n';
    return kSuccess;
}

struct SimulateOptions {
    std::string input;
    int k = 2;
    std::size_t events = 1000000;
    std::uint64_t seed = 1;
    int bootstrap = 200;
    std::string export_path;
};

int cmd_simulate(const SimulateOptions& opt, std::ostream& out) {
    const auto stats = read_distribution_file(opt.input);
    const auto batch = sample(stats, opt.events, opt.seed, opt.input);
    if (!opt.export_path.empty()) emit(opt.export_path, out, [&](std::ostream& os) { write_counts(os, batch); });

    EstimateOptions est;
    est.bootstrap_resamples = opt.bootstrap;
    EstimateReport report;
    try {
        report = estimate_g_tilde_postselect(batch, opt.k, est);
    } catch (const Error& e) {
        if (e.kind() != Error::Kind::AllVacuumEvents) throw;
        throw Error(e.kind(), std::string(e.what()) + " (source has p0 = " + format_double(stats.p0()) +
                                  "; raise --events or use a brighter source)");
    }
    auto doc = to_json(report);
    doc["seed"] = opt.seed;
    doc["source"] = opt.input;
    doc["g_tilde_exact"] = g_tilde_k(stats, opt.k);
    out << doc.dump(2) << '\n';
    return kSuccess;
}

struct GenerateOptions {
    std::string kind;
    std::optional<long long> n;
    std::optional<double> mean;
    std::optional<double> lambda;
    std::optional<double> w;
    int k = 2;
    std::string format = "csv";
    std::string output = "-";
};

StateSpec spec_from(const GenerateOptions& opt) {
    auto need = [&](bool present, const char* flag) {
        if (!present) fail(Error::Kind::OutOfRange, "--kind " + opt.kind + " needs " + flag);
    };
    if (opt.kind == "fock") {
        need(opt.n.has_value(), "--n");
        return FockSpec{*opt.n};
    }
    if (opt.kind == "coherent") {
        need(opt.mean.has_value(), "--mean");
        return CoherentSpec{*opt.mean};
    }
    if (opt.kind == "thermal") {
        if (opt.mean && opt.lambda) fail(Error::Kind::OutOfRange, "give either --mean or --lambda, not both");
        need(opt.mean || opt.lambda, "--mean or --lambda");
        return ThermalSpec{opt.lambda ? *opt.lambda : thermal_lambda_from_mean(*opt.mean)};
    }
    need(opt.w.has_value(), "--w");
    return TwoPointSpec{opt.k, *opt.w};
}

}  // namespace

nlohmann::json to_json(const CorrelationReport& r) {
    return {{"k", r.k}, {"mean_n", r.mean_n}, {"g", r.g}, {"p0", r.p0}, {"g_tilde", r.g_tilde}};
}

nlohmann::json to_json(const SplitSummary& s) {
    return {{"k", s.k},
            {"p", s.P},
            {"q", s.Q},
            {"p_tilde", s.P_tilde},
            {"n_p", optional_json(s.N_P)},
            {"n_q", optional_json(s.N_Q)},
            {"g_q", optional_json(s.g_Q)}};
}

nlohmann::json to_json(const BoundReport& b) {
    return {{"k", b.k},
            {"g_input", b.g_input},
            {"p0", b.p0},
            {"g_tilde", b.g_tilde},
            {"r", b.R},
            {"q_max", b.q_max},
            {"p_min", b.p_min},
            {"p_opt", b.p_opt},
            {"ratio_bound", b.ratio_bound},
            {"large_k_p", b.large_k_p}};
}

nlohmann::json to_json(const EstimateReport& e) {
    return {{"k", e.k},
            {"g_hat", e.g_hat},
            {"p0_hat", e.p0_hat},
            {"g_tilde_postselect", e.g_tilde_postselect},
            {"g_tilde_corrected", e.g_tilde_corrected},
            {"n_events", e.n_events},
            {"n_retained", e.n_retained},
            {"stderr_g", e.stderr_g},
            {"stderr_postselect", e.stderr_postselect},
            {"stderr_corrected", e.stderr_corrected},
            {"zero_kth_moment", e.zero_kth_moment}};
}

SweepTable bound_sweep(const std::vector<int>& ks, int points, std::optional<double> r_min) {
    if (points < 10) fail(Error::Kind::OutOfRange, "sweep needs at least 10 points");
    if (ks.empty()) fail(Error::Kind::OutOfRange, "sweep needs at least one k");
    const double start = r_min.value_or(1.0 / points);
    if (!(start > 0.0 && start < 1.0)) fail(Error::Kind::OutOfRange, "--r-min must lie in (0, 1)");

    SweepTable table;
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        grid[static_cast<std::size_t>(i)] = (i == points - 1) ? 1.0 : start + (1.0 - start) * i / (points - 1);
    }
    table.names.push_back("R");
    table.columns.push_back(grid);
    for (int k : ks) {
        std::vector<double> p(grid.size()), ratio(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            p[i] = p_min_at_ratio(k, grid[i]);
            ratio[i] = ratio_bound_at_ratio(k, grid[i]);
        }
        table.names.push_back("p_min_k" + std::to_string(k));
        table.columns.push_back(std::move(p));
        table.names.push_back("ratio_bound_k" + std::to_string(k));
        table.columns.push_back(std::move(ratio));
    }
    std::vector<double> large_p(grid.size()), large_ratio(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        large_p[i] = large_k_p(grid[i]);
        large_ratio[i] = large_k_ratio(grid[i]);
    }
    table.names.push_back("large_k_p");
    table.columns.push_back(std::move(large_p));
    table.names.push_back("large_k_ratio");
    table.columns.push_back(std::move(large_ratio));

    table.metadata = {{"k_values", join_ints(ks)}, {"points", std::to_string(points)}, {"r_min", format_double(start)}};
    return table;
}

NumericMaximum numeric_mixture_max(int k, double r) {
    const auto first = coherent(1.0);
    const auto second = coherent(r);
    auto value = [&](double s) { return g_k(mix(first, second, s), k); };

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0, b = 1.0;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = value(c), fd = value(d);
    while (b - a > 1e-11) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = value(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = value(d);
        }
    }
    const double s = 0.5 * (a + b);
    return {s, value(s)};
}

SweepTable mixture_table(const std::vector<int>& ks, double r, int points) {
    if (!(r > 0.0)) fail(Error::Kind::OutOfRange, "--r must be > 0");
    if (std::abs(r - 1.0) < 1e-6) fail(Error::Kind::DegenerateRatio, "r = 1: the mixture has constant g^(k)");
    if (ks.empty()) fail(Error::Kind::OutOfRange, "mixture needs at least one k");

    SweepTable table;
    table.metadata = {{"k_values", join_ints(ks)}, {"r", r_label(r)}, {"points", std::to_string(points)}};
    bool first_curve = true;
    for (int k : ks) {
        for (const double ratio : {r, 1.0 / r}) {
            const auto curve = mixture_sweep(k, ratio, points);
            if (first_curve) {
                std::vector<double> s;
                for (const auto& [x, g] : curve) s.push_back(x);
                table.names.push_back("s");
                table.columns.push_back(std::move(s));
                first_curve = false;
            }
            std::vector<double> g;
            for (const auto& [x, value] : curve) g.push_back(value);
            const std::string label = "k" + std::to_string(k) + (ratio == r ? "_r" : "_rinv");
            table.names.push_back("g_" + label);
            table.columns.push_back(std::move(g));

            const auto formula = mixture_extremum(k, ratio, 1.0);
            const auto numeric = numeric_mixture_max(k, ratio);
            table.metadata.emplace_back("s_star_" + label, format_double(formula.s_star));
            table.metadata.emplace_back("g_max_" + label, format_double(formula.g_max));
            table.metadata.emplace_back("s_numeric_" + label, format_double(numeric.s));
            table.metadata.emplace_back("g_numeric_" + label, format_double(numeric.g));
        }
    }
    return table;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"subk: higher-order photon correlations and sub-k photon projection bounds"};
    app.require_subcommand(1);

    AnalyzeOptions analyze_opt;
    auto* analyze = app.add_subcommand("analyze", "correlations, sub-k split and bounds for a distribution or a bare g");
    auto* input_flag = analyze->add_option("--input", analyze_opt.input, "distribution file (CSV n,p or JSON array)");
    auto* g_flag = analyze->add_option("--g", analyze_opt.g, "measured g^(k) instead of a distribution");
    input_flag->excludes(g_flag);
    analyze->add_option("--p0", analyze_opt.p0, "assumed vacuum probability for --g")->needs(g_flag);
    analyze->add_option("--k", analyze_opt.k, "correlation order")->check(CLI::Range(2, 1000000));
    analyze->add_option("--format", analyze_opt.format)->check(CLI::IsMember({"json", "csv"}));

    SweepOptions sweep_opt;
    auto* sweep = app.add_subcommand("sweep", "p_min and ratio bound over R = g_tilde/g_min");
    sweep->add_option("--k", sweep_opt.ks, "orders to tabulate")->delimiter(',')->check(CLI::Range(2, 1000000));
    sweep->add_option("--points", sweep_opt.points)->check(CLI::Range(10, 100000000));
    sweep->add_option("--r-min", sweep_opt.r_min, "first R of the grid (default 1/points)");
    sweep->add_option("--output", sweep_opt.output, "CSV path, '-' for stdout");

    MixtureOptions mixture_opt;
    auto* mixture = app.add_subcommand("mixture", "g^(k) along a mixture of two coherent states");
    mixture->add_option("--k", mixture_opt.ks)->delimiter(',')->check(CLI::Range(2, 1000));
    mixture->add_option("--r", mixture_opt.r, "ratio of mean photon numbers");
    mixture->add_option("--points", mixture_opt.points)->check(CLI::Range(2, 100000000));
    mixture->add_option("--output", mixture_opt.output, "CSV path, '-' for stdout");

    StateOptions state_opt;
    auto* state = app.add_subcommand("state", "coherent / thermal thresholds for the sub-k criterion");
    state->add_option("--kind", state_opt.kind)->required()->check(CLI::IsMember({"coherent", "thermal"}));
    state->add_option("--k", state_opt.k)->check(CLI::Range(2, 1000000));
    state->add_option("--mean", state_opt.mean, "also evaluate the state with this mean photon number");
    state->add_option("--lambda", state_opt.lambda, "thermal only: evaluate the state with this lambda");

    SimulateOptions sim_opt;
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo photon counting and post-selected g_tilde");
    simulate->add_option("--input", sim_opt.input)->required();
    simulate->add_option("--k", sim_opt.k)->check(CLI::Range(2, 1000));
    simulate->add_option("--events", sim_opt.events)->check(CLI::Range(std::size_t{1}, std::size_t{1} << 40));
    simulate->add_option("--seed", sim_opt.seed);
    simulate->add_option("--bootstrap", sim_opt.bootstrap, "bootstrap resamples for standard errors");
    simulate->add_option("--export", sim_opt.export_path, "write the counts, one per line");

    GenerateOptions gen_opt;
    auto* generate = app.add_subcommand("generate", "write a named state as a distribution file");
    generate->add_option("--kind", gen_opt.kind)->required()->check(
        CLI::IsMember({"fock", "coherent", "thermal", "two-point"}));
    generate->add_option("--n", gen_opt.n, "fock photon number");
    generate->add_option("--mean", gen_opt.mean, "coherent or thermal mean photon number");
    generate->add_option("--lambda", gen_opt.lambda, "thermal lambda");
    generate->add_option("--w", gen_opt.w, "two-point weight on |k-1>");
    generate->add_option("--k", gen_opt.k, "two-point order")->check(CLI::Range(2, 1000000));
    generate->add_option("--format", gen_opt.format)->check(CLI::IsMember({"json", "csv"}));
    generate->add_option("--output", gen_opt.output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kInputError;
    }

    try {
        if (*analyze) {
            if (analyze_opt.input.empty() && !analyze_opt.g) {
                err << "error: analyze needs --input or --g\n";
                return kInputError;
            }
            return cmd_analyze(analyze_opt, out, err);
        }
        if (*sweep) {
            const auto table = bound_sweep(sweep_opt.ks, sweep_opt.points, sweep_opt.r_min);
            emit(sweep_opt.output, out, [&](std::ostream& os) { write_csv(os, table); });
            return kSuccess;
        }
        if (*mixture) {
            const auto table = mixture_table(mixture_opt.ks, mixture_opt.r, mixture_opt.points);
            emit(mixture_opt.output, out, [&](std::ostream& os) { write_csv(os, table); });
            return kSuccess;
        }
        if (*state) return cmd_state(state_opt, out);
        if (*simulate) return cmd_simulate(sim_opt, out);
        if (*generate) {
            const auto stats = build_state(spec_from(gen_opt));
            emit(gen_opt.output, out, [&](std::ostream& os) {
                if (gen_opt.format == "json") {
                    write_distribution_json(os, stats);
                } else {
                    write_distribution_csv(os, stats);
                }
            });
            return kSuccess;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}

}  // namespace subk::cli
