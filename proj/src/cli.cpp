#include "frisch/cli.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "frisch/dataio.hpp"
#include "frisch/demand_oracle.hpp"
#include "frisch/elasticity.hpp"
#include "frisch/monte_carlo.hpp"
#include "frisch/version.hpp"

namespace frisch {

namespace {

using nlohmann::json;

constexpr int k_exit_ok = 0;
constexpr int k_exit_failed = 1;
constexpr int k_exit_bad_input = 2;

std::string format_significant(double v, int digits) {
    std::array<char, 64> buf;
    const int len = std::snprintf(buf.data(), buf.size(), "%.*g", digits, v);
    return std::string(buf.data(), static_cast<std::size_t>(len));
}

std::string format_shortest(double v) {
    std::array<char, 64> buf;
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    parts.push_back(current);
    return parts;
}

double parse_double(const std::string& text) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw std::invalid_argument("invalid number '" + text + "'");
    }
    return value;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> values;
    for (const std::string& item : split(text, ',')) {
        values.push_back(parse_double(item));
    }
    return values;
}

/// "start:stop:step" inclusive of stop within half a step; a bare number is
/// a single-point grid.
std::vector<double> parse_grid(const std::string& spec) {
    const std::vector<std::string> parts = split(spec, ':');
    if (parts.size() == 1) {
        return {parse_double(parts[0])};
    }
    if (parts.size() != 3) {
        throw std::invalid_argument("grid must be 'start:stop:step' or a single value, got '" +
                                    spec + "'");
    }
    const double start = parse_double(parts[0]);
    const double stop = parse_double(parts[1]);
    const double step = parse_double(parts[2]);
    if (!(step > 0.0)) {
        throw std::invalid_argument("grid step must be positive, got '" + parts[2] + "'");
    }
    if (stop < start) {
        throw std::invalid_argument("grid stop must not precede start in '" + spec + "'");
    }
    std::vector<double> grid;
    for (std::size_t k = 0;; ++k) {
        const double v = start + static_cast<double>(k) * step;
        if (v > stop + 0.5 * step) break;
        grid.push_back(v);
        if (grid.size() > 10'000'000) {
            throw std::invalid_argument("grid '" + spec + "' is too large");
        }
    }
    return grid;
}

std::vector<IncomeElasticity> to_epsilons(const std::vector<double>& values) {
    std::vector<IncomeElasticity> out;
    out.reserve(values.size());
    for (double v : values) out.emplace_back(v);
    return out;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::array<char, 32> buf;
    std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return std::string(buf.data());
}

json make_manifest(const std::string& subcommand, std::uint64_t seed, json parameters) {
    json manifest;
    manifest["schema_version"] = 1;
    manifest["tool"] = k_tool_name;
    manifest["version"] = k_version;
    manifest["subcommand"] = subcommand;
    manifest["seed"] = seed;
    manifest["timestamp"] = utc_timestamp();
    manifest["parameters"] = std::move(parameters);
    return manifest;
}

json matrix_to_json(const ElasticityMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Output destination plus manifest sidecar. Writing to a file places the
/// manifest next to it; writing to the primary stream sends the manifest to
/// the error stream so the payload stays clean.
struct Sink {
    std::string output = "-";
    std::string manifest;
};

void add_sink_flags(CLI::App* cmd, Sink& sink) {
    cmd->add_option("--output", sink.output, "output destination ('-' for stdout)")
        ->capture_default_str();
    cmd->add_option("--manifest", sink.manifest,
                    "manifest destination (default: alongside --output, or stderr)");
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    file << content;
    if (!file) {
        throw std::runtime_error("failed writing '" + path + "'");
    }
}

void emit(const Sink& sink,
          const std::string& content,
          const json& manifest,
          std::ostream& out,
          std::ostream& err) {
    if (sink.output == "-") {
        out << content;
    } else {
        write_text_file(sink.output, content);
    }
    std::string manifest_path = sink.manifest;
    if (manifest_path.empty()) {
        manifest_path = sink.output == "-" ? "-" : sink.output + ".manifest.json";
    }
    const std::string manifest_text = manifest.dump(2) + "\n";
    if (manifest_path == "-") {
        err << manifest_text;
    } else {
        write_text_file(manifest_path, manifest_text);
    }
}

struct DistFlags {
    double rho_mean = -1.26;
    double rho_sd = 0.1;
    double omega_min = 0.0001;
    double omega_max = 0.1;
    std::uint64_t draws = 100000;
    std::uint64_t seed = 42;
    double lower_pct = 2.5;
    double upper_pct = 97.5;

    ParamDistributions dist() const { return {rho_mean, rho_sd, omega_min, omega_max}; }
    SimulationConfig config() const { return {draws, seed, lower_pct, upper_pct}; }

    void to_params(json& params) const {
        params["rho-mean"] = rho_mean;
        params["rho-sd"] = rho_sd;
        params["omega-min"] = omega_min;
        params["omega-max"] = omega_max;
        params["draws"] = draws;
        params["seed"] = seed;
        params["lower-pct"] = lower_pct;
        params["upper-pct"] = upper_pct;
    }
};

void add_dist_flags(CLI::App* cmd, DistFlags& flags) {
    cmd->add_option("--rho-mean", flags.rho_mean, "mean of the Frisch parameter distribution")
        ->capture_default_str();
    cmd->add_option("--rho-sd", flags.rho_sd, "standard deviation of the Frisch parameter")
        ->capture_default_str();
    cmd->add_option("--omega-min", flags.omega_min, "lower bound of the budget share distribution")
        ->capture_default_str();
    cmd->add_option("--omega-max", flags.omega_max, "upper bound of the budget share distribution")
        ->capture_default_str();
    cmd->add_option("--draws", flags.draws, "Monte-Carlo draw count")->capture_default_str();
    cmd->add_option("--seed", flags.seed, "random seed")->capture_default_str();
    cmd->add_option("--lower-pct", flags.lower_pct, "lower band percentile")->capture_default_str();
    cmd->add_option("--upper-pct", flags.upper_pct, "upper band percentile")->capture_default_str();
}

std::string band_output(const CredibleBand& band, const std::string& format) {
    if (format == "csv") {
        return emit_curve(band);
    }
    json doc;
    doc["grid"] = band.grid;
    doc["lower"] = band.lower;
    doc["median"] = band.median;
    doc["upper"] = band.upper;
    return doc.dump(2) + "\n";
}

std::vector<UtilityTerm> parse_terms(const std::string& kind, const std::string& params) {
    std::vector<UtilityTerm> terms;
    for (const std::string& item : split(params, ',')) {
        const std::vector<std::string> fields = split(item, ':');
        if (kind == "log") {
            if (fields.size() != 1) {
                throw std::invalid_argument("log utility takes plain coefficients, got '" + item +
                                            "'");
            }
            terms.push_back(UtilityTerm::log_term(parse_double(fields[0])));
        } else if (kind == "power") {
            if (fields.size() != 2) {
                throw std::invalid_argument(
                    "power utility takes coefficient:exponent pairs, got '" + item + "'");
            }
            terms.push_back(
                UtilityTerm::power_term(parse_double(fields[0]), parse_double(fields[1])));
        } else {
            if (fields.size() == 2 && fields[0] == "log") {
                terms.push_back(UtilityTerm::log_term(parse_double(fields[1])));
            } else if (fields.size() == 3 && fields[0] == "pow") {
                terms.push_back(
                    UtilityTerm::power_term(parse_double(fields[1]), parse_double(fields[2])));
            } else {
                throw std::invalid_argument(
                    "mixed utility takes 'log:a' or 'pow:a:b' items, got '" + item + "'");
            }
        }
    }
    return terms;
}

std::string json_value_to_token(const json& value) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_number_unsigned()) return std::to_string(value.get<std::uint64_t>());
    if (value.is_number_integer()) return std::to_string(value.get<std::int64_t>());
    if (value.is_number_float()) return format_shortest(value.get<double>());
    if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
    throw std::invalid_argument("manifest parameter has unsupported type: " + value.dump());
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{
        "Forecast uncompensated own- and cross-price elasticities of demand from "
        "income-elasticity estimates under additive preferences, with Monte-Carlo "
        "credible bands and a numerical demand oracle."};
    app.name(k_tool_name);
    app.set_version_flag("--version", std::string(k_tool_name) + " " + k_version);
    app.require_subcommand(1);

    // --- own ---------------------------------------------------------------
    struct {
        double epsilon = 0.0;
        double omega = 0.0;
        double rho = 0.0;
        Sink sink;
    } own;
    auto* own_cmd = app.add_subcommand("own", "Own-price elasticity of one bundle");
    own_cmd->add_option("--epsilon", own.epsilon, "income elasticity of the bundle")->required();
    own_cmd->add_option("--omega", own.omega, "budget share of the bundle, in (0, 1]")->required();
    own_cmd->add_option("--rho", own.rho, "elasticity of the marginal utility of income (< 0)")
        ->required();
    add_sink_flags(own_cmd, own.sink);

    // --- cross -------------------------------------------------------------
    struct {
        double epsilon_a = 0.0;
        double epsilon_b = 0.0;
        double omega_b = 0.0;
        double rho = 0.0;
        Sink sink;
    } cross;
    auto* cross_cmd = app.add_subcommand(
        "cross", "Cross-price elasticity of bundle A with respect to the price of bundle B");
    cross_cmd->add_option("--epsilon-a", cross.epsilon_a, "income elasticity of bundle A")
        ->required();
    cross_cmd->add_option("--epsilon-b", cross.epsilon_b, "income elasticity of bundle B")
        ->required();
    cross_cmd->add_option("--omega-b", cross.omega_b, "budget share of bundle B, in (0, 1]")
        ->required();
    cross_cmd->add_option("--rho", cross.rho, "elasticity of the marginal utility of income (< 0)")
        ->required();
    add_sink_flags(cross_cmd, cross.sink);

    // --- matrix ------------------------------------------------------------
    struct {
        std::string shares;
        std::string epsilons;
        double rho = 0.0;
        std::string labels;
        Sink sink;
    } matrix;
    auto* matrix_cmd = app.add_subcommand(
        "matrix", "Full price-elasticity matrix of a complete budget partition");
    matrix_cmd->add_option("--shares", matrix.shares, "comma-separated budget shares (sum to 1)")
        ->required();
    matrix_cmd
        ->add_option("--epsilons", matrix.epsilons,
                     "comma-separated income elasticities (share-weighted sum 1)")
        ->required();
    matrix_cmd->add_option("--rho", matrix.rho, "elasticity of the marginal utility of income (< 0)")
        ->required();
    matrix_cmd->add_option("--labels", matrix.labels, "comma-separated bundle labels");
    add_sink_flags(matrix_cmd, matrix.sink);

    // --- simulate-own ------------------------------------------------------
    struct {
        std::string grid = "0:2:0.05";
        DistFlags dist;
        std::string format = "csv";
        unsigned workers = 1;
        Sink sink;
    } sim_own;
    auto* sim_own_cmd = app.add_subcommand(
        "simulate-own", "Monte-Carlo credible band of the own-price elasticity over a grid");
    sim_own_cmd
        ->add_option("--grid", sim_own.grid, "income elasticity grid 'start:stop:step' or value")
        ->capture_default_str();
    add_dist_flags(sim_own_cmd, sim_own.dist);
    sim_own_cmd->add_option("--format", sim_own.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sim_own_cmd->add_option("--workers", sim_own.workers, "worker threads (never affects results)")
        ->capture_default_str();
    add_sink_flags(sim_own_cmd, sim_own.sink);

    // --- simulate-cross ----------------------------------------------------
    struct {
        std::string grid = "0:2:0.05";
        double epsilon_b = 0.0;
        DistFlags dist;
        std::string format = "csv";
        unsigned workers = 1;
        Sink sink;
    } sim_cross;
    auto* sim_cross_cmd = app.add_subcommand(
        "simulate-cross",
        "Monte-Carlo credible band of the cross-price elasticity over a grid of bundle-A "
        "income elasticities");
    sim_cross_cmd
        ->add_option("--grid", sim_cross.grid,
                     "bundle-A income elasticity grid 'start:stop:step' or value")
        ->capture_default_str();
    sim_cross_cmd->add_option("--epsilon-b", sim_cross.epsilon_b, "income elasticity of bundle B")
        ->required();
    add_dist_flags(sim_cross_cmd, sim_cross.dist);
    sim_cross_cmd->add_option("--format", sim_cross.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sim_cross_cmd
        ->add_option("--workers", sim_cross.workers, "worker threads (never affects results)")
        ->capture_default_str();
    add_sink_flags(sim_cross_cmd, sim_cross.sink);

    // --- sensitivity ---------------------------------------------------------
    struct {
        double epsilon = 0.0;
        double rho = 0.0;
        std::string omega_grid;
        Sink sink;
    } sensitivity;
    auto* sensitivity_cmd = app.add_subcommand(
        "sensitivity", "Own-price elasticity sweep across budget shares at fixed rho and epsilon");
    sensitivity_cmd->add_option("--epsilon", sensitivity.epsilon, "income elasticity")->required();
    sensitivity_cmd
        ->add_option("--rho", sensitivity.rho, "elasticity of the marginal utility of income (< 0)")
        ->required();
    sensitivity_cmd
        ->add_option("--omega-grid", sensitivity.omega_grid,
                     "budget share grid 'start:stop:step' or value")
        ->required();
    add_sink_flags(sensitivity_cmd, sensitivity.sink);

    // --- validate ------------------------------------------------------------
    struct {
        std::string data;
        DistFlags dist;
        double min_coverage = 0.9;
        unsigned workers = 1;
        Sink sink;
    } validate;
    auto* validate_cmd = app.add_subcommand(
        "validate", "Check observed (epsilon, eta) records against the simulated band");
    validate_cmd->add_option("--data", validate.data, "records CSV path ('-' for stdin)")
        ->required();
    add_dist_flags(validate_cmd, validate.dist);
    validate_cmd
        ->add_option("--min-coverage", validate.min_coverage,
                     "fraction of records that must fall inside the band")
        ->capture_default_str();
    validate_cmd->add_option("--workers", validate.workers, "worker threads (never affects results)")
        ->capture_default_str();
    add_sink_flags(validate_cmd, validate.sink);

    // --- oracle --------------------------------------------------------------
    struct {
        std::string utility = "log";
        std::string params;
        std::string prices;
        double expenditure = 0.0;
        double step = 1e-5;
        double tolerance = 1e-3;
        Sink sink;
    } oracle;
    auto* oracle_cmd = app.add_subcommand(
        "oracle",
        "Maximize an explicit additive utility numerically and check the measured "
        "elasticities against the closed-form prediction");
    oracle_cmd->add_option("--utility", oracle.utility, "utility family")
        ->check(CLI::IsMember({"log", "power", "mixed"}))
        ->capture_default_str();
    oracle_cmd
        ->add_option("--params", oracle.params,
                     "terms: log 'a1,a2,...'; power 'a1:b1,...'; mixed 'log:a,pow:a:b,...'")
        ->required();
    oracle_cmd->add_option("--prices", oracle.prices, "comma-separated bundle prices")->required();
    oracle_cmd->add_option("--expenditure", oracle.expenditure, "total expenditure")->required();
    oracle_cmd->add_option("--step", oracle.step, "finite-difference log step, in (0, 1e-3]")
        ->capture_default_str();
    oracle_cmd->add_option("--tolerance", oracle.tolerance, "theorem check tolerance")
        ->capture_default_str();
    add_sink_flags(oracle_cmd, oracle.sink);

    // --- replay ----------------------------------------------------------------
    struct {
        std::string manifest;
        std::string output = "-";
        unsigned workers = 1;
    } replay;
    auto* replay_cmd =
        app.add_subcommand("replay", "Re-run a previously recorded manifest bit-identically");
    replay_cmd->add_option("--manifest", replay.manifest, "manifest JSON path")->required();
    replay_cmd->add_option("--output", replay.output, "output destination ('-' for stdout)")
        ->capture_default_str();
    replay_cmd->add_option("--workers", replay.workers, "worker threads (never affects results)")
        ->capture_default_str();

    try {
        std::vector<std::string> full_args = args;
        full_args.insert(full_args.begin(), k_tool_name);
        std::vector<const char*> argv;
        argv.reserve(full_args.size());
        for (const std::string& s : full_args) argv.push_back(s.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e, out, err);
        }
        err << "error: " << e.what() << "\n";
        return k_exit_bad_input;
    }

    try {
        if (own_cmd->parsed()) {
            const double eta = own_price_elasticity(Rho(own.rho), BudgetShare(own.omega),
                                                    IncomeElasticity(own.epsilon));
            json params{{"epsilon", own.epsilon}, {"omega", own.omega}, {"rho", own.rho}};
            emit(own.sink, format_significant(eta, 12) + "\n", make_manifest("own", 0, params), out,
                 err);
            return k_exit_ok;
        }

        if (cross_cmd->parsed()) {
            const double psi =
                cross_price_elasticity(IncomeElasticity(cross.epsilon_a),
                                       IncomeElasticity(cross.epsilon_b),
                                       BudgetShare(cross.omega_b), Rho(cross.rho));
            json params{{"epsilon-a", cross.epsilon_a},
                        {"epsilon-b", cross.epsilon_b},
                        {"omega-b", cross.omega_b},
                        {"rho", cross.rho}};
            emit(cross.sink, format_significant(psi, 12) + "\n", make_manifest("cross", 0, params),
                 out, err);
            return k_exit_ok;
        }

        if (matrix_cmd->parsed()) {
            const std::vector<double> share_values = parse_list(matrix.shares);
            const std::vector<double> epsilon_values = parse_list(matrix.epsilons);
            std::vector<BudgetShare> shares;
            shares.reserve(share_values.size());
            for (double v : share_values) shares.emplace_back(v);
            std::vector<std::string> labels;
            if (!matrix.labels.empty()) labels = split(matrix.labels, ',');
            const BundleSystem system(std::move(shares), to_epsilons(epsilon_values),
                                      Rho(matrix.rho), std::move(labels));
            const ElasticityMatrix m = full_matrix(system);

            json doc;
            doc["labels"] = m.labels();
            doc["matrix"] = matrix_to_json(m);
            doc["homogeneity_residuals"] = homogeneity_residuals(m, system);
            doc["cournot_residuals"] = cournot_residuals(m, system);
            doc["share_sum_residual"] = system.share_sum_residual();
            doc["engel_residual"] = system.engel_residual();

            json params{{"shares", matrix.shares}, {"epsilons", matrix.epsilons},
                        {"rho", matrix.rho}};
            if (!matrix.labels.empty()) params["labels"] = matrix.labels;
            emit(matrix.sink, doc.dump(2) + "\n", make_manifest("matrix", 0, params), out, err);
            return k_exit_ok;
        }

        if (sim_own_cmd->parsed()) {
            const std::vector<IncomeElasticity> grid = to_epsilons(parse_grid(sim_own.grid));
            const CredibleBand band = simulate_own_band(grid, sim_own.dist.dist(),
                                                        sim_own.dist.config(), sim_own.workers);
            json params{{"grid", sim_own.grid}, {"format", sim_own.format}};
            sim_own.dist.to_params(params);
            emit(sim_own.sink, band_output(band, sim_own.format),
                 make_manifest("simulate-own", sim_own.dist.seed, params), out, err);
            return k_exit_ok;
        }

        if (sim_cross_cmd->parsed()) {
            const std::vector<IncomeElasticity> grid = to_epsilons(parse_grid(sim_cross.grid));
            const CredibleBand band =
                simulate_cross_band(grid, IncomeElasticity(sim_cross.epsilon_b),
                                    sim_cross.dist.dist(), sim_cross.dist.config(),
                                    sim_cross.workers);
            json params{{"grid", sim_cross.grid},
                        {"epsilon-b", sim_cross.epsilon_b},
                        {"format", sim_cross.format}};
            sim_cross.dist.to_params(params);
            emit(sim_cross.sink, band_output(band, sim_cross.format),
                 make_manifest("simulate-cross", sim_cross.dist.seed, params), out, err);
            return k_exit_ok;
        }

        if (sensitivity_cmd->parsed()) {
            const std::vector<double> omega_values = parse_grid(sensitivity.omega_grid);
            std::vector<BudgetShare> omegas;
            omegas.reserve(omega_values.size());
            for (double v : omega_values) omegas.emplace_back(v);
            const SensitivitySweep sweep = sensitivity_sweep(
                IncomeElasticity(sensitivity.epsilon), Rho(sensitivity.rho), omegas);

            json doc;
            doc["omega"] = omega_values;
            doc["eta"] = sweep.etas;
            doc["max_relative_change"] = sweep.max_relative_change;

            json params{{"epsilon", sensitivity.epsilon},
                        {"rho", sensitivity.rho},
                        {"omega-grid", sensitivity.omega_grid}};
            emit(sensitivity.sink, doc.dump(2) + "\n", make_manifest("sensitivity", 0, params), out,
                 err);
            return k_exit_ok;
        }

        if (validate_cmd->parsed()) {
            std::vector<ObservedRecord> records;
            if (validate.data == "-") {
                records = parse_records(std::cin);
            } else {
                std::ifstream file(validate.data);
                if (!file) {
                    throw std::runtime_error("cannot open '" + validate.data + "' for reading");
                }
                records = parse_records(file);
            }
            if (records.empty()) {
                throw std::runtime_error("no records in '" + validate.data + "'");
            }
            const CoverageReport report =
                coverage(records, validate.dist.dist(), validate.dist.config(), validate.workers);
            const bool passed = report.coverage_fraction >= validate.min_coverage;

            json rows = json::array();
            for (const CoverageRow& row : report.rows) {
                json r;
                r["group"] = row.record.group;
                r["bundle"] = row.record.bundle;
                r["epsilon"] = row.record.epsilon;
                r["eta"] = row.record.eta_observed;
                if (row.record.omega) {
                    r["omega"] = *row.record.omega;
                } else {
                    r["omega"] = nullptr;
                }
                r["lower"] = row.predicted_lower;
                r["median"] = row.predicted_median;
                r["upper"] = row.predicted_upper;
                r["inside"] = row.inside_band;
                rows.push_back(std::move(r));
            }
            json doc;
            doc["records"] = std::move(rows);
            doc["coverage_fraction"] = report.coverage_fraction;
            doc["min_coverage"] = validate.min_coverage;
            doc["passed"] = passed;

            json params{{"data", validate.data}, {"min-coverage", validate.min_coverage}};
            validate.dist.to_params(params);
            emit(validate.sink, doc.dump(2) + "\n",
                 make_manifest("validate", validate.dist.seed, params), out, err);
            return passed ? k_exit_ok : k_exit_failed;
        }

        if (oracle_cmd->parsed()) {
            const AdditiveUtility utility(parse_terms(oracle.utility, oracle.params));
            MarketPoint point;
            point.prices = parse_list(oracle.prices);
            point.expenditure = oracle.expenditure;
            const TheoremCheck check =
                verify_theorem(utility, point, oracle.tolerance, oracle.step);

            json doc;
            doc["quantities"] = check.report.quantities;
            doc["multiplier"] = check.report.multiplier;
            doc["shares"] = check.report.shares;
            doc["numeric_epsilon"] = check.report.numeric_epsilon;
            doc["numeric_marginal_shares"] = check.report.numeric_marginal_shares;
            doc["numeric_rho"] = check.report.numeric_rho;
            doc["numeric_matrix"] = matrix_to_json(check.report.numeric_matrix);
            doc["predicted_matrix"] = matrix_to_json(check.report.predicted_matrix);
            doc["max_abs_error"] = check.report.max_abs_error;
            doc["tolerance"] = oracle.tolerance;
            doc["step"] = oracle.step;
            doc["passed"] = check.passed;

            json params{{"utility", oracle.utility},   {"params", oracle.params},
                        {"prices", oracle.prices},     {"expenditure", oracle.expenditure},
                        {"step", oracle.step},         {"tolerance", oracle.tolerance}};
            emit(oracle.sink, doc.dump(2) + "\n", make_manifest("oracle", 0, params), out, err);
            return check.passed ? k_exit_ok : k_exit_failed;
        }

        if (replay_cmd->parsed()) {
            std::ifstream file(replay.manifest);
            if (!file) {
                throw std::runtime_error("cannot open '" + replay.manifest + "' for reading");
            }
            json manifest;
            file >> manifest;
            const std::string subcommand = manifest.at("subcommand").get<std::string>();
            std::vector<std::string> tokens{subcommand};
            for (const auto& [key, value] : manifest.at("parameters").items()) {
                tokens.push_back("--" + key);
                tokens.push_back(json_value_to_token(value));
            }
            if (subcommand == "simulate-own" || subcommand == "simulate-cross" ||
                subcommand == "validate") {
                tokens.push_back("--workers");
                tokens.push_back(std::to_string(replay.workers));
            }
            tokens.push_back("--output");
            tokens.push_back(replay.output);
            return run(tokens, out, err);
        }
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return k_exit_bad_input;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return k_exit_bad_input;
    }

    err << "error: no subcommand given\n";
    return k_exit_bad_input;
}

}  // namespace frisch
