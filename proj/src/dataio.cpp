#include "frisch/dataio.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>
#include <system_error>

namespace frisch {

namespace {

constexpr const char* k_header = "group,bundle,epsilon,eta,omega";
constexpr std::array<const char*, 5> k_columns = {"group", "bundle", "epsilon", "eta", "omega"};

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(current);
    return fields;
}

[[noreturn]] void fail(std::size_t line_no, std::size_t column, const std::string& what) {
    std::ostringstream msg;
    msg << "line " << line_no << ", column " << column << " (" << k_columns[column - 1]
        << "): " << what;
    throw ParseError(msg.str());
}

double parse_number(const std::string& field, std::size_t line_no, std::size_t column) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || field.empty()) {
        fail(line_no, column, "invalid number '" + field + "'");
    }
    if (!std::isfinite(value)) {
        fail(line_no, column, "value must be finite, got '" + field + "'");
    }
    return value;
}

std::string format_number(double v) {
    std::array<char, 64> buf;
    const auto [ptr, ec] =
        std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), ptr);
}

}  // namespace

std::vector<ObservedRecord> parse_records(std::istream& in) {
    std::vector<ObservedRecord> records;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;

        if (!header_seen) {
            if (line != k_header) {
                throw ParseError("line " + std::to_string(line_no) +
                                 ": expected header '" + k_header + "', got '" + line + "'");
            }
            header_seen = true;
            continue;
        }

        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != k_columns.size()) {
            std::ostringstream msg;
            msg << "line " << line_no << ": expected " << k_columns.size() << " columns, got "
                << fields.size();
            throw ParseError(msg.str());
        }

        ObservedRecord record;
        record.group = fields[0];
        record.bundle = fields[1];
        if (record.group.empty()) fail(line_no, 1, "group must not be empty");
        if (record.bundle.empty()) fail(line_no, 2, "bundle must not be empty");
        record.epsilon = parse_number(fields[2], line_no, 3);
        record.eta_observed = parse_number(fields[3], line_no, 4);
        if (!fields[4].empty()) {
            const double omega = parse_number(fields[4], line_no, 5);
            if (!(omega > 0.0 && omega <= 1.0)) {
                fail(line_no, 5, "budget share must lie in (0, 1], got '" + fields[4] + "'");
            }
            record.omega = omega;
        }
        records.push_back(std::move(record));
    }

    if (!header_seen) {
        throw ParseError("empty input: expected header '" + std::string(k_header) + "'");
    }
    return records;
}

CoverageReport coverage(std::span<const ObservedRecord> records,
                        const ParamDistributions& dist,
                        const SimulationConfig& config,
                        unsigned workers) {
    dist.validate();
    config.validate();
    if (records.empty()) {
        throw std::invalid_argument("coverage: no records");
    }

    CoverageReport report;
    report.rows.reserve(records.size());
    std::size_t inside_count = 0;
    for (const ObservedRecord& record : records) {
        ParamDistributions record_dist = dist;
        if (record.omega) {
            record_dist.omega_min = *record.omega;
            record_dist.omega_max = *record.omega;
        }
        const std::array<IncomeElasticity, 1> grid = {IncomeElasticity(record.epsilon)};
        const CredibleBand band = simulate_own_band(grid, record_dist, config, workers);

        CoverageRow row;
        row.record = record;
        row.predicted_lower = band.lower[0];
        row.predicted_median = band.median[0];
        row.predicted_upper = band.upper[0];
        row.inside_band =
            record.eta_observed >= row.predicted_lower && record.eta_observed <= row.predicted_upper;
        inside_count += row.inside_band ? 1 : 0;
        report.rows.push_back(std::move(row));
    }
    report.coverage_fraction =
        static_cast<double>(inside_count) / static_cast<double>(records.size());
    return report;
}

std::string emit_curve(const CredibleBand& band) {
    std::string out = "epsilon,lower,median,upper\n";
    for (std::size_t i = 0; i < band.grid.size(); ++i) {
        out += format_number(band.grid[i]);
        out += ',';
        out += format_number(band.lower[i]);
        out += ',';
        out += format_number(band.median[i]);
        out += ',';
        out += format_number(band.upper[i]);
        out += '\n';
    }
    return out;
}

}  // namespace frisch
