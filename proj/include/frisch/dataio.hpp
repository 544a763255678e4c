#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "frisch/monte_carlo.hpp"

namespace frisch {

/// One published elasticity estimate: income elasticity and observed
/// uncompensated own-price elasticity for a bundle, optionally with its
/// budget share.
struct ObservedRecord {
    std::string group;
    std::string bundle;
    double epsilon = 0.0;
    double eta_observed = 0.0;
    std::optional<double> omega;
};

/// Parse failure with the offending line and column in the message.
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/** Read observed records from CSV.
 *
 * Schema: header `group,bundle,epsilon,eta,omega`, one record per row,
 * empty omega meaning "not published". Lines starting with '#' carry
 * provenance notes and are skipped. Parsing is locale-independent and
 * all-or-nothing: any malformed row raises ParseError with its location
 * and no records are returned.
 */
std::vector<ObservedRecord> parse_records(std::istream& in);

struct CoverageRow {
    ObservedRecord record;
    double predicted_lower = 0.0;
    double predicted_median = 0.0;
    double predicted_upper = 0.0;
    bool inside_band = false;
};

struct CoverageReport {
    std::vector<CoverageRow> rows;
    double coverage_fraction = 0.0;
};

/** Fraction of observed records whose eta falls inside the simulated band
 * at their epsilon (closed interval, so a boundary hit counts as inside).
 *
 * Records without a share marginalize over the configured omega
 * distribution; records with one pin omega to it while rho stays random.
 */
CoverageReport coverage(std::span<const ObservedRecord> records,
                        const ParamDistributions& dist,
                        const SimulationConfig& config,
                        unsigned workers = 1);

/// Band as CSV (`epsilon,lower,median,upper`), one row per grid point, at
/// full round-trip precision (17 significant digits).
std::string emit_curve(const CredibleBand& band);

}  // namespace frisch
