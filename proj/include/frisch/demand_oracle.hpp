#pragma once

#include <cstddef>
#include <vector>

#include "frisch/elasticity.hpp"

namespace frisch {

/** One additive term of a utility function.
 *
 * Two families are admitted, both strictly increasing and strictly concave
 * on q > 0 with marginal utility mapping (0, inf) onto (0, inf):
 *
 *   log:    a * log(q),   a > 0
 *   power:  a * q^b,      a > 0, 0 < b < 1
 *
 * Both have closed-form marginal-utility inverses, so maximizing the sum
 * under a budget reduces to a one-dimensional root find on the multiplier.
 */
class UtilityTerm {
  public:
    static UtilityTerm log_term(double coefficient);
    static UtilityTerm power_term(double coefficient, double exponent);

    bool is_log() const noexcept { return is_log_; }
    double coefficient() const noexcept { return coefficient_; }
    double exponent() const noexcept { return exponent_; }

    double marginal_utility(double q) const;
    /// q such that marginal_utility(q) == m, for m > 0.
    double inverse_marginal(double m) const;

  private:
    UtilityTerm(bool is_log, double coefficient, double exponent);

    bool is_log_;
    double coefficient_;
    double exponent_;
};

/// Sum of per-bundle one-dimensional utility terms (preference
/// independence); needs at least two bundles.
class AdditiveUtility {
  public:
    explicit AdditiveUtility(std::vector<UtilityTerm> terms);
    std::size_t size() const noexcept { return terms_.size(); }
    const std::vector<UtilityTerm>& terms() const noexcept { return terms_; }

  private:
    std::vector<UtilityTerm> terms_;
};

/// Prices and total expenditure at which demand is evaluated.
struct MarketPoint {
    std::vector<double> prices;
    double expenditure = 0.0;

    void validate() const;
};

struct DemandSolution {
    std::vector<double> quantities;
    double multiplier;
};

/// Everything the finite-difference probe measures at one market point,
/// side by side with the closed-form prediction built from the same
/// locally measured shares, income elasticities, and Frisch parameter.
struct OracleReport {
    std::vector<double> quantities;
    double multiplier = 0.0;
    std::vector<double> shares;
    std::vector<double> numeric_epsilon;
    std::vector<double> numeric_marginal_shares;
    double numeric_rho = 0.0;
    ElasticityMatrix numeric_matrix;
    ElasticityMatrix predicted_matrix;
    double max_abs_error = 0.0;
};

struct TheoremCheck {
    bool passed;
    OracleReport report;
};

/** Budget-constrained utility maximum.
 *
 * For each candidate multiplier the per-term first-order conditions are
 * inverted in closed form; the multiplier is then bracketed geometrically
 * and bisected until spending matches the budget. Strict concavity makes
 * the solution the unique global maximum.
 */
DemandSolution solve_demand(const AdditiveUtility& utility, const MarketPoint& point);

/// Central log-space finite differences of the solved demand: income
/// elasticities, marginal shares, the Frisch parameter, and the full price
/// elasticity matrix, with `step` the log-space half step (in (0, 1e-3]).
OracleReport numeric_elasticities(const AdditiveUtility& utility,
                                  const MarketPoint& point,
                                  double step = 1e-5);

/// True when the measured price-elasticity matrix matches the closed-form
/// prediction entrywise and the measured income elasticities match the
/// marginal-to-budget share ratios, all within `tolerance`.
TheoremCheck verify_theorem(const AdditiveUtility& utility,
                            const MarketPoint& point,
                            double tolerance,
                            double step = 1e-5);

/// Largest entrywise absolute difference between two equally sized
/// matrices.
double max_abs_difference(const ElasticityMatrix& a, const ElasticityMatrix& b);

}  // namespace frisch
