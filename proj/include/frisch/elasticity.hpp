#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace frisch {

/** Elasticity of the marginal utility of income (the Frisch parameter).
 *
 * Strictly negative and finite. Every elasticity transform divides by it,
 * and the empirical estimates it is meant to carry cluster around -1.26,
 * so non-negative values are rejected at construction.
 */
class Rho {
  public:
    explicit Rho(double value);
    double value() const noexcept { return value_; }

  private:
    double value_;
};

/// Fraction of total expenditure allocated to one bundle; in (0, 1].
class BudgetShare {
  public:
    explicit BudgetShare(double value);
    double value() const noexcept { return value_; }

  private:
    double value_;
};

/// Percent change in demand per percent change in income. Finite; negative
/// values (inferior goods) are admitted.
class IncomeElasticity {
  public:
    explicit IncomeElasticity(double value);
    double value() const noexcept { return value_; }

  private:
    double value_;
};

/// The three inputs of the own-price transform for a single bundle.
struct ElasticityInputs {
    Rho rho;
    BudgetShare omega;
    IncomeElasticity epsilon;
};

/// Marginal share: change in expenditure on a bundle per unit change in
/// total income. Equals share times income elasticity.
class MarginalShare {
  public:
    explicit MarginalShare(double value);
    double value() const noexcept { return value_; }

  private:
    double value_;
};

/** A complete budget partition into n >= 2 bundles.
 *
 * Construction enforces the two aggregation identities a well-formed
 * partition must satisfy:
 *   - adding-up:            sum of shares = 1
 *   - Engel aggregation:    sum of share*income-elasticity = 1
 *
 * Survey-derived shares carry rounding noise, so residuals up to
 * `hard_tolerance` are accepted (and reported via the residual accessors);
 * larger residuals indicate a malformed partition and are rejected.
 * Clean inputs are expected to stay within `noise_tolerance`.
 */
class BundleSystem {
  public:
    static constexpr double noise_tolerance = 1e-9;
    static constexpr double hard_tolerance = 1e-6;

    BundleSystem(std::vector<BudgetShare> shares,
                 std::vector<IncomeElasticity> epsilons,
                 Rho rho,
                 std::vector<std::string> labels = {});

    std::size_t size() const noexcept { return shares_.size(); }
    const std::vector<BudgetShare>& shares() const noexcept { return shares_; }
    const std::vector<IncomeElasticity>& epsilons() const noexcept { return epsilons_; }
    Rho rho() const noexcept { return rho_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    /// sum(shares) - 1
    double share_sum_residual() const noexcept { return share_residual_; }
    /// sum(shares * epsilons) - 1
    double engel_residual() const noexcept { return engel_residual_; }

  private:
    std::vector<BudgetShare> shares_;
    std::vector<IncomeElasticity> epsilons_;
    Rho rho_;
    std::vector<std::string> labels_;
    double share_residual_;
    double engel_residual_;
};

/// n x n matrix of uncompensated price elasticities: entry (i, j) is the
/// elasticity of demand for bundle i with respect to the price of bundle j;
/// the diagonal holds the own-price elasticities.
class ElasticityMatrix {
  public:
    ElasticityMatrix() = default;
    ElasticityMatrix(std::size_t n, std::vector<std::string> labels);

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
    double& at(std::size_t i, std::size_t j) { return values_[i * n_ + j]; }
    const std::vector<double>& values() const noexcept { return values_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

  private:
    std::size_t n_ = 0;
    std::vector<double> values_;
    std::vector<std::string> labels_;
};

namespace detail {

/// Own-price transform on raw doubles; the strong-typed overloads and the
/// simulation hot loops share this single evaluation.
inline double own_price(double rho, double omega, double epsilon) noexcept {
    return -(1.0 / rho) * omega * epsilon * epsilon + (1.0 / rho - omega) * epsilon + 0.0;
}

/// Cross-price transform, factored so that the zero at epsilon_b == -rho is
/// exact in floating point (the sign of the result is the sign of
/// epsilon_b - |rho| for positive epsilon_a).
inline double cross_price(double rho, double omega_b, double epsilon_a, double epsilon_b) noexcept {
    return -(omega_b * epsilon_a / rho) * (epsilon_b + rho) + 0.0;
}

}  // namespace detail

/// Uncompensated own-price elasticity of one bundle from its income
/// elasticity, budget share, and the Frisch parameter.
double own_price_elasticity(const ElasticityInputs& inputs);
double own_price_elasticity(Rho rho, BudgetShare omega, IncomeElasticity epsilon);

/// Uncompensated elasticity of demand for bundle A with respect to the price
/// of bundle B. Not symmetric in A and B.
double cross_price_elasticity(IncomeElasticity epsilon_a,
                              IncomeElasticity epsilon_b,
                              BudgetShare omega_b,
                              Rho rho);

/// Full matrix of own- and cross-price elasticities for a complete
/// partition. Rows sum to -epsilon_i and share-weighted columns sum to
/// -omega_j when the system satisfies its aggregation identities.
ElasticityMatrix full_matrix(const BundleSystem& system);

MarginalShare marginal_share(BudgetShare omega, IncomeElasticity epsilon);

/// Marginal-share-weighted sum of log price changes (the Frisch price
/// deflator differential). Shares must sum to 1.
double frisch_deflator(std::span<const MarginalShare> marginal_shares,
                       std::span<const double> dlog_prices);

struct DivisiaIndices {
    double dlog_volume;
    double dlog_price;
};

/// Budget-share-weighted volume and price index differentials. Together
/// they decompose the expenditure differential: dlogE = dlogQ + dlogP.
DivisiaIndices divisia_indices(std::span<const BudgetShare> shares,
                               std::span<const double> dlog_quantities,
                               std::span<const double> dlog_prices);

/// Row identity residuals: sum_j m(i,j) + epsilon_i (zero under homogeneity).
std::vector<double> homogeneity_residuals(const ElasticityMatrix& m, const BundleSystem& system);

/// Column identity residuals: sum_i omega_i m(i,j) + omega_j (zero under
/// Cournot aggregation).
std::vector<double> cournot_residuals(const ElasticityMatrix& m, const BundleSystem& system);

}  // namespace frisch
