#include "frisch/demand_oracle.hpp"

#include <cmath>
#include <span>
#include <sstream>
#include <stdexcept>

namespace frisch {

namespace {

constexpr double k_bisection_rel_width = 1e-14;
constexpr double k_budget_rel_tolerance = 1e-12;

double spending_at(const AdditiveUtility& utility,
                   std::span<const double> prices,
                   double multiplier) {
    double total = 0.0;
    for (std::size_t i = 0; i < utility.size(); ++i) {
        total += prices[i] * utility.terms()[i].inverse_marginal(multiplier * prices[i]);
    }
    return total;
}

DemandSolution solve_at_prices(const AdditiveUtility& utility,
                               std::span<const double> prices,
                               double expenditure) {
    // Spending is continuous and strictly decreasing in the multiplier,
    // spanning (0, inf), so a geometric search always brackets the root.
    double lo = 1.0;
    double hi = 1.0;
    int guard = 0;
    while (spending_at(utility, prices, lo) < expenditure) {
        lo /= 16.0;
        if (++guard > 400) throw std::runtime_error("demand solver: failed to bracket multiplier");
    }
    while (spending_at(utility, prices, hi) > expenditure) {
        hi *= 16.0;
        if (++guard > 400) throw std::runtime_error("demand solver: failed to bracket multiplier");
    }

    // Bisection on log(multiplier) converges in relative terms.
    double log_lo = std::log(lo);
    double log_hi = std::log(hi);
    while (log_hi - log_lo > k_bisection_rel_width) {
        const double log_mid = 0.5 * (log_lo + log_hi);
        if (spending_at(utility, prices, std::exp(log_mid)) > expenditure) {
            log_lo = log_mid;
        } else {
            log_hi = log_mid;
        }
    }

    DemandSolution solution;
    solution.multiplier = std::exp(0.5 * (log_lo + log_hi));
    solution.quantities.resize(utility.size());
    double total = 0.0;
    for (std::size_t i = 0; i < utility.size(); ++i) {
        solution.quantities[i] =
            utility.terms()[i].inverse_marginal(solution.multiplier * prices[i]);
        total += prices[i] * solution.quantities[i];
    }
    if (std::abs(total - expenditure) > k_budget_rel_tolerance * expenditure) {
        std::ostringstream msg;
        msg << "demand solver: budget residual " << (total - expenditure) / expenditure
            << " exceeds relative tolerance " << k_budget_rel_tolerance;
        throw std::runtime_error(msg.str());
    }
    return solution;
}

std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back("bundle_" + std::to_string(i + 1));
    return labels;
}

}  // namespace

UtilityTerm::UtilityTerm(bool is_log, double coefficient, double exponent)
    : is_log_(is_log), coefficient_(coefficient), exponent_(exponent) {
    if (!std::isfinite(coefficient) || coefficient <= 0.0) {
        throw std::domain_error("utility term: coefficient must be finite and positive");
    }
    if (!is_log && (!std::isfinite(exponent) || !(exponent > 0.0 && exponent < 1.0))) {
        throw std::domain_error("utility term: power exponent must lie in (0, 1)");
    }
}

UtilityTerm UtilityTerm::log_term(double coefficient) {
    return UtilityTerm(true, coefficient, 0.0);
}

UtilityTerm UtilityTerm::power_term(double coefficient, double exponent) {
    return UtilityTerm(false, coefficient, exponent);
}

double UtilityTerm::marginal_utility(double q) const {
    if (is_log_) return coefficient_ / q;
    return coefficient_ * exponent_ * std::pow(q, exponent_ - 1.0);
}

double UtilityTerm::inverse_marginal(double m) const {
    if (is_log_) return coefficient_ / m;
    return std::pow(m / (coefficient_ * exponent_), 1.0 / (exponent_ - 1.0));
}

AdditiveUtility::AdditiveUtility(std::vector<UtilityTerm> terms) : terms_(std::move(terms)) {
    if (terms_.size() < 2) {
        throw std::invalid_argument("additive utility: need at least 2 bundles");
    }
}

void MarketPoint::validate() const {
    if (prices.size() < 2) {
        throw std::invalid_argument("market point: need at least 2 prices");
    }
    for (double p : prices) {
        if (!std::isfinite(p) || p <= 0.0) {
            throw std::domain_error("market point: prices must be finite and positive");
        }
    }
    if (!std::isfinite(expenditure) || expenditure <= 0.0) {
        throw std::domain_error("market point: expenditure must be finite and positive");
    }
}

DemandSolution solve_demand(const AdditiveUtility& utility, const MarketPoint& point) {
    point.validate();
    if (point.prices.size() != utility.size()) {
        throw std::invalid_argument("solve_demand: price count must match bundle count");
    }
    return solve_at_prices(utility, point.prices, point.expenditure);
}

OracleReport numeric_elasticities(const AdditiveUtility& utility,
                                  const MarketPoint& point,
                                  double step) {
    point.validate();
    if (point.prices.size() != utility.size()) {
        throw std::invalid_argument("numeric_elasticities: price count must match bundle count");
    }
    if (!(step > 0.0) || step > 1e-3) {
        throw std::domain_error("numeric_elasticities: step must lie in (0, 1e-3]");
    }

    const std::size_t n = utility.size();
    const double up = std::exp(step);
    const double down = std::exp(-step);

    OracleReport report;
    const DemandSolution base = solve_at_prices(utility, point.prices, point.expenditure);
    report.quantities = base.quantities;
    report.multiplier = base.multiplier;
    report.shares.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        report.shares[i] = point.prices[i] * base.quantities[i] / point.expenditure;
    }

    // Income direction: perturb expenditure at fixed prices.
    const DemandSolution income_hi = solve_at_prices(utility, point.prices, point.expenditure * up);
    const DemandSolution income_lo =
        solve_at_prices(utility, point.prices, point.expenditure * down);
    report.numeric_epsilon.resize(n);
    report.numeric_marginal_shares.resize(n);
    const double expenditure_delta = point.expenditure * (up - down);
    for (std::size_t i = 0; i < n; ++i) {
        report.numeric_epsilon[i] =
            (std::log(income_hi.quantities[i]) - std::log(income_lo.quantities[i])) / (2.0 * step);
        report.numeric_marginal_shares[i] =
            point.prices[i] * (income_hi.quantities[i] - income_lo.quantities[i]) /
            expenditure_delta;
    }
    report.numeric_rho =
        (std::log(income_hi.multiplier) - std::log(income_lo.multiplier)) / (2.0 * step);

    // Price directions: perturb one price at a time at fixed expenditure.
    report.numeric_matrix = ElasticityMatrix(n, default_labels(n));
    std::vector<double> prices = point.prices;
    for (std::size_t j = 0; j < n; ++j) {
        prices[j] = point.prices[j] * up;
        const DemandSolution price_hi = solve_at_prices(utility, prices, point.expenditure);
        prices[j] = point.prices[j] * down;
        const DemandSolution price_lo = solve_at_prices(utility, prices, point.expenditure);
        prices[j] = point.prices[j];
        for (std::size_t i = 0; i < n; ++i) {
            report.numeric_matrix.at(i, j) =
                (std::log(price_hi.quantities[i]) - std::log(price_lo.quantities[i])) /
                (2.0 * step);
        }
    }

    // Closed-form prediction from the locally measured parameters.
    std::vector<BudgetShare> shares;
    std::vector<IncomeElasticity> epsilons;
    shares.reserve(n);
    epsilons.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        shares.emplace_back(report.shares[i]);
        epsilons.emplace_back(report.numeric_epsilon[i]);
    }
    const BundleSystem system(std::move(shares), std::move(epsilons), Rho(report.numeric_rho),
                              default_labels(n));
    report.predicted_matrix = full_matrix(system);
    report.max_abs_error = max_abs_difference(report.numeric_matrix, report.predicted_matrix);
    return report;
}

TheoremCheck verify_theorem(const AdditiveUtility& utility,
                            const MarketPoint& point,
                            double tolerance,
                            double step) {
    if (!(tolerance > 0.0)) {
        throw std::domain_error("verify_theorem: tolerance must be positive");
    }
    TheoremCheck check{true, numeric_elasticities(utility, point, step)};
    if (check.report.max_abs_error > tolerance) {
        check.passed = false;
    }
    for (std::size_t i = 0; i < utility.size(); ++i) {
        const double ratio =
            check.report.numeric_marginal_shares[i] / check.report.shares[i];
        if (std::abs(check.report.numeric_epsilon[i] - ratio) > tolerance) {
            check.passed = false;
        }
    }
    return check;
}

double max_abs_difference(const ElasticityMatrix& a, const ElasticityMatrix& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("max_abs_difference: matrix sizes differ");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
        }
    }
    return worst;
}

}  // namespace frisch
