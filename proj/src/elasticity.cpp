#include "frisch/elasticity.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace frisch {

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << name << " must be finite, got " << v;
        throw std::domain_error(msg.str());
    }
}

}  // namespace

Rho::Rho(double value) : value_(value) {
    require_finite(value, "rho");
    if (value >= 0.0) {
        std::ostringstream msg;
        msg << "rho (elasticity of the marginal utility of income) must be strictly negative, got "
            << value;
        throw std::domain_error(msg.str());
    }
}

BudgetShare::BudgetShare(double value) : value_(value) {
    require_finite(value, "budget share");
    if (!(value > 0.0 && value <= 1.0)) {
        std::ostringstream msg;
        msg << "budget share must lie in (0, 1], got " << value;
        throw std::domain_error(msg.str());
    }
}

IncomeElasticity::IncomeElasticity(double value) : value_(value) {
    require_finite(value, "income elasticity");
}

MarginalShare::MarginalShare(double value) : value_(value) {
    require_finite(value, "marginal share");
}

BundleSystem::BundleSystem(std::vector<BudgetShare> shares,
                           std::vector<IncomeElasticity> epsilons,
                           Rho rho,
                           std::vector<std::string> labels)
    : shares_(std::move(shares)),
      epsilons_(std::move(epsilons)),
      rho_(rho),
      labels_(std::move(labels)) {
    const std::size_t n = shares_.size();
    if (n < 2) {
        throw std::invalid_argument("bundle system needs at least 2 bundles");
    }
    if (epsilons_.size() != n) {
        throw std::invalid_argument("bundle system: shares and epsilons differ in length");
    }
    if (labels_.empty()) {
        labels_.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            labels_.push_back("bundle_" + std::to_string(i + 1));
        }
    } else if (labels_.size() != n) {
        throw std::invalid_argument("bundle system: labels differ in length from shares");
    }

    double share_sum = 0.0;
    double engel_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        share_sum += shares_[i].value();
        engel_sum += shares_[i].value() * epsilons_[i].value();
    }
    share_residual_ = share_sum - 1.0;
    engel_residual_ = engel_sum - 1.0;

    if (std::abs(share_residual_) > hard_tolerance) {
        std::ostringstream msg;
        msg << "bundle system: shares must sum to 1, residual " << share_residual_
            << " exceeds tolerance " << hard_tolerance;
        throw std::invalid_argument(msg.str());
    }
    if (std::abs(engel_residual_) > hard_tolerance) {
        std::ostringstream msg;
        msg << "bundle system: Engel aggregation violated, share-weighted income elasticities "
               "must sum to 1, residual "
            << engel_residual_ << " exceeds tolerance " << hard_tolerance;
        throw std::invalid_argument(msg.str());
    }
}

ElasticityMatrix::ElasticityMatrix(std::size_t n, std::vector<std::string> labels)
    : n_(n), values_(n * n, 0.0), labels_(std::move(labels)) {
    if (labels_.size() != n_) {
        throw std::invalid_argument("elasticity matrix: label count must match dimension");
    }
}

double own_price_elasticity(const ElasticityInputs& inputs) {
    return detail::own_price(inputs.rho.value(), inputs.omega.value(), inputs.epsilon.value());
}

double own_price_elasticity(Rho rho, BudgetShare omega, IncomeElasticity epsilon) {
    return detail::own_price(rho.value(), omega.value(), epsilon.value());
}

double cross_price_elasticity(IncomeElasticity epsilon_a,
                              IncomeElasticity epsilon_b,
                              BudgetShare omega_b,
                              Rho rho) {
    return detail::cross_price(rho.value(), omega_b.value(), epsilon_a.value(), epsilon_b.value());
}

ElasticityMatrix full_matrix(const BundleSystem& system) {
    const std::size_t n = system.size();
    ElasticityMatrix m(n, system.labels());
    const double rho = system.rho().value();
    for (std::size_t i = 0; i < n; ++i) {
        const double eps_i = system.epsilons()[i].value();
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) {
                m.at(i, j) = detail::own_price(rho, system.shares()[i].value(), eps_i);
            } else {
                m.at(i, j) = detail::cross_price(rho, system.shares()[j].value(), eps_i,
                                                 system.epsilons()[j].value());
            }
        }
    }
    return m;
}

MarginalShare marginal_share(BudgetShare omega, IncomeElasticity epsilon) {
    return MarginalShare(omega.value() * epsilon.value());
}

double frisch_deflator(std::span<const MarginalShare> marginal_shares,
                       std::span<const double> dlog_prices) {
    if (marginal_shares.size() != dlog_prices.size()) {
        throw std::invalid_argument("frisch deflator: marginal shares and price changes differ in length");
    }
    if (marginal_shares.empty()) {
        throw std::invalid_argument("frisch deflator: empty input");
    }
    double theta_sum = 0.0;
    for (const auto& theta : marginal_shares) theta_sum += theta.value();
    if (std::abs(theta_sum - 1.0) > BundleSystem::hard_tolerance) {
        std::ostringstream msg;
        msg << "frisch deflator: marginal shares must sum to 1, residual " << theta_sum - 1.0;
        throw std::invalid_argument(msg.str());
    }
    double result = 0.0;
    for (std::size_t i = 0; i < marginal_shares.size(); ++i) {
        result += marginal_shares[i].value() * dlog_prices[i];
    }
    return result;
}

DivisiaIndices divisia_indices(std::span<const BudgetShare> shares,
                               std::span<const double> dlog_quantities,
                               std::span<const double> dlog_prices) {
    if (shares.size() != dlog_quantities.size() || shares.size() != dlog_prices.size()) {
        throw std::invalid_argument("divisia indices: input lengths differ");
    }
    if (shares.empty()) {
        throw std::invalid_argument("divisia indices: empty input");
    }
    double share_sum = 0.0;
    for (const auto& w : shares) share_sum += w.value();
    if (std::abs(share_sum - 1.0) > BundleSystem::hard_tolerance) {
        std::ostringstream msg;
        msg << "divisia indices: shares must sum to 1, residual " << share_sum - 1.0;
        throw std::invalid_argument(msg.str());
    }
    DivisiaIndices out{0.0, 0.0};
    for (std::size_t i = 0; i < shares.size(); ++i) {
        out.dlog_volume += shares[i].value() * dlog_quantities[i];
        out.dlog_price += shares[i].value() * dlog_prices[i];
    }
    return out;
}

std::vector<double> homogeneity_residuals(const ElasticityMatrix& m, const BundleSystem& system) {
    const std::size_t n = m.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) row_sum += m(i, j);
        out[i] = row_sum + system.epsilons()[i].value();
    }
    return out;
}

std::vector<double> cournot_residuals(const ElasticityMatrix& m, const BundleSystem& system) {
    const std::size_t n = m.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double col_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) col_sum += system.shares()[i].value() * m(i, j);
        out[j] = col_sum + system.shares()[j].value();
    }
    return out;
}

}  // namespace frisch
