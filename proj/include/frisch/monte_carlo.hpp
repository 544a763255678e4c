#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "frisch/elasticity.hpp"

namespace frisch {

/// Sampling law for parameter uncertainty: normal Frisch parameter,
/// uniform budget share. Defaults carry the empirical estimates the
/// transforms were calibrated against.
struct ParamDistributions {
    double rho_mean = -1.26;
    double rho_sd = 0.1;
    double omega_min = 0.0001;
    double omega_max = 0.1;

    void validate() const;
};

struct SimulationConfig {
    std::uint64_t draws = 100000;
    std::uint64_t seed = 42;
    double lower_pct = 2.5;
    double upper_pct = 97.5;

    void validate() const;
};

/// Percentile band over a grid of income elasticities: lower/median/upper
/// per grid point.
struct CredibleBand {
    std::vector<double> grid;
    std::vector<double> lower;
    std::vector<double> median;
    std::vector<double> upper;
};

/** Parameter draw k as a pure function of (seed, k).
 *
 * rho comes from the normal law with non-negative draws rejected and
 * redrawn; omega from the uniform law. Draw k is identical no matter how
 * many other draws run or in what order, which is what makes the
 * simulations below deterministic under any worker count.
 */
std::pair<Rho, BudgetShare> sample_params(const ParamDistributions& dist,
                                          const SimulationConfig& config,
                                          std::uint64_t draw_index);

/// Own-price elasticity band over a grid of income elasticities. One
/// (rho, omega) pair is drawn per draw index and reused across the grid.
CredibleBand simulate_own_band(std::span<const IncomeElasticity> grid,
                               const ParamDistributions& dist,
                               const SimulationConfig& config,
                               unsigned workers = 1);

/// Cross-price elasticity band over a grid of income elasticities for
/// bundle A, at fixed income elasticity of bundle B. The sampled share is
/// the share of B.
CredibleBand simulate_cross_band(std::span<const IncomeElasticity> grid_a,
                                 IncomeElasticity epsilon_b,
                                 const ParamDistributions& dist,
                                 const SimulationConfig& config,
                                 unsigned workers = 1);

struct SensitivitySweep {
    std::vector<double> etas;
    double max_relative_change;
};

/// Own-price elasticity across a sweep of budget shares at fixed rho and
/// epsilon, with the spread reported as (max|eta| - min|eta|) / min|eta|.
/// An all-zero sweep (epsilon = 0) reports zero change.
SensitivitySweep sensitivity_sweep(IncomeElasticity epsilon,
                                   Rho rho,
                                   std::span<const BudgetShare> omega_values);

/// upper - lower per grid point.
std::vector<double> band_width_profile(const CredibleBand& band);

/// Empirical quantile with linear interpolation between adjacent order
/// statistics; input must be sorted ascending, pct in (0, 100).
double empirical_quantile(std::span<const double> sorted_values, double pct);

}  // namespace frisch
