#include "frisch/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "frisch/rng.hpp"

namespace frisch {

namespace {

struct RawDraw {
    double rho;
    double omega;
};

RawDraw sample_unchecked(const ParamDistributions& dist,
                         std::uint64_t seed,
                         std::uint64_t draw_index) noexcept {
    CounterRng rng(seed, draw_index);
    double rho = rng.next_normal(dist.rho_mean, dist.rho_sd);
    while (rho >= 0.0) {
        rho = rng.next_normal(dist.rho_mean, dist.rho_sd);
    }
    const double omega = rng.next_uniform(dist.omega_min, dist.omega_max);
    return {rho, omega};
}

/// Static contiguous partition of [0, count) across workers; results are
/// assembled by index, so the partition never affects the output.
template <typename Fn>
void parallel_chunks(std::size_t count, unsigned workers, Fn&& fn) {
    if (count == 0) return;
    if (workers <= 1 || count < 2) {
        fn(std::size_t{0}, count);
        return;
    }
    const std::size_t used = std::min<std::size_t>(workers, count);
    const std::size_t chunk = (count + used - 1) / used;
    std::vector<std::thread> pool;
    pool.reserve(used);
    for (std::size_t w = 0; w < used; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

/// Shared skeleton of the two band simulations: draw (rho, omega) per draw
/// index, evaluate `eval(rho, omega, grid_value)` across the grid, and
/// reduce each grid point to percentile lines.
template <typename Eval>
CredibleBand simulate_band(std::span<const IncomeElasticity> grid,
                           const ParamDistributions& dist,
                           const SimulationConfig& config,
                           unsigned workers,
                           Eval&& eval) {
    dist.validate();
    config.validate();

    const std::size_t draws = static_cast<std::size_t>(config.draws);
    std::vector<double> rhos(draws);
    std::vector<double> omegas(draws);
    parallel_chunks(draws, workers, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            const RawDraw d = sample_unchecked(dist, config.seed, k);
            rhos[k] = d.rho;
            omegas[k] = d.omega;
        }
    });

    CredibleBand band;
    band.grid.reserve(grid.size());
    for (const auto& eps : grid) band.grid.push_back(eps.value());
    band.lower.resize(grid.size());
    band.median.resize(grid.size());
    band.upper.resize(grid.size());

    parallel_chunks(grid.size(), workers, [&](std::size_t glo, std::size_t ghi) {
        std::vector<double> values(draws);
        for (std::size_t g = glo; g < ghi; ++g) {
            const double eps = band.grid[g];
            for (std::size_t k = 0; k < draws; ++k) {
                values[k] = eval(rhos[k], omegas[k], eps);
            }
            std::sort(values.begin(), values.end());
            band.lower[g] = empirical_quantile(values, config.lower_pct);
            band.median[g] = empirical_quantile(values, 50.0);
            band.upper[g] = empirical_quantile(values, config.upper_pct);
        }
    });
    return band;
}

}  // namespace

void ParamDistributions::validate() const {
    if (!std::isfinite(rho_mean) || rho_mean >= 0.0) {
        throw std::domain_error("param distributions: rho_mean must be finite and negative");
    }
    if (!std::isfinite(rho_sd) || rho_sd < 0.0) {
        throw std::domain_error("param distributions: rho_sd must be finite and non-negative");
    }
    if (!std::isfinite(omega_min) || !std::isfinite(omega_max) || !(omega_min > 0.0) ||
        omega_min > omega_max || omega_max > 1.0) {
        throw std::domain_error(
            "param distributions: omega bounds must satisfy 0 < omega_min <= omega_max <= 1");
    }
}

void SimulationConfig::validate() const {
    if (draws < 2) {
        throw std::domain_error("simulation config: need at least 2 draws");
    }
    if (!std::isfinite(lower_pct) || !std::isfinite(upper_pct) || !(lower_pct > 0.0) ||
        !(lower_pct < 50.0) || !(upper_pct > 50.0) || !(upper_pct < 100.0)) {
        throw std::domain_error(
            "simulation config: percentiles must satisfy 0 < lower < 50 < upper < 100");
    }
}

std::pair<Rho, BudgetShare> sample_params(const ParamDistributions& dist,
                                          const SimulationConfig& config,
                                          std::uint64_t draw_index) {
    dist.validate();
    config.validate();
    if (draw_index >= config.draws) {
        std::ostringstream msg;
        msg << "draw index " << draw_index << " out of range for " << config.draws << " draws";
        throw std::out_of_range(msg.str());
    }
    const RawDraw d = sample_unchecked(dist, config.seed, draw_index);
    return {Rho(d.rho), BudgetShare(d.omega)};
}

CredibleBand simulate_own_band(std::span<const IncomeElasticity> grid,
                               const ParamDistributions& dist,
                               const SimulationConfig& config,
                               unsigned workers) {
    return simulate_band(grid, dist, config, workers,
                         [](double rho, double omega, double eps) {
                             return detail::own_price(rho, omega, eps);
                         });
}

CredibleBand simulate_cross_band(std::span<const IncomeElasticity> grid_a,
                                 IncomeElasticity epsilon_b,
                                 const ParamDistributions& dist,
                                 const SimulationConfig& config,
                                 unsigned workers) {
    const double eps_b = epsilon_b.value();
    return simulate_band(grid_a, dist, config, workers,
                         [eps_b](double rho, double omega_b, double eps_a) {
                             return detail::cross_price(rho, omega_b, eps_a, eps_b);
                         });
}

SensitivitySweep sensitivity_sweep(IncomeElasticity epsilon,
                                   Rho rho,
                                   std::span<const BudgetShare> omega_values) {
    if (omega_values.empty()) {
        throw std::invalid_argument("sensitivity sweep: need at least one budget share");
    }
    SensitivitySweep sweep;
    sweep.etas.reserve(omega_values.size());
    double min_abs = std::numeric_limits<double>::infinity();
    double max_abs = 0.0;
    for (const auto& omega : omega_values) {
        const double eta = detail::own_price(rho.value(), omega.value(), epsilon.value());
        sweep.etas.push_back(eta);
        min_abs = std::min(min_abs, std::abs(eta));
        max_abs = std::max(max_abs, std::abs(eta));
    }
    sweep.max_relative_change = max_abs == 0.0 ? 0.0 : (max_abs - min_abs) / min_abs;
    return sweep;
}

std::vector<double> band_width_profile(const CredibleBand& band) {
    std::vector<double> widths(band.grid.size());
    for (std::size_t i = 0; i < widths.size(); ++i) {
        widths[i] = band.upper[i] - band.lower[i];
    }
    return widths;
}

double empirical_quantile(std::span<const double> sorted_values, double pct) {
    if (sorted_values.empty()) {
        throw std::invalid_argument("empirical quantile: empty sample");
    }
    if (!(pct > 0.0) || !(pct < 100.0)) {
        throw std::domain_error("empirical quantile: pct must lie in (0, 100)");
    }
    const std::size_t n = sorted_values.size();
    const double h = (static_cast<double>(n) - 1.0) * (pct / 100.0);
    const std::size_t lo = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(lo);
    if (lo + 1 >= n) return sorted_values[n - 1];
    return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

}  // namespace frisch
