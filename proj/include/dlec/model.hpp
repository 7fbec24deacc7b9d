#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "dlec/units.hpp"

// Consumption model: network-wide power as validator count times per-node
// draw, per-transaction energy as its inverse-throughput quotient, and the
// affine validator-count substitution that turns the quotient into a
// one-variable function of load.

namespace dlec {

enum class FitMethod { ols, two_point };

struct FitDiagnostics {
    double r_squared = 0.0;
    double residual_sum_squares = 0.0;
    std::size_t n_points = 0;
};

/// Fitted affine relation n_val = kappa + lambda * l, with the throughput
/// range it is valid on. The domain is truncated so the predicted validator
/// count stays >= 1 throughout.
struct AffineValidatorModel {
    double kappa = 0.0;
    double lambda = 0.0;
    FitMethod method = FitMethod::two_point;
    ThroughputDomain domain{ThroughputDomain::kDefaultMinTps, 1.0};
    std::optional<FitDiagnostics> diagnostics;

    double validators_at(const Throughput& l) const { return kappa + lambda * l.tps(); }
};

/// Optimistic/pessimistic pair for one quantity.
template <class T>
struct Band {
    T optimistic;
    T pessimistic;
};

/// Scenario result across a hardware band: global power plus per-transaction
/// energy, each as an optimistic/pessimistic pair.
struct ScenarioBand {
    Band<GlobalPower> global;
    Band<EnergyPerTx> per_tx;
};

namespace model {

/// Network-wide power: n_val validators each drawing p.
GlobalPower total_power(std::uint64_t n_val, const PowerDraw& p);

/// Energy per transaction at throughput l, for a fixed validator count.
EnergyPerTx per_tx_consumption(std::uint64_t n_val, const PowerDraw& p, const Throughput& l);

/// Energy per transaction with the validator count substituted by the affine
/// model. Fractional counts are allowed but counts below one validator are
/// rejected as degenerate, as is any l outside the model's domain.
EnergyPerTx projected_per_tx(const AffineValidatorModel& m, const PowerDraw& p,
                             const Throughput& l);

/// Optimistic/pessimistic estimate across a hardware band (low, high power
/// draw, ascending).
ScenarioBand scenario_range(std::uint64_t n_val, const PowerDraw& low, const PowerDraw& high,
                            const Throughput& l);

/// Scenario bands at two throughput bounds for a fixed validator count
/// (networks with no contemporary throughput). Global power is
/// load-independent, so it is identical in both bands.
std::pair<ScenarioBand, ScenarioBand> bounded_projection(std::uint64_t n_val,
                                                         const PowerDraw& low,
                                                         const PowerDraw& high,
                                                         const Throughput& l_low,
                                                         const Throughput& l_high);

/// Average power of a system whose yearly energy consumption is published.
GlobalPower reference_global_power(const AnnualEnergy& annual,
                                   double hours_per_year = kDefaultHoursPerYear);

/// Per-transaction energy of a reference system from its average power.
EnergyPerTx reference_per_tx(const GlobalPower& global, const Throughput& l);

/// Convert a transactions-per-day figure to tx/s.
Throughput tx_per_day_to_tps(double tx_per_day);

}  // namespace model
}  // namespace dlec
