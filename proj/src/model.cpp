#include "dlec/model.hpp"

namespace dlec::model {

namespace {

// Shared arithmetic path for the fixed-count and affine variants, so the two
// agree bit-for-bit when the affine prediction is used as a count.
double per_tx_kwh(double n_val, double watts, double tps) {
    return (n_val * watts / 1000.0) / (tps * kSecondsPerHour);
}

}  // namespace

GlobalPower total_power(std::uint64_t n_val, const PowerDraw& p) {
    return GlobalPower(static_cast<double>(n_val) * p.watts() / 1000.0);
}

EnergyPerTx per_tx_consumption(std::uint64_t n_val, const PowerDraw& p, const Throughput& l) {
    return EnergyPerTx(per_tx_kwh(static_cast<double>(n_val), p.watts(), l.tps()));
}

EnergyPerTx projected_per_tx(const AffineValidatorModel& m, const PowerDraw& p,
                             const Throughput& l) {
    if (!m.domain.contains(l))
        throw DomainError("throughput " + std::to_string(l.tps()) +
                          " tx/s outside model domain (" + std::to_string(m.domain.min_tps) +
                          ", " + std::to_string(m.domain.max_tps) + "]");
    const double n = m.validators_at(l);
    if (n < 1.0)
        throw ModelDegenerateError("affine model predicts " + std::to_string(n) +
                                   " validators (< 1) at " + std::to_string(l.tps()) + " tx/s");
    return EnergyPerTx(per_tx_kwh(n, p.watts(), l.tps()));
}

ScenarioBand scenario_range(std::uint64_t n_val, const PowerDraw& low, const PowerDraw& high,
                            const Throughput& l) {
    if (low.watts() > high.watts())
        throw BandOrderError("hardware band must be ordered by power draw ascending");
    return ScenarioBand{
        .global = {total_power(n_val, low), total_power(n_val, high)},
        .per_tx = {per_tx_consumption(n_val, low, l), per_tx_consumption(n_val, high, l)},
    };
}

std::pair<ScenarioBand, ScenarioBand> bounded_projection(std::uint64_t n_val,
                                                         const PowerDraw& low,
                                                         const PowerDraw& high,
                                                         const Throughput& l_low,
                                                         const Throughput& l_high) {
    if (l_low.tps() >= l_high.tps())
        throw BoundsError("projection bounds require l_low < l_high");
    return {scenario_range(n_val, low, high, l_low), scenario_range(n_val, low, high, l_high)};
}

GlobalPower reference_global_power(const AnnualEnergy& annual, double hours_per_year) {
    if (!std::isfinite(annual.value) || annual.value < 0.0)
        throw DomainError("annual energy must be a finite value >= 0");
    if (!(hours_per_year > 0.0)) throw DomainError("hours per year must be > 0");
    double kwh_per_year = 0.0;
    switch (annual.unit) {
        case AnnualEnergy::Unit::kwh_per_year:
            kwh_per_year = annual.value;
            break;
        case AnnualEnergy::Unit::gj_per_year:
            kwh_per_year = annual.value * kKwhPerGigajoule;
            break;
        default:
            throw UnitError("unsupported annual energy unit");
    }
    return GlobalPower(kwh_per_year / hours_per_year);
}

EnergyPerTx reference_per_tx(const GlobalPower& global, const Throughput& l) {
    return EnergyPerTx(global.kilowatts() / (l.tps() * kSecondsPerHour));
}

Throughput tx_per_day_to_tps(double tx_per_day) {
    if (!std::isfinite(tx_per_day) || tx_per_day <= 0.0)
        throw DomainError("transactions per day must be > 0");
    return Throughput(tx_per_day / kSecondsPerDay);
}

}  // namespace dlec::model
