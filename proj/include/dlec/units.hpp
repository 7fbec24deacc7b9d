#pragma once

#include <cmath>
#include <compare>
#include <string>

#include "dlec/errors.hpp"

// Strong unit wrappers. Canonical units throughout the library:
// watts for node power, kilowatts for network-wide power, kWh/tx for
// per-transaction energy, tx/s for throughput. Conversions live here;
// no unit-ambiguous raw doubles cross module boundaries.

namespace dlec {

inline constexpr double kSecondsPerHour = 3600.0;
inline constexpr double kSecondsPerDay = 86400.0;
// 365-day year; the annualization convention used for every yearly figure.
// Overridable where a function takes an hours_per_year argument.
inline constexpr double kDefaultHoursPerYear = 8760.0;
// 1 GJ = 1e9 J, 1 kWh = 3.6e6 J
inline constexpr double kKwhPerGigajoule = 1e9 / 3.6e6;

namespace detail {
inline void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}
}  // namespace detail

/// Average electrical power of one validator machine, in watts.
class PowerDraw {
  public:
    explicit PowerDraw(double watts) : watts_(watts) {
        detail::require_finite(watts, "power draw");
        if (watts < 0.0) throw DomainError("power draw must be >= 0 W");
    }
    double watts() const { return watts_; }
    auto operator<=>(const PowerDraw&) const = default;

  private:
    double watts_;
};

/// System throughput in transactions per second. Strictly positive.
class Throughput {
  public:
    explicit Throughput(double tps) : tps_(tps) {
        detail::require_finite(tps, "throughput");
        if (tps <= 0.0) throw DomainError("throughput must be > 0 tx/s");
    }
    double tps() const { return tps_; }
    auto operator<=>(const Throughput&) const = default;

  private:
    double tps_;
};

/// Network-wide average power, in kilowatts.
class GlobalPower {
  public:
    explicit GlobalPower(double kilowatts) : kilowatts_(kilowatts) {
        detail::require_finite(kilowatts, "global power");
        if (kilowatts < 0.0) throw DomainError("global power must be >= 0 kW");
    }
    double kilowatts() const { return kilowatts_; }
    auto operator<=>(const GlobalPower&) const = default;

  private:
    double kilowatts_;
};

/// Energy per transaction, in kilowatt-hours.
class EnergyPerTx {
  public:
    explicit EnergyPerTx(double kwh_per_tx) : kwh_per_tx_(kwh_per_tx) {
        detail::require_finite(kwh_per_tx, "energy per tx");
        if (kwh_per_tx < 0.0) throw DomainError("energy per tx must be >= 0 kWh");
    }
    double kwh_per_tx() const { return kwh_per_tx_; }
    auto operator<=>(const EnergyPerTx&) const = default;

  private:
    double kwh_per_tx_;
};

/// Throughput range (min_tps, max_tps] a consumption curve is valid on.
/// The consumption function diverges at 0, so the lower end defaults to a
/// small epsilon rather than zero.
struct ThroughputDomain {
    static constexpr double kDefaultMinTps = 1e-6;

    double min_tps = kDefaultMinTps;
    double max_tps = 0.0;

    ThroughputDomain(double min_t, double max_t) : min_tps(min_t), max_tps(max_t) {
        detail::require_finite(min_t, "domain min");
        detail::require_finite(max_t, "domain max");
        if (!(0.0 < min_tps && min_tps <= max_tps))
            throw DomainError("throughput domain requires 0 < min_tps <= max_tps");
    }
    explicit ThroughputDomain(double max_t) : ThroughputDomain(kDefaultMinTps, max_t) {}

    bool contains(const Throughput& l) const {
        return l.tps() >= min_tps && l.tps() <= max_tps;
    }
    bool operator==(const ThroughputDomain&) const = default;
};

/// Yearly energy figure with its source unit, as found in published reports.
struct AnnualEnergy {
    enum class Unit { kwh_per_year, gj_per_year };
    double value = 0.0;
    Unit unit = Unit::kwh_per_year;
};

}  // namespace dlec
