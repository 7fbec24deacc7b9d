#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dlec/calibration.hpp"
#include "dlec/date.hpp"
#include "dlec/source_descriptor.hpp"
#include "dlec/units.hpp"

// The bundled domain dataset: network profiles, hardware profiles,
// observation series, and reference systems, with schema validation and
// file round-trip.

namespace dlec {

enum class Permissioning { permissioned, permissionless };
enum class Accounting { account, utxo };
enum class Structure { block, dag };

/// How a hardware profile's power figure was published.
struct AverageWattsSpec {
    double watts = 0.0;
    bool operator==(const AverageWattsSpec&) const = default;
};
struct IdleAndLoadWattsSpec {
    double idle_watts = 0.0;
    double load_watts = 0.0;
    bool operator==(const IdleAndLoadWattsSpec&) const = default;
};
struct YearlyKwhSpec {
    double kwh = 0.0;
    bool operator==(const YearlyKwhSpec&) const = default;
};
using PowerSpec = std::variant<AverageWattsSpec, IdleAndLoadWattsSpec, YearlyKwhSpec>;

/// A validator machine class with its published power figure.
struct HardwareProfile {
    std::string id;
    std::string label;
    PowerSpec power_spec;
    std::string provenance;
    bool operator==(const HardwareProfile&) const = default;
};

/// Static description of one DLT system.
struct NetworkProfile {
    std::string id;
    std::string display_name;
    Permissioning permissioning = Permissioning::permissionless;
    Accounting accounting = Accounting::account;
    Structure structure = Structure::block;
    std::uint64_t n_val = 0;
    std::optional<double> tps_contemporary;
    double tps_max = 0.0;
    /// (low-power profile id, high-power profile id)
    std::pair<std::string, std::string> hardware_band;
    /// Present instead of tps_contemporary for networks whose throughput can
    /// only be bracketed (the not-yet-merged case).
    std::optional<std::pair<double, double>> tps_projection_bounds;
    bool bonding = false;
    bool slashing = false;
    bool rewards = false;
    std::string provenance;
    bool operator==(const NetworkProfile&) const = default;
};

/// Published yearly energy or directly published average power.
struct ReferenceEnergySpec {
    enum class Kind { kwh_per_year, gj_per_year, global_kw };
    Kind kind = Kind::kwh_per_year;
    double value = 0.0;
    bool operator==(const ReferenceEnergySpec&) const = default;
};

struct ReferenceBound {
    std::optional<std::string> label;  // "lower" / "upper"
    ReferenceEnergySpec energy;
    bool operator==(const ReferenceBound&) const = default;
};

struct ThroughputSpec {
    enum class Unit { tps, tx_per_day };
    Unit unit = Unit::tps;
    double value = 0.0;
    bool operator==(const ThroughputSpec&) const = default;
};

/// Non-DLT comparator whose global power and per-transaction energy come
/// from published annualized figures. Systems with published lower/upper
/// bounds carry two bound rows.
struct ReferenceSystem {
    std::string id;
    std::string display_name;
    ThroughputSpec throughput;
    std::vector<ReferenceBound> bounds;
    std::string provenance;
    bool operator==(const ReferenceSystem&) const = default;
};

struct SeriesEntry {
    std::string id;
    std::string network_id;
    ObservationSeries series;
    bool operator==(const SeriesEntry&) const;
};

struct Dataset {
    Date snapshot_date;
    std::vector<NetworkProfile> networks;
    std::vector<HardwareProfile> hardware;
    std::vector<SeriesEntry> series;
    std::vector<ReferenceSystem> references;
    std::vector<SourceDescriptor> sources;

    const NetworkProfile* find_network(const std::string& id) const;
    const HardwareProfile* find_hardware(const std::string& id) const;
    const ReferenceSystem* find_reference(const std::string& id) const;

    bool operator==(const Dataset&) const;
};

enum class ViolationCode {
    dangling_hardware_ref,
    dangling_series_network,
    band_class_mismatch,
    band_order,
    series_order,
    tps_over_max,
    throughput_spec_conflict,
    projection_bounds_order,
};

const char* to_string(ViolationCode code);

struct Violation {
    ViolationCode code;
    std::string context;  // offending record id
    std::string message;
};

namespace catalog {

/// Average electrical power of the profile's machine class.
PowerDraw resolve_power(const HardwareProfile& h,
                        double hours_per_year = kDefaultHoursPerYear);

/// Parse and fully validate a dataset file. Structural problems raise
/// ParseError/SchemaError; dangling ids ReferenceError; any other invariant
/// violation InvariantError.
Dataset load_dataset(const std::filesystem::path& path);

/// All invariant violations, empty iff the dataset is valid.
std::vector<Violation> validate_dataset(const Dataset& d);

/// Deterministic textual form; reparses to an equal Dataset.
std::string serialize_dataset(const Dataset& d);

Dataset parse_dataset(const std::string& text, const std::filesystem::path& base_dir = {});

/// Series samples from a `date,n_val,tps` delimited file.
ObservationSeries load_series_csv(const std::filesystem::path& path,
                                  const std::string& source_label);

}  // namespace catalog
}  // namespace dlec
