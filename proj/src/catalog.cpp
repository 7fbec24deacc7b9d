#include "dlec/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace dlec {

using ordered_json = nlohmann::ordered_json;

bool SeriesEntry::operator==(const SeriesEntry& other) const {
    if (id != other.id || network_id != other.network_id) return false;
    if (series.source_label != other.series.source_label) return false;
    if (series.samples.size() != other.series.samples.size()) return false;
    for (std::size_t i = 0; i < series.samples.size(); ++i) {
        const auto& a = series.samples[i];
        const auto& b = other.series.samples[i];
        if (a.date != b.date || a.n_val != b.n_val || a.tps != b.tps) return false;
    }
    return true;
}

// SourceDescriptor holds a variant without operator==; compare field-wise.
static bool rule_equal(const ExtractionRule& a, const ExtractionRule& b) {
    if (a.index() != b.index()) return false;
    if (const auto* ja = std::get_if<JsonPointerRule>(&a))
        return ja->pointer == std::get<JsonPointerRule>(b).pointer;
    if (const auto* ra = std::get_if<RegexRule>(&a))
        return ra->pattern == std::get<RegexRule>(b).pattern;
    return true;  // ManualRule
}

static bool sources_equal(const Dataset& a, const Dataset& b) {
    if (a.sources.size() != b.sources.size()) return false;
    for (std::size_t i = 0; i < a.sources.size(); ++i) {
        const auto& sa = a.sources[i];
        const auto& sb = b.sources[i];
        if (sa.id != sb.id || sa.network_id != sb.network_id || sa.url != sb.url ||
            sa.metric != sb.metric || sa.post_scale != sb.post_scale ||
            !rule_equal(sa.extraction, sb.extraction))
            return false;
    }
    return true;
}

bool Dataset::operator==(const Dataset& other) const {
    return snapshot_date == other.snapshot_date && networks == other.networks &&
           hardware == other.hardware && series == other.series &&
           references == other.references && sources_equal(*this, other);
}

const NetworkProfile* Dataset::find_network(const std::string& id) const {
    for (const auto& n : networks)
        if (n.id == id) return &n;
    return nullptr;
}

const HardwareProfile* Dataset::find_hardware(const std::string& id) const {
    for (const auto& h : hardware)
        if (h.id == id) return &h;
    return nullptr;
}

const ReferenceSystem* Dataset::find_reference(const std::string& id) const {
    for (const auto& r : references)
        if (r.id == id) return &r;
    return nullptr;
}

const char* to_string(ViolationCode code) {
    switch (code) {
        case ViolationCode::dangling_hardware_ref: return "DANGLING_HARDWARE_REF";
        case ViolationCode::dangling_series_network: return "DANGLING_SERIES_NETWORK";
        case ViolationCode::band_class_mismatch: return "BAND_CLASS_MISMATCH";
        case ViolationCode::band_order: return "BAND_ORDER";
        case ViolationCode::series_order: return "SERIES_ORDER";
        case ViolationCode::tps_over_max: return "TPS_OVER_MAX";
        case ViolationCode::throughput_spec_conflict: return "THROUGHPUT_SPEC_CONFLICT";
        case ViolationCode::projection_bounds_order: return "PROJECTION_BOUNDS_ORDER";
    }
    return "UNKNOWN";
}

namespace catalog {

PowerDraw resolve_power(const HardwareProfile& h, double hours_per_year) {
    return std::visit(
        [&](const auto& spec) -> PowerDraw {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, AverageWattsSpec>) {
                return PowerDraw(spec.watts);
            } else if constexpr (std::is_same_v<T, IdleAndLoadWattsSpec>) {
                return PowerDraw((spec.idle_watts + spec.load_watts) / 2.0);
            } else {
                return PowerDraw(spec.kwh * 1000.0 / hours_per_year);
            }
        },
        h.power_spec);
}

// ---------------------------------------------------------------------------
// parsing

namespace {

const ordered_json& require(const ordered_json& obj, const char* key, const std::string& ctx) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw SchemaError("missing field '" + std::string(key) + "' in " + ctx);
    return *it;
}

std::string require_string(const ordered_json& obj, const char* key, const std::string& ctx) {
    const auto& v = require(obj, key, ctx);
    if (!v.is_string()) throw SchemaError("field '" + std::string(key) + "' in " + ctx +
                                          " must be a string");
    return v.get<std::string>();
}

double require_number(const ordered_json& obj, const char* key, const std::string& ctx) {
    const auto& v = require(obj, key, ctx);
    if (!v.is_number()) throw SchemaError("field '" + std::string(key) + "' in " + ctx +
                                          " must be a number");
    return v.get<double>();
}

bool require_bool(const ordered_json& obj, const char* key, const std::string& ctx) {
    const auto& v = require(obj, key, ctx);
    if (!v.is_boolean()) throw SchemaError("field '" + std::string(key) + "' in " + ctx +
                                           " must be a boolean");
    return v.get<bool>();
}

template <class Enum>
Enum parse_enum(const std::string& text, std::initializer_list<std::pair<const char*, Enum>> map,
                const std::string& ctx) {
    for (const auto& [name, value] : map)
        if (text == name) return value;
    throw SchemaError("unrecognized value '" + text + "' in " + ctx);
}

template <class Enum>
const char* enum_name(Enum v, std::initializer_list<std::pair<const char*, Enum>> map) {
    for (const auto& [name, value] : map)
        if (v == value) return name;
    return "?";
}

constexpr auto kPermissioningNames = {
    std::pair{"permissioned", Permissioning::permissioned},
    std::pair{"permissionless", Permissioning::permissionless}};
constexpr auto kAccountingNames = {std::pair{"account", Accounting::account},
                                   std::pair{"utxo", Accounting::utxo}};
constexpr auto kStructureNames = {std::pair{"block", Structure::block},
                                  std::pair{"dag", Structure::dag}};
constexpr auto kMetricNames = {std::pair{"validator_count", SourceMetric::validator_count},
                               std::pair{"tps", SourceMetric::tps},
                               std::pair{"tx_per_day", SourceMetric::tx_per_day},
                               std::pair{"tx_per_epoch", SourceMetric::tx_per_epoch}};
constexpr auto kEnergyKindNames = {
    std::pair{"kwh_per_year", ReferenceEnergySpec::Kind::kwh_per_year},
    std::pair{"gj_per_year", ReferenceEnergySpec::Kind::gj_per_year},
    std::pair{"global_kw", ReferenceEnergySpec::Kind::global_kw}};
constexpr auto kThroughputUnitNames = {std::pair{"tps", ThroughputSpec::Unit::tps},
                                       std::pair{"tx_per_day", ThroughputSpec::Unit::tx_per_day}};

NetworkProfile parse_network(const ordered_json& j) {
    NetworkProfile n;
    n.id = require_string(j, "id", "network");
    const std::string ctx = "network '" + n.id + "'";
    n.display_name = require_string(j, "display_name", ctx);
    n.permissioning = parse_enum(require_string(j, "permissioning", ctx), kPermissioningNames, ctx);
    n.accounting = parse_enum(require_string(j, "accounting", ctx), kAccountingNames, ctx);
    n.structure = parse_enum(require_string(j, "structure", ctx), kStructureNames, ctx);
    const double n_val = require_number(j, "n_val", ctx);
    if (n_val < 0.0 || n_val != std::floor(n_val))
        throw SchemaError("n_val must be a non-negative integer in " + ctx);
    n.n_val = static_cast<std::uint64_t>(n_val);
    if (j.contains("tps_contemporary")) n.tps_contemporary = j["tps_contemporary"].get<double>();
    n.tps_max = require_number(j, "tps_max", ctx);
    const auto& band = require(j, "hardware_band", ctx);
    if (!band.is_array() || band.size() != 2)
        throw SchemaError("hardware_band must be [low_id, high_id] in " + ctx);
    n.hardware_band = {band[0].get<std::string>(), band[1].get<std::string>()};
    if (j.contains("tps_projection_bounds")) {
        const auto& b = j["tps_projection_bounds"];
        n.tps_projection_bounds = {require_number(b, "low", ctx), require_number(b, "high", ctx)};
    }
    n.bonding = require_bool(j, "bonding", ctx);
    n.slashing = require_bool(j, "slashing", ctx);
    n.rewards = require_bool(j, "rewards", ctx);
    if (j.contains("provenance")) n.provenance = j["provenance"].get<std::string>();
    return n;
}

HardwareProfile parse_hardware(const ordered_json& j) {
    HardwareProfile h;
    h.id = require_string(j, "id", "hardware");
    const std::string ctx = "hardware '" + h.id + "'";
    h.label = require_string(j, "label", ctx);
    const auto& spec = require(j, "power_spec", ctx);
    const std::string kind = require_string(spec, "kind", ctx);
    if (kind == "average_watts") {
        h.power_spec = AverageWattsSpec{require_number(spec, "watts", ctx)};
    } else if (kind == "idle_and_load_watts") {
        h.power_spec = IdleAndLoadWattsSpec{require_number(spec, "idle_watts", ctx),
                                            require_number(spec, "load_watts", ctx)};
    } else if (kind == "yearly_kwh") {
        h.power_spec = YearlyKwhSpec{require_number(spec, "kwh", ctx)};
    } else {
        throw SchemaError("unrecognized power_spec kind '" + kind + "' in " + ctx);
    }
    if (j.contains("provenance")) h.provenance = j["provenance"].get<std::string>();
    return h;
}

ReferenceSystem parse_reference(const ordered_json& j) {
    ReferenceSystem r;
    r.id = require_string(j, "id", "reference");
    const std::string ctx = "reference '" + r.id + "'";
    r.display_name = require_string(j, "display_name", ctx);
    const auto& tp = require(j, "throughput", ctx);
    r.throughput.unit = parse_enum(require_string(tp, "unit", ctx), kThroughputUnitNames, ctx);
    r.throughput.value = require_number(tp, "value", ctx);
    const auto& bounds = require(j, "bounds", ctx);
    if (!bounds.is_array() || bounds.empty())
        throw SchemaError("reference bounds must be a non-empty array in " + ctx);
    for (const auto& b : bounds) {
        ReferenceBound bound;
        if (b.contains("label")) bound.label = b["label"].get<std::string>();
        const auto& e = require(b, "energy", ctx);
        bound.energy.kind = parse_enum(require_string(e, "unit", ctx), kEnergyKindNames, ctx);
        bound.energy.value = require_number(e, "value", ctx);
        r.bounds.push_back(std::move(bound));
    }
    if (j.contains("provenance")) r.provenance = j["provenance"].get<std::string>();
    return r;
}

SourceDescriptor parse_source(const ordered_json& j) {
    SourceDescriptor s;
    s.id = require_string(j, "id", "source");
    const std::string ctx = "source '" + s.id + "'";
    s.network_id = require_string(j, "network_id", ctx);
    s.url = require_string(j, "url", ctx);
    s.metric = parse_enum(require_string(j, "metric", ctx), kMetricNames, ctx);
    const auto& rule = require(j, "extraction", ctx);
    const std::string kind = require_string(rule, "kind", ctx);
    if (kind == "json_pointer") {
        s.extraction = JsonPointerRule{require_string(rule, "pointer", ctx)};
    } else if (kind == "regex") {
        s.extraction = RegexRule{require_string(rule, "pattern", ctx)};
    } else if (kind == "manual") {
        s.extraction = ManualRule{};
    } else {
        throw SchemaError("unrecognized extraction kind '" + kind + "' in " + ctx);
    }
    if (j.contains("post_scale")) s.post_scale = j["post_scale"].get<double>();
    return s;
}

SeriesEntry parse_series(const ordered_json& j, const std::filesystem::path& base_dir) {
    SeriesEntry e;
    e.id = require_string(j, "id", "series");
    const std::string ctx = "series '" + e.id + "'";
    e.network_id = require_string(j, "network_id", ctx);
    e.series.source_label = require_string(j, "source_label", ctx);
    if (j.contains("csv_path")) {
        e.series = load_series_csv(base_dir / j["csv_path"].get<std::string>(),
                                   e.series.source_label);
        return e;
    }
    const auto& samples = require(j, "samples", ctx);
    if (!samples.is_array()) throw SchemaError("samples must be an array in " + ctx);
    for (const auto& row : samples) {
        if (!row.is_array() || row.size() != 3)
            throw SchemaError("each sample must be [date, n_val, tps] in " + ctx);
        Observation o;
        o.date = Date::parse(row[0].get<std::string>());
        o.n_val = row[1].get<std::uint64_t>();
        o.tps = row[2].get<double>();
        e.series.samples.push_back(o);
    }
    return e;
}

}  // namespace

ObservationSeries load_series_csv(const std::filesystem::path& path,
                                  const std::string& source_label) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open series file " + path.string());
    ObservationSeries series;
    series.source_label = source_label;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != "date,n_val,tps")
                throw ParseError(path.string() + ":1: expected header 'date,n_val,tps'");
            continue;
        }
        std::istringstream fields(line);
        std::string date_text, n_text, tps_text;
        if (!std::getline(fields, date_text, ',') || !std::getline(fields, n_text, ',') ||
            !std::getline(fields, tps_text))
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": malformed row");
        Observation o;
        try {
            o.date = Date::parse(date_text);
            o.n_val = std::stoull(n_text);
            o.tps = std::stod(tps_text);
        } catch (const std::exception& e) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
        series.samples.push_back(o);
    }
    return series;
}

Dataset parse_dataset(const std::string& text, const std::filesystem::path& base_dir) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("dataset is not valid JSON: ") + e.what());
    }
    try {
        Dataset d;
        d.snapshot_date = Date::parse(require_string(j, "snapshot_date", "dataset"));
        for (const auto& n : require(j, "networks", "dataset")) d.networks.push_back(parse_network(n));
        for (const auto& h : require(j, "hardware", "dataset")) d.hardware.push_back(parse_hardware(h));
        if (j.contains("series"))
            for (const auto& s : j["series"]) d.series.push_back(parse_series(s, base_dir));
        for (const auto& r : require(j, "references", "dataset"))
            d.references.push_back(parse_reference(r));
        if (j.contains("sources"))
            for (const auto& s : j["sources"]) d.sources.push_back(parse_source(s));
        return d;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("dataset schema error: ") + e.what());
    }
}

Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open dataset file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    Dataset d = parse_dataset(buffer.str(), path.parent_path());

    const auto violations = validate_dataset(d);
    if (!violations.empty()) {
        std::string message = path.string() + ": invalid dataset:";
        bool dangling = false;
        for (const auto& v : violations) {
            message += "\n  [" + std::string(to_string(v.code)) + "] " + v.context + ": " +
                       v.message;
            if (v.code == ViolationCode::dangling_hardware_ref ||
                v.code == ViolationCode::dangling_series_network)
                dangling = true;
        }
        if (dangling) throw ReferenceError(message);
        throw InvariantError(message);
    }
    return d;
}

// ---------------------------------------------------------------------------
// validation

std::vector<Violation> validate_dataset(const Dataset& d) {
    std::vector<Violation> out;
    const auto add = [&](ViolationCode code, const std::string& ctx, std::string message) {
        out.push_back(Violation{code, ctx, std::move(message)});
    };

    // Hardware ranked by resolved power; the band-class convention says
    // permissionless networks use the minimum-to-medium range and permissioned
    // ones the medium-to-maximum range. Encoded as: a permissionless band may
    // not touch the top-ranked profile, a permissioned band may not touch the
    // bottom-ranked one. Only meaningful with at least three classes.
    std::string min_id, max_id;
    if (d.hardware.size() >= 3) {
        const auto watts = [](const HardwareProfile& h) { return resolve_power(h).watts(); };
        const auto [lo, hi] = std::ranges::minmax_element(d.hardware, {}, watts);
        min_id = lo->id;
        max_id = hi->id;
    }

    for (const auto& n : d.networks) {
        const auto* low = d.find_hardware(n.hardware_band.first);
        const auto* high = d.find_hardware(n.hardware_band.second);
        if (!low)
            add(ViolationCode::dangling_hardware_ref, n.id,
                "hardware id '" + n.hardware_band.first + "' does not exist");
        if (!high)
            add(ViolationCode::dangling_hardware_ref, n.id,
                "hardware id '" + n.hardware_band.second + "' does not exist");
        if (low && high) {
            if (resolve_power(*low).watts() > resolve_power(*high).watts())
                add(ViolationCode::band_order, n.id,
                    "hardware band must be ordered by power draw ascending");
            if (!min_id.empty()) {
                const bool permissionless = n.permissioning == Permissioning::permissionless;
                if (permissionless && (low->id == max_id || high->id == max_id))
                    add(ViolationCode::band_class_mismatch, n.id,
                        "permissionless network must use the minimum-to-medium hardware band");
                if (!permissionless && (low->id == min_id || high->id == min_id))
                    add(ViolationCode::band_class_mismatch, n.id,
                        "permissioned network must use the medium-to-maximum hardware band");
            }
        }
        if (n.tps_contemporary.has_value() == n.tps_projection_bounds.has_value())
            add(ViolationCode::throughput_spec_conflict, n.id,
                "exactly one of tps_contemporary and tps_projection_bounds must be present");
        if (n.tps_contemporary && *n.tps_contemporary > n.tps_max)
            add(ViolationCode::tps_over_max, n.id,
                "tps_contemporary exceeds tps_max");
        if (n.tps_projection_bounds && !(n.tps_projection_bounds->first <
                                         n.tps_projection_bounds->second))
            add(ViolationCode::projection_bounds_order, n.id,
                "projection bounds must satisfy low < high");
    }

    for (const auto& s : d.series) {
        if (!d.find_network(s.network_id))
            add(ViolationCode::dangling_series_network, s.id,
                "network id '" + s.network_id + "' does not exist");
        try {
            s.series.validate();
        } catch (const InvariantError& e) {
            add(ViolationCode::series_order, s.id, e.what());
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// serialization

namespace {

ordered_json network_to_json(const NetworkProfile& n) {
    ordered_json j;
    j["id"] = n.id;
    j["display_name"] = n.display_name;
    j["permissioning"] = enum_name(n.permissioning, kPermissioningNames);
    j["accounting"] = enum_name(n.accounting, kAccountingNames);
    j["structure"] = enum_name(n.structure, kStructureNames);
    j["n_val"] = n.n_val;
    if (n.tps_contemporary) j["tps_contemporary"] = *n.tps_contemporary;
    j["tps_max"] = n.tps_max;
    j["hardware_band"] = {n.hardware_band.first, n.hardware_band.second};
    if (n.tps_projection_bounds)
        j["tps_projection_bounds"] = {{"low", n.tps_projection_bounds->first},
                                      {"high", n.tps_projection_bounds->second}};
    j["bonding"] = n.bonding;
    j["slashing"] = n.slashing;
    j["rewards"] = n.rewards;
    if (!n.provenance.empty()) j["provenance"] = n.provenance;
    return j;
}

ordered_json hardware_to_json(const HardwareProfile& h) {
    ordered_json j;
    j["id"] = h.id;
    j["label"] = h.label;
    ordered_json spec;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, AverageWattsSpec>) {
                spec["kind"] = "average_watts";
                spec["watts"] = s.watts;
            } else if constexpr (std::is_same_v<T, IdleAndLoadWattsSpec>) {
                spec["kind"] = "idle_and_load_watts";
                spec["idle_watts"] = s.idle_watts;
                spec["load_watts"] = s.load_watts;
            } else {
                spec["kind"] = "yearly_kwh";
                spec["kwh"] = s.kwh;
            }
        },
        h.power_spec);
    j["power_spec"] = spec;
    if (!h.provenance.empty()) j["provenance"] = h.provenance;
    return j;
}

ordered_json series_to_json(const SeriesEntry& e) {
    ordered_json j;
    j["id"] = e.id;
    j["network_id"] = e.network_id;
    j["source_label"] = e.series.source_label;
    ordered_json samples = ordered_json::array();
    for (const auto& s : e.series.samples)
        samples.push_back({s.date.to_string(), s.n_val, s.tps});
    j["samples"] = samples;
    return j;
}

ordered_json reference_to_json(const ReferenceSystem& r) {
    ordered_json j;
    j["id"] = r.id;
    j["display_name"] = r.display_name;
    j["throughput"] = {{"value", r.throughput.value},
                       {"unit", enum_name(r.throughput.unit, kThroughputUnitNames)}};
    ordered_json bounds = ordered_json::array();
    for (const auto& b : r.bounds) {
        ordered_json bound;
        if (b.label) bound["label"] = *b.label;
        bound["energy"] = {{"value", b.energy.value},
                           {"unit", enum_name(b.energy.kind, kEnergyKindNames)}};
        bounds.push_back(bound);
    }
    j["bounds"] = bounds;
    if (!r.provenance.empty()) j["provenance"] = r.provenance;
    return j;
}

ordered_json source_to_json(const SourceDescriptor& s) {
    ordered_json j;
    j["id"] = s.id;
    j["network_id"] = s.network_id;
    j["url"] = s.url;
    j["metric"] = enum_name(s.metric, kMetricNames);
    ordered_json rule;
    std::visit(
        [&](const auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, JsonPointerRule>) {
                rule["kind"] = "json_pointer";
                rule["pointer"] = r.pointer;
            } else if constexpr (std::is_same_v<T, RegexRule>) {
                rule["kind"] = "regex";
                rule["pattern"] = r.pattern;
            } else {
                rule["kind"] = "manual";
            }
        },
        s.extraction);
    j["extraction"] = rule;
    if (s.post_scale) j["post_scale"] = *s.post_scale;
    return j;
}

}  // namespace

std::string serialize_dataset(const Dataset& d) {
    ordered_json j;
    j["snapshot_date"] = d.snapshot_date.to_string();
    j["networks"] = ordered_json::array();
    for (const auto& n : d.networks) j["networks"].push_back(network_to_json(n));
    j["hardware"] = ordered_json::array();
    for (const auto& h : d.hardware) j["hardware"].push_back(hardware_to_json(h));
    j["series"] = ordered_json::array();
    for (const auto& s : d.series) j["series"].push_back(series_to_json(s));
    j["references"] = ordered_json::array();
    for (const auto& r : d.references) j["references"].push_back(reference_to_json(r));
    j["sources"] = ordered_json::array();
    for (const auto& s : d.sources) j["sources"].push_back(source_to_json(s));
    return j.dump(2) + "\n";
}

}  // namespace catalog
}  // namespace dlec
