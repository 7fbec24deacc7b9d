#include "dlec/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace dlec {

const char* to_string(Scenario s) {
    return s == Scenario::optimistic ? "optimistic" : "pessimistic";
}

namespace report {

namespace {

using ordered_json = nlohmann::ordered_json;

// Significant-digit formatting for human tables, shortest round-trip for
// machine formats.
std::string human(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}
std::string full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::pair<PowerDraw, PowerDraw> network_band(const Dataset& d, const NetworkProfile& n,
                                             double hours_per_year) {
    const auto* low = d.find_hardware(n.hardware_band.first);
    const auto* high = d.find_hardware(n.hardware_band.second);
    if (!low || !high)
        throw ReferenceError("network '" + n.id + "': hardware band does not resolve");
    return {catalog::resolve_power(*low, hours_per_year),
            catalog::resolve_power(*high, hours_per_year)};
}

ComparisonRow row_from_band(const NetworkProfile& n, const ScenarioBand& band, double tps,
                            const std::string& label_suffix) {
    ComparisonRow row;
    row.id = n.id;
    row.label = n.display_name + label_suffix;
    row.global = band.global;
    row.per_tx = band.per_tx;
    row.throughput_tps = tps;
    row.notes = n.provenance;
    return row;
}

}  // namespace

std::vector<ComparisonRow> build_comparison(const Dataset& d,
                                            const std::map<std::string, AffineValidatorModel>& models,
                                            double hours_per_year) {
    std::vector<ComparisonRow> rows;

    for (const auto& n : d.networks) {
        try {
            const auto [low, high] = network_band(d, n, hours_per_year);
            if (n.tps_projection_bounds) {
                const Throughput l_low(n.tps_projection_bounds->first);
                const Throughput l_high(n.tps_projection_bounds->second);
                const auto [at_low, at_high] =
                    model::bounded_projection(n.n_val, low, high, l_low, l_high);
                rows.push_back(
                    row_from_band(n, at_high, l_high.tps(), " (high projection)"));
                rows.push_back(row_from_band(n, at_low, l_low.tps(), " (low projection)"));
            } else if (n.tps_contemporary) {
                const Throughput l(*n.tps_contemporary);
                rows.push_back(
                    row_from_band(n, model::scenario_range(n.n_val, low, high, l), l.tps(), ""));
            } else {
                throw DomainError("no throughput figure available");
            }
            if (auto it = models.find(n.id); it != models.end()) {
                auto& note = rows.back().notes;
                if (!note.empty()) note += "; ";
                note += "fitted kappa=" + human(it->second.kappa) +
                        " lambda=" + human(it->second.lambda);
            }
        } catch (const Error& e) {
            throw DomainError("network '" + n.id + "': " + e.what());
        }
    }

    for (const auto& r : d.references) {
        try {
            const Throughput l = r.throughput.unit == ThroughputSpec::Unit::tx_per_day
                                     ? model::tx_per_day_to_tps(r.throughput.value)
                                     : Throughput(r.throughput.value);
            std::vector<GlobalPower> powers;
            for (const auto& b : r.bounds) {
                if (b.energy.kind == ReferenceEnergySpec::Kind::global_kw) {
                    powers.emplace_back(b.energy.value);
                } else {
                    const AnnualEnergy annual{
                        b.energy.value,
                        b.energy.kind == ReferenceEnergySpec::Kind::gj_per_year
                            ? AnnualEnergy::Unit::gj_per_year
                            : AnnualEnergy::Unit::kwh_per_year};
                    powers.push_back(model::reference_global_power(annual, hours_per_year));
                }
            }
            const auto [lo, hi] = std::minmax_element(
                powers.begin(), powers.end(),
                [](const GlobalPower& a, const GlobalPower& b) {
                    return a.kilowatts() < b.kilowatts();
                });
            ComparisonRow row;
            row.id = r.id;
            row.label = r.display_name;
            row.global = {*lo, *hi};
            row.per_tx = {model::reference_per_tx(*lo, l), model::reference_per_tx(*hi, l)};
            row.throughput_tps = l.tps();
            row.is_reference = true;
            row.notes = r.provenance;
            rows.push_back(std::move(row));
        } catch (const Error& e) {
            throw DomainError("reference '" + r.id + "': " + e.what());
        }
    }
    return rows;
}

CurveSeries sample_curve(const std::string& network_id, const CurveSource& source,
                         const PowerDraw& p, const ThroughputDomain& domain,
                         std::size_t n_points, CurveSpacing spacing, Scenario scenario) {
    if (n_points < 2) throw DomainError("curve sampling requires at least 2 points");

    CurveSeries series;
    series.network_id = network_id;
    series.scenario = scenario;
    series.domain = domain;
    series.points.reserve(n_points);

    const double lo = domain.min_tps;
    const double hi = domain.max_tps;
    for (std::size_t i = 0; i < n_points; ++i) {
        double tps;
        if (i == 0) {
            tps = lo;
        } else if (i == n_points - 1) {
            tps = hi;
        } else {
            const double t = static_cast<double>(i) / static_cast<double>(n_points - 1);
            tps = spacing == CurveSpacing::log ? lo * std::pow(hi / lo, t)
                                               : lo + (hi - lo) * t;
        }
        const Throughput l(tps);
        const EnergyPerTx e =
            std::holds_alternative<AffineValidatorModel>(source)
                ? model::projected_per_tx(std::get<AffineValidatorModel>(source), p, l)
                : model::per_tx_consumption(std::get<std::uint64_t>(source), p, l);
        series.points.push_back(CurvePoint{tps, e.kwh_per_tx()});
    }
    return series;
}

namespace {

ordered_json row_to_json(const ComparisonRow& row) {
    ordered_json j;
    j["id"] = row.id;
    j["label"] = row.label;
    j["global_kw"] = {{"optimistic", row.global.optimistic.kilowatts()},
                      {"pessimistic", row.global.pessimistic.kilowatts()}};
    j["per_tx_kwh"] = {{"optimistic", row.per_tx.optimistic.kwh_per_tx()},
                       {"pessimistic", row.per_tx.pessimistic.kwh_per_tx()}};
    j["throughput_tps"] = row.throughput_tps;
    j["is_reference"] = row.is_reference;
    j["notes"] = row.notes;
    return j;
}

std::string rows_to_table(const std::vector<ComparisonRow>& rows, int digits) {
    std::vector<std::array<std::string, 4>> cells;
    cells.push_back({"Platform", "Global [kW]", "Per transaction [kWh/tx]", "Throughput [tx/s]"});
    std::size_t first_reference = rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.is_reference && first_reference == rows.size()) first_reference = i;
        const auto band = [digits](double a, double b) {
            return a == b ? human(a, digits) : human(a, digits) + " -- " + human(b, digits);
        };
        cells.push_back({r.label,
                         band(r.global.optimistic.kilowatts(), r.global.pessimistic.kilowatts()),
                         band(r.per_tx.optimistic.kwh_per_tx(), r.per_tx.pessimistic.kwh_per_tx()),
                         human(r.throughput_tps, digits)});
    }

    std::array<std::size_t, 4> widths{};
    for (const auto& row : cells)
        for (std::size_t c = 0; c < 4; ++c) widths[c] = std::max(widths[c], row[c].size());

    std::ostringstream out;
    std::size_t total = widths[0] + widths[1] + widths[2] + widths[3] + 3 * 2;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        // references go below a separator, like the source table layout
        if (i == first_reference + 1 && first_reference < rows.size())
            out << std::string(total, '-') << "\n";
        for (std::size_t c = 0; c < 4; ++c) {
            out << cells[i][c];
            if (c < 3) out << std::string(widths[c] - cells[i][c].size() + 2, ' ');
        }
        out << "\n";
        if (i == 0) out << std::string(total, '=') << "\n";
    }
    return out.str();
}

}  // namespace

std::string render_rows(const std::vector<ComparisonRow>& rows, OutputFormat format,
                        int significant_digits) {
    switch (format) {
        case OutputFormat::plain_table:
            return rows_to_table(rows, significant_digits);
        case OutputFormat::csv: {
            std::string out =
                "id,label,global_opt_kw,global_pess_kw,per_tx_opt_kwh,per_tx_pess_kwh,"
                "throughput_tps,is_reference\n";
            for (const auto& r : rows) {
                out += r.id + ",\"" + r.label + "\"," +
                       full(r.global.optimistic.kilowatts()) + "," +
                       full(r.global.pessimistic.kilowatts()) + "," +
                       full(r.per_tx.optimistic.kwh_per_tx()) + "," +
                       full(r.per_tx.pessimistic.kwh_per_tx()) + "," +
                       full(r.throughput_tps) + "," + (r.is_reference ? "true" : "false") + "\n";
            }
            return out;
        }
        case OutputFormat::json: {
            ordered_json j = ordered_json::array();
            for (const auto& r : rows) j.push_back(row_to_json(r));
            return j.dump(2) + "\n";
        }
    }
    throw DomainError("unknown output format");
}

std::string render_curve(const CurveSeries& series, OutputFormat format) {
    switch (format) {
        case OutputFormat::plain_table:
        case OutputFormat::csv: {
            std::string out = "tps,kwh_per_tx\n";
            for (const auto& p : series.points)
                out += full(p.tps) + "," + full(p.kwh_per_tx) + "\n";
            return out;
        }
        case OutputFormat::json: {
            ordered_json j;
            j["network_id"] = series.network_id;
            j["scenario"] = to_string(series.scenario);
            j["domain"] = {{"min_tps", series.domain.min_tps},
                           {"max_tps", series.domain.max_tps}};
            ordered_json points = ordered_json::array();
            for (const auto& p : series.points) points.push_back({p.tps, p.kwh_per_tx});
            j["points"] = points;
            return j.dump(2) + "\n";
        }
    }
    throw DomainError("unknown output format");
}

}  // namespace report
}  // namespace dlec
