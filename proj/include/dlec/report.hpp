#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "dlec/catalog.hpp"
#include "dlec/model.hpp"

// Comparison table and curve-sampling output: the presentation layer over
// the consumption model. Curves are plotter-agnostic CSV/JSON; no graphics.

namespace dlec {

/// One line of the comparison table. Networks with projection bounds
/// produce two rows (one per bound); reference systems one row each.
struct ComparisonRow {
    std::string id;
    std::string label;
    Band<GlobalPower> global{GlobalPower(0), GlobalPower(0)};
    Band<EnergyPerTx> per_tx{EnergyPerTx(0), EnergyPerTx(0)};
    double throughput_tps = 0.0;
    bool is_reference = false;
    std::string notes;
};

struct CurvePoint {
    double tps = 0.0;
    double kwh_per_tx = 0.0;
};

enum class Scenario { optimistic, pessimistic };

/// Sampled consumption curve for one network and one hardware scenario.
struct CurveSeries {
    std::string network_id;
    Scenario scenario = Scenario::optimistic;
    std::vector<CurvePoint> points;
    ThroughputDomain domain{ThroughputDomain::kDefaultMinTps, 1.0};
};

enum class OutputFormat { plain_table, csv, json };
enum class CurveSpacing { log, linear };

const char* to_string(Scenario s);

namespace report {

/// One row per network (two for projection-bound networks) followed by one
/// row per reference system, in dataset order. `models` entries, keyed by
/// network id, only annotate the notes column; row values come from the
/// observed validator counts.
std::vector<ComparisonRow> build_comparison(
    const Dataset& d, const std::map<std::string, AffineValidatorModel>& models = {},
    double hours_per_year = kDefaultHoursPerYear);

/// Either a fitted validator model or a fixed validator count.
using CurveSource = std::variant<AffineValidatorModel, std::uint64_t>;

/// Sample the per-transaction consumption curve over `domain` with exact
/// endpoints. Log spacing matches the log-log presentation of the curves.
CurveSeries sample_curve(const std::string& network_id, const CurveSource& source,
                         const PowerDraw& p, const ThroughputDomain& domain,
                         std::size_t n_points, CurveSpacing spacing,
                         Scenario scenario);

/// Deterministic text output. plain_table rounds to 4 significant digits;
/// csv/json carry full precision.
std::string render_rows(const std::vector<ComparisonRow>& rows, OutputFormat format,
                        int significant_digits = 4);
std::string render_curve(const CurveSeries& series, OutputFormat format);

}  // namespace report
}  // namespace dlec
