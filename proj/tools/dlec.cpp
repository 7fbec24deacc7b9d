// dlec — estimate the energy footprint of proof-of-stake ledgers.
//
// Subcommands mirror the workflow: fit/correlate a validator-count model
// from observations, estimate one network, compare all of them against the
// reference systems, export curve samples, and refresh the snapshot from
// recorded (or, with --live, real) explorer responses.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dlec/calibration.hpp"
#include "dlec/catalog.hpp"
#include "dlec/connectors.hpp"
#include "dlec/model.hpp"
#include "dlec/report.hpp"

namespace {

using namespace dlec;

constexpr int kExitLookup = 2;
constexpr int kExitDomain = 3;
constexpr int kExitDegenerate = 4;
constexpr int kExitTransport = 5;

struct GlobalOptions {
    std::string dataset_path = "data/snapshot.json";
    std::string format = "table";
    double hours_per_year = kDefaultHoursPerYear;
    int digits = 4;
    std::string cache_dir;
};

OutputFormat parse_format(const std::string& name) {
    if (name == "table") return OutputFormat::plain_table;
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw ParseError("unknown format '" + name + "' (expected table, csv, or json)");
}

std::string available_ids(const Dataset& d) {
    std::string ids;
    for (const auto& n : d.networks) ids += (ids.empty() ? "" : ", ") + n.id;
    return ids;
}

std::filesystem::path fixture_dir(const GlobalOptions& opts) {
    if (!opts.cache_dir.empty()) return opts.cache_dir;
    if (const char* env = std::getenv("DLEC_CACHE_DIR")) return env;
    return std::filesystem::path(opts.dataset_path).parent_path() / "fixtures";
}

/// Fit a validator model from the network's bundled series, if any:
/// two samples interpolate exactly, more go through least squares.
std::optional<AffineValidatorModel> model_for_network(const Dataset& d,
                                                      const NetworkProfile& n) {
    for (const auto& entry : d.series) {
        if (entry.network_id != n.id) continue;
        const auto& samples = entry.series.samples;
        const ThroughputDomain base(std::min(ThroughputDomain::kDefaultMinTps, n.tps_max),
                                    n.tps_max);
        if (samples.size() == 2)
            return calibration::fit_two_point(samples[0].tps,
                                              static_cast<double>(samples[0].n_val),
                                              samples[1].tps,
                                              static_cast<double>(samples[1].n_val), base);
        return calibration::fit_ols(entry.series, base);
    }
    return std::nullopt;
}

int cmd_estimate(const GlobalOptions& opts, const std::string& network_id,
                 std::optional<double> tps_override, const std::string& scenario) {
    const Dataset d = catalog::load_dataset(opts.dataset_path);
    const auto* n = d.find_network(network_id);
    if (!n) {
        std::cerr << "unknown network '" << network_id << "'; available: " << available_ids(d)
                  << "\n";
        return kExitLookup;
    }

    Dataset view = d;  // apply throughput override to a copy
    if (tps_override) {
        if (*tps_override <= 0.0 || *tps_override > n->tps_max)
            throw DomainError("throughput override " + std::to_string(*tps_override) +
                              " outside (0, " + std::to_string(n->tps_max) + "] for network '" +
                              network_id + "'");
        for (auto& net : view.networks) {
            if (net.id != network_id) continue;
            net.tps_contemporary = *tps_override;
            net.tps_projection_bounds.reset();
        }
    }

    auto rows = report::build_comparison(view, {}, opts.hours_per_year);
    std::erase_if(rows, [&](const ComparisonRow& r) { return r.id != network_id; });
    if (scenario != "both") {
        for (auto& r : rows) {
            if (scenario == "optimistic") {
                r.global.pessimistic = r.global.optimistic;
                r.per_tx.pessimistic = r.per_tx.optimistic;
            } else {
                r.global.optimistic = r.global.pessimistic;
                r.per_tx.optimistic = r.per_tx.pessimistic;
            }
        }
    }
    std::cout << report::render_rows(rows, parse_format(opts.format), opts.digits);
    return 0;
}

int cmd_fit(const GlobalOptions& opts, const std::string& series_path,
            const std::string& method, std::optional<unsigned> lag) {
    const ObservationSeries series = catalog::load_series_csv(series_path, series_path);
    series.validate();

    AffineValidatorModel m;
    const bool two_point =
        method == "two_point" || (method == "auto" && series.samples.size() == 2);
    if (two_point) {
        if (series.samples.size() != 2)
            throw DegenerateSeriesError("two-point fit requires exactly 2 samples, got " +
                                        std::to_string(series.samples.size()));
        m = calibration::fit_two_point(series.samples[0].tps,
                                       static_cast<double>(series.samples[0].n_val),
                                       series.samples[1].tps,
                                       static_cast<double>(series.samples[1].n_val));
    } else {
        m = calibration::fit_ols(series);
    }

    std::cout << "method: " << (m.method == FitMethod::ols ? "ols" : "two_point") << "\n"
              << "kappa: " << m.kappa << "\n"
              << "lambda: " << m.lambda << "\n"
              << "domain: (" << m.domain.min_tps << ", " << m.domain.max_tps << "] tx/s\n";
    if (m.diagnostics) {
        std::cout << "r_squared: " << m.diagnostics->r_squared << "\n"
                  << "rss: " << m.diagnostics->residual_sum_squares << "\n"
                  << "n_points: " << m.diagnostics->n_points << "\n";
    }
    if (lag) {
        const auto c = calibration::lagged_pearson(series, *lag);
        std::cout << "lagged_pearson(lag=" << c.lag_days << "): r=" << c.r
                  << " over " << c.n_pairs << " pairs\n";
    }
    return 0;
}

int cmd_correlate(const GlobalOptions&, const std::string& series_path, unsigned lag) {
    const ObservationSeries series = catalog::load_series_csv(series_path, series_path);
    series.validate();
    const auto c0 = calibration::lagged_pearson(series, 0);
    std::cout << "pearson: r=" << c0.r << " over " << c0.n_pairs << " pairs\n";
    if (lag > 0) {
        const auto cl = calibration::lagged_pearson(series, lag);
        std::cout << "lagged_pearson(lag=" << cl.lag_days << "): r=" << cl.r << " over "
                  << cl.n_pairs << " pairs\n";
    }
    return 0;
}

int cmd_compare(const GlobalOptions& opts) {
    const Dataset d = catalog::load_dataset(opts.dataset_path);
    std::map<std::string, AffineValidatorModel> models;
    for (const auto& n : d.networks)
        if (auto m = model_for_network(d, n)) models.emplace(n.id, *m);
    const auto rows = report::build_comparison(d, models, opts.hours_per_year);
    std::cout << report::render_rows(rows, parse_format(opts.format), opts.digits);
    return 0;
}

int cmd_curve(const GlobalOptions& opts, const std::string& network_id,
              std::optional<double> min_tps, std::optional<double> max_tps,
              std::size_t n_points, const std::string& spacing, const std::string& out_dir) {
    const Dataset d = catalog::load_dataset(opts.dataset_path);
    const auto* n = d.find_network(network_id);
    if (!n) {
        std::cerr << "unknown network '" << network_id << "'; available: " << available_ids(d)
                  << "\n";
        return kExitLookup;
    }

    const auto model = model_for_network(d, *n);
    ThroughputDomain domain =
        model ? model->domain
              : ThroughputDomain(std::min(ThroughputDomain::kDefaultMinTps, n->tps_max),
                                 n->tps_max);
    if (min_tps || max_tps) {
        const double lo = min_tps.value_or(domain.min_tps);
        const double hi = max_tps.value_or(domain.max_tps);
        if (lo < domain.min_tps || hi > domain.max_tps)
            throw DomainError("requested bounds [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "] outside network domain (" +
                              std::to_string(domain.min_tps) + ", " +
                              std::to_string(domain.max_tps) + "]");
        domain = ThroughputDomain(lo, hi);
    }

    const auto* low_hw = d.find_hardware(n->hardware_band.first);
    const auto* high_hw = d.find_hardware(n->hardware_band.second);
    const report::CurveSource source =
        model ? report::CurveSource(*model) : report::CurveSource(n->n_val);
    const auto spacing_mode = spacing == "linear" ? CurveSpacing::linear : CurveSpacing::log;

    for (const auto& [hw, scenario] :
         {std::pair{low_hw, Scenario::optimistic}, std::pair{high_hw, Scenario::pessimistic}}) {
        const auto series = report::sample_curve(
            network_id, source, catalog::resolve_power(*hw, opts.hours_per_year), domain,
            n_points, spacing_mode, scenario);
        const auto path = std::filesystem::path(out_dir) /
                          (network_id + "_" + to_string(scenario) + ".csv");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ParseError("cannot write " + path.string());
        out << report::render_curve(series, OutputFormat::csv);
        std::cerr << "wrote " << path.string() << "\n";
    }
    return 0;
}

int cmd_fetch(const GlobalOptions& opts, const std::string& network_id, bool live,
              const std::string& as_of, const std::string& out_path) {
    const Dataset d = catalog::load_dataset(opts.dataset_path);

    std::vector<SourceDescriptor> descs;
    for (const auto& s : d.sources) {
        if (!network_id.empty() && network_id != "all" && s.network_id != network_id) continue;
        if (std::holds_alternative<ManualRule>(s.extraction)) {
            std::cerr << "skipping source '" << s.id
                      << "': marked manual (value rendered client-side)\n";
            continue;
        }
        descs.push_back(s);
    }

    std::unique_ptr<connectors::Transport> transport;
    if (live)
        transport = std::make_unique<connectors::HttpTransport>();
    else
        transport = std::make_unique<connectors::FixtureTransport>(fixture_dir(opts), d.sources);

    std::vector<std::string> errors;
    const auto results = connectors::fetch_all(descs, *transport, as_of, &errors);
    for (const auto& e : errors) std::cerr << "fetch failed: " << e << "\n";

    const Dataset updated = connectors::snapshot(results, d, Date::parse(as_of));
    const std::string text = catalog::serialize_dataset(updated);
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw ParseError("cannot write " + out_path);
        out << text;
        std::cerr << "wrote " << out_path << " (" << results.size() << "/" << descs.size()
                  << " sources)\n";
    }
    return errors.empty() ? 0 : kExitTransport;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy consumption estimator for proof-of-stake distributed ledgers"};
    app.require_subcommand(1);

    GlobalOptions opts;
    app.add_option("--dataset", opts.dataset_path, "Dataset file")->capture_default_str();
    app.add_option("--format", opts.format, "Output format: table, csv, json")
        ->capture_default_str();
    app.add_option("--hours-per-year", opts.hours_per_year,
                   "Annualization constant (sensitivity analysis)")
        ->capture_default_str();
    app.add_option("--digits", opts.digits, "Significant digits in table output")
        ->capture_default_str();
    app.add_option("--cache-dir", opts.cache_dir,
                   "Fixture/cache directory (or DLEC_CACHE_DIR)");

    std::string network_id, scenario = "both", series_path, method = "auto";
    std::string spacing = "log", out_dir = ".", out_path, as_of = "1970-01-01";
    std::optional<double> tps_override, min_tps, max_tps;
    std::optional<unsigned> fit_lag;
    unsigned corr_lag = 0;
    std::size_t n_points = 50;
    bool live = false;

    auto* estimate = app.add_subcommand("estimate", "Estimate one network's footprint");
    estimate->add_option("network", network_id, "Network id")->required();
    estimate->add_option("--tps", tps_override, "Throughput override (tx/s)");
    estimate->add_option("--scenario", scenario, "optimistic, pessimistic, or both")
        ->capture_default_str();

    auto* fit = app.add_subcommand("fit", "Fit a validator-count model from a series file");
    fit->add_option("series", series_path, "CSV file with header date,n_val,tps")->required();
    fit->add_option("--method", method, "ols, two_point, or auto")->capture_default_str();
    fit->add_option("--lag", fit_lag, "Also report the lagged correlation (days)");

    auto* correlate = app.add_subcommand("correlate", "Correlation diagnostics for a series");
    correlate->add_option("series", series_path, "CSV file with header date,n_val,tps")
        ->required();
    correlate->add_option("--lag", corr_lag, "Lag in days")->capture_default_str();

    app.add_subcommand("compare", "Comparison table across all networks and references");

    auto* curve = app.add_subcommand("curve", "Export consumption-vs-throughput curve samples");
    curve->add_option("network", network_id, "Network id")->required();
    curve->add_option("--min", min_tps, "Lower throughput bound (tx/s)");
    curve->add_option("--max", max_tps, "Upper throughput bound (tx/s)");
    curve->add_option("--points", n_points, "Number of samples")->capture_default_str();
    curve->add_option("--spacing", spacing, "log or linear")->capture_default_str();
    curve->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();

    auto* fetch = app.add_subcommand("fetch", "Refresh the snapshot from explorer sources");
    fetch->add_option("network", network_id, "Network id or 'all'")->default_val("all");
    auto* live_flag =
        fetch->add_flag("--live", live, "Fetch over HTTP instead of replaying fixtures");
    fetch->add_flag("--offline", "Replay recorded fixtures (the default)")
        ->excludes(live_flag);
    fetch->add_option("--as-of", as_of, "Observation/snapshot date (YYYY-MM-DD)")
        ->capture_default_str();
    fetch->add_option("--out", out_path, "Output snapshot path ('-' for stdout)");

    // global options may appear after the subcommand name too
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (estimate->parsed()) return cmd_estimate(opts, network_id, tps_override, scenario);
        if (fit->parsed()) return cmd_fit(opts, series_path, method, fit_lag);
        if (correlate->parsed()) return cmd_correlate(opts, series_path, corr_lag);
        if (app.get_subcommand("compare")->parsed()) return cmd_compare(opts);
        if (curve->parsed())
            return cmd_curve(opts, network_id, min_tps, max_tps, n_points, spacing, out_dir);
        if (fetch->parsed()) return cmd_fetch(opts, network_id, live, as_of, out_path);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const ModelDegenerateError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const BandOrderError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const BoundsError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const UnitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const DegenerateSeriesError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const LengthMismatchError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const InsufficientOverlapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const CoincidentAbscissaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const TransportError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitTransport;
    } catch (const ExtractionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitTransport;
    } catch (const ExtractedValueError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitTransport;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitLookup;
    }
    return 0;
}
