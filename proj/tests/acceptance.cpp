// Acceptance gate: one line per criterion, exit 0 only if all pass.
//
//  1. VisaNet per-transaction figure reproduced to 1e-7.
//  2. Bitcoin global-power / per-tx rows reproduced to 1%.
//  3. Bitcoin per-tx at least two orders of magnitude above any PoS row.
//  4. 10,000 randomized model-equation property cases at 1e-12, under 5 s.
//  5. Calibration oracle suite (OLS recovery, brute-force oracle, two-point
//     interpolation, Pearson affine invariance, lag-28 echo).
//  6. Bundled dataset round-trips; every violation code is exercised.
//  7. Curve sampling matches the closed form; log spacing is geometric.
//  8. Offline fetch replay is byte-identical across runs.
//  9. Values with no independently checkable published figure are
//     substituted by curated dataset entries plus criteria 4-5.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dlec/calibration.hpp"
#include "dlec/catalog.hpp"
#include "dlec/connectors.hpp"
#include "dlec/errors.hpp"
#include "dlec/model.hpp"
#include "dlec/report.hpp"

using namespace dlec;

namespace {

namespace fs = std::filesystem;

const fs::path kDataDir = DLEC_DATA_DIR;
const std::string kCli = DLEC_CLI_PATH;

int g_failures = 0;

void report_criterion(int number, const std::string& what,
                      const std::function<void()>& body) {
    try {
        body();
        std::printf("criterion %d: PASS  %s\n", number, what.c_str());
    } catch (const std::exception& e) {
        ++g_failures;
        std::printf("criterion %d: FAIL  %s\n    %s\n", number, what.c_str(), e.what());
    }
}

void require(bool ok, const std::string& message) {
    if (!ok) throw std::runtime_error(message);
}

double rel_err(double actual, double expected) {
    return std::fabs(actual - expected) / std::max(std::fabs(expected), 1e-300);
}

void require_close(double actual, double expected, double tol, const std::string& what) {
    if (rel_err(actual, expected) > tol) {
        std::ostringstream msg;
        msg.precision(17);
        msg << what << ": got " << actual << ", expected " << expected << " (rel err "
            << rel_err(actual, expected) << " > " << tol << ")";
        throw std::runtime_error(msg.str());
    }
}

Dataset bundled() { return catalog::load_dataset(kDataDir / "snapshot.json"); }

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---------------------------------------------------------------------------

void criterion1_visanet() {
    const auto per_tx = model::reference_per_tx(GlobalPower(22387.1131),
                                                model::tx_per_day_to_tps(150000000.0));
    require_close(per_tx.kwh_per_tx(), 0.0035819381, 1e-7, "VisaNet kWh/tx");
}

void criterion2_bitcoin() {
    const Dataset d = bundled();
    const auto* btc = d.find_reference("bitcoin");
    require(btc != nullptr, "bitcoin reference missing from dataset");
    require(btc->bounds.size() == 2, "bitcoin must carry two annualized bounds");

    std::vector<double> kw;
    for (const auto& b : btc->bounds) {
        require(b.energy.kind == ReferenceEnergySpec::Kind::kwh_per_year,
                "bitcoin bounds are published in kWh/year");
        kw.push_back(
            model::reference_global_power(AnnualEnergy{b.energy.value,
                                                       AnnualEnergy::Unit::kwh_per_year})
                .kilowatts());
    }
    std::sort(kw.begin(), kw.end());
    require_close(kw[0], 3373287.671, 0.01, "bitcoin lower global power [kW]");
    require_close(kw[1], 34817351.598, 0.01, "bitcoin upper global power [kW]");

    require(btc->throughput.unit == ThroughputSpec::Unit::tps, "bitcoin throughput unit");
    const Throughput l(btc->throughput.value);
    require_close(model::reference_per_tx(GlobalPower(kw[0]), l).kwh_per_tx(), 360.393,
                  0.01, "bitcoin lower kWh/tx");
    require_close(model::reference_per_tx(GlobalPower(kw[1]), l).kwh_per_tx(), 3691.407,
                  0.01, "bitcoin upper kWh/tx");
}

void criterion3_orders_of_magnitude() {
    const auto rows = report::build_comparison(bundled());
    double max_pos = 0.0;
    double bitcoin_low = 0.0;
    for (const auto& r : rows) {
        if (r.is_reference) {
            if (r.id == "bitcoin") bitcoin_low = r.per_tx.optimistic.kwh_per_tx();
        } else {
            max_pos = std::max(max_pos, r.per_tx.pessimistic.kwh_per_tx());
        }
    }
    require(bitcoin_low > 0.0 && max_pos > 0.0, "comparison rows incomplete");
    const double ratio = bitcoin_low / max_pos;
    require(ratio >= 100.0, "bitcoin/PoS per-tx ratio " + std::to_string(ratio) + " < 100");
}

void criterion4_equation_properties() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20210813);
    std::uniform_int_distribution<std::uint64_t> n_dist(1, 10000000);
    std::uniform_real_distribution<double> p_dist(0.1, 500.0);
    std::uniform_real_distribution<double> l_dist(1e-3, 1e4);
    std::uniform_real_distribution<double> kappa_dist(1.0, 1000.0);
    std::uniform_real_distribution<double> lambda_dist(0.0, 100.0);
    constexpr double kTol = 1e-12;

    for (int i = 0; i < 10000; ++i) {
        const std::uint64_t n = n_dist(rng);
        const PowerDraw p(p_dist(rng));
        const Throughput l(l_dist(rng));

        // conservation: global power equals per-tx energy times tx rate
        const double global_kw = model::total_power(n, p).kilowatts();
        const double per_tx = model::per_tx_consumption(n, p, l).kwh_per_tx();
        require_close(per_tx * l.tps() * 3600.0, global_kw, kTol, "conservation");

        // inverse proportionality in throughput
        const double per_tx_2l =
            model::per_tx_consumption(n, p, Throughput(2.0 * l.tps())).kwh_per_tx();
        require_close(2.0 * per_tx_2l, per_tx, kTol, "inverse proportionality");

        // linearity in per-node power
        const double per_tx_2p =
            model::per_tx_consumption(n, PowerDraw(2.0 * p.watts()), l).kwh_per_tx();
        require_close(per_tx_2p, 2.0 * per_tx, kTol, "linearity in p");
        require_close(model::total_power(n, PowerDraw(2.0 * p.watts())).kilowatts(),
                      2.0 * global_kw, kTol, "total power linearity");

        // the fixed-count form is the affine form with lambda = 0
        AffineValidatorModel fixed;
        fixed.kappa = static_cast<double>(n);
        fixed.lambda = 0.0;
        fixed.domain = ThroughputDomain(1e-9, 1e9);
        require_close(model::projected_per_tx(fixed, p, l).kwh_per_tx(), per_tx, kTol,
                      "fixed-count / affine consistency");

        // general affine form against an independent evaluation
        AffineValidatorModel m;
        m.kappa = kappa_dist(rng);
        m.lambda = lambda_dist(rng);
        m.domain = ThroughputDomain(1e-9, 1e9);
        const double projected = model::projected_per_tx(m, p, l).kwh_per_tx();
        const double expected =
            (m.kappa + m.lambda * l.tps()) * p.watts() / 1000.0 / (l.tps() * 3600.0);
        require_close(projected, expected, kTol, "affine substitution");

        // high-load asymptote: per-tx energy never drops below lambda*p
        const double asymptote = m.lambda * p.watts() / 3.6e6;
        require(projected >= asymptote * (1.0 - kTol), "asymptote bound violated");
    }

    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    require(elapsed < 5000, "property suite took " + std::to_string(elapsed) + " ms");
}

ObservationSeries series_from(const std::vector<std::pair<double, std::uint64_t>>& pts) {
    ObservationSeries s;
    s.source_label = "acceptance";
    const std::int64_t base = Date{2021, 1, 1}.serial();
    for (std::size_t i = 0; i < pts.size(); ++i)
        s.samples.push_back(Observation{Date::from_serial(base + static_cast<std::int64_t>(i)),
                                        pts[i].second, pts[i].first});
    return s;
}

// Uncentered normal equations solved with Cramer's rule: an independent
// route to the same least-squares minimizer.
std::pair<double, double> ols_oracle(const ObservationSeries& s) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(s.samples.size());
    for (const auto& o : s.samples) {
        sx += o.tps;
        sy += static_cast<double>(o.n_val);
        sxx += o.tps * o.tps;
        sxy += o.tps * static_cast<double>(o.n_val);
    }
    const double det = n * sxx - sx * sx;
    return {(sy * sxx - sx * sxy) / det, (n * sxy - sx * sy) / det};
}

void criterion5_calibration_oracles() {
    namespace cal = calibration;

    // exact recovery of n = 5 + 2l
    {
        const auto m = cal::fit_ols(series_from({{1.0, 7}, {2.0, 9}, {3.0, 11}, {10.0, 25}}));
        require_close(m.kappa, 5.0, 1e-9, "OLS kappa recovery");
        require_close(m.lambda, 2.0, 1e-9, "OLS lambda recovery");
    }

    // 500 random series against the brute-force oracle
    {
        std::mt19937_64 rng(42);
        std::uniform_int_distribution<int> len_dist(3, 8);
        std::uniform_real_distribution<double> tps_dist(0.5, 200.0);
        std::uniform_int_distribution<std::uint64_t> n_dist(2, 100000);
        for (int trial = 0; trial < 500; ++trial) {
            std::vector<std::pair<double, std::uint64_t>> pts;
            const int len = len_dist(rng);
            for (int i = 0; i < len; ++i) pts.push_back({tps_dist(rng), n_dist(rng)});
            std::sort(pts.begin(), pts.end());
            const auto s = series_from(pts);
            const auto [k_oracle, l_oracle] = ols_oracle(s);
            const auto m = cal::fit_ols(s);
            const double scale = std::max({1.0, std::fabs(k_oracle), std::fabs(l_oracle)});
            require(std::fabs(m.kappa - k_oracle) / scale <= 1e-9,
                    "OLS kappa deviates from oracle at trial " + std::to_string(trial));
            require(std::fabs(m.lambda - l_oracle) / scale <= 1e-9,
                    "OLS lambda deviates from oracle at trial " + std::to_string(trial));
        }
    }

    // two-point interpolation passes through both snapshots exactly
    {
        const auto m = cal::fit_two_point(2.0, 110.0, 6.0, 130.0);
        require_close(m.validators_at(Throughput(2.0)), 110.0, 1e-12, "two-point at l1");
        require_close(m.validators_at(Throughput(6.0)), 130.0, 1e-12, "two-point at l2");
    }

    // Pearson invariance under positive affine maps of either series
    {
        const std::vector<double> x{1.0, 2.5, 3.0, 4.5, 7.0};
        const std::vector<double> y{2.0, 2.2, 3.9, 4.1, 6.5};
        std::vector<double> x2(x.size()), y2(y.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            x2[i] = 3.0 * x[i] + 11.0;
            y2[i] = 0.25 * y[i] - 4.0;
        }
        const double r1 = cal::pearson(x, y).r;
        const double r2 = cal::pearson(x2, y2).r;
        require(std::fabs(r1 - r2) <= 1e-12, "Pearson affine invariance");
    }

    // a series built as a 28-day echo correlates perfectly at lag 28
    {
        ObservationSeries s;
        s.source_label = "echo";
        const std::int64_t base = Date{2021, 1, 1}.serial();
        for (int t = 0; t < 80; ++t) {
            const double tps = 1.0 + 0.37 * t + 3.0 * ((t * 7919) % 13);
            const double future = 1.0 + 0.37 * (t + 28) + 3.0 * (((t + 28) * 7919) % 13);
            s.samples.push_back(Observation{Date::from_serial(base + t),
                                            static_cast<std::uint64_t>(std::llround(future * 100)),
                                            tps * 100});
        }
        const auto r = cal::lagged_pearson(s, 28);
        require(std::fabs(r.r - 1.0) <= 1e-12, "lag-28 echo correlation");
    }
}

void criterion6_dataset_round_trip() {
    const Dataset d = bundled();
    require(catalog::validate_dataset(d).empty(), "bundled dataset has violations");
    const Dataset reparsed = catalog::parse_dataset(catalog::serialize_dataset(d));
    require(reparsed == d, "serialize/reparse is not lossless");

    const auto violates = [](Dataset mutated, ViolationCode code) {
        const auto v = catalog::validate_dataset(mutated);
        return std::any_of(v.begin(), v.end(),
                           [&](const Violation& x) { return x.code == code; });
    };
    const auto network = [&d](const std::string& id) {
        return static_cast<std::size_t>(
            std::find_if(d.networks.begin(), d.networks.end(),
                         [&](const NetworkProfile& n) { return n.id == id; }) -
            d.networks.begin());
    };

    Dataset m1 = d;
    m1.networks[0].hardware_band.first = "ghost";
    require(violates(m1, ViolationCode::dangling_hardware_ref), "DANGLING_HARDWARE_REF");

    Dataset m2 = d;
    m2.series[0].network_id = "atlantis";
    require(violates(m2, ViolationCode::dangling_series_network), "DANGLING_SERIES_NETWORK");

    Dataset m3 = d;
    m3.networks[network("cardano")].hardware_band = {"dell_r730", "hpe_ml350"};
    require(violates(m3, ViolationCode::band_class_mismatch), "BAND_CLASS_MISMATCH");

    Dataset m4 = d;
    m4.networks[network("cardano")].hardware_band = {"dell_r730", "rpi4"};
    require(violates(m4, ViolationCode::band_order), "BAND_ORDER");

    Dataset m5 = d;
    std::swap(m5.series[0].series.samples.front(), m5.series[0].series.samples.back());
    require(violates(m5, ViolationCode::series_order), "SERIES_ORDER");

    Dataset m6 = d;
    m6.networks[network("tezos")].tps_contemporary =
        m6.networks[network("tezos")].tps_max * 2.0;
    require(violates(m6, ViolationCode::tps_over_max), "TPS_OVER_MAX");

    Dataset m7 = d;
    m7.networks[network("tezos")].tps_projection_bounds = {1.0, 10.0};
    require(violates(m7, ViolationCode::throughput_spec_conflict),
            "THROUGHPUT_SPEC_CONFLICT");

    Dataset m8 = d;
    m8.networks[network("ethereum2")].tps_projection_bounds = {3000.0, 15.0};
    require(violates(m8, ViolationCode::projection_bounds_order),
            "PROJECTION_BOUNDS_ORDER");
}

void criterion7_curve_sampling() {
    constexpr std::uint64_t n = 2950;
    const PowerDraw p(4.55);
    const auto curve =
        report::sample_curve("cardano", n, p, ThroughputDomain{0.01, 257.0}, 33,
                             CurveSpacing::log, Scenario::optimistic);
    require(curve.points.size() == 33, "unexpected point count");

    for (const auto& pt : curve.points) {
        const double closed_form =
            model::per_tx_consumption(n, p, Throughput(pt.tps)).kwh_per_tx();
        require(pt.kwh_per_tx == closed_form, "ordinate differs from the closed form");
    }

    const double ratio = curve.points[1].tps / curve.points[0].tps;
    for (std::size_t i = 2; i < curve.points.size(); ++i) {
        const double r = curve.points[i].tps / curve.points[i - 1].tps;
        require(rel_err(r, ratio) <= 1e-12, "log spacing is not geometric");
    }
}

void criterion8_fetch_replay() {
    const fs::path out1 = fs::temp_directory_path() / "dlec_accept_snap1.json";
    const fs::path out2 = fs::temp_directory_path() / "dlec_accept_snap2.json";
    const std::string base = "\"" + kCli + "\" --dataset " +
                             (kDataDir / "snapshot.json").string() +
                             " fetch all --offline --as-of 2021-08-13 --out ";
    require(std::system((base + out1.string() + " 2> /dev/null").c_str()) == 0,
            "first fetch run failed");
    require(std::system((base + out2.string() + " 2> /dev/null").c_str()) == 0,
            "second fetch run failed");
    const std::string a = read_file(out1);
    const std::string b = read_file(out2);
    fs::remove(out1);
    fs::remove(out2);
    require(!a.empty(), "fetch produced an empty snapshot");
    require(a == b, "offline fetch runs are not byte-identical");

    // and the replay actually extracts every non-manual bundled fixture
    const Dataset d = bundled();
    connectors::FixtureTransport transport(kDataDir / "fixtures", d.sources);
    for (const auto& s : d.sources) {
        if (std::holds_alternative<ManualRule>(s.extraction)) continue;
        const auto r1 = connectors::fetch(s, transport, "2021-08-13");
        const auto r2 = connectors::fetch(s, transport, "2021-08-13");
        require(r1.value == r2.value && r1.raw_hash == r2.raw_hash,
                "fixture extraction not deterministic for " + s.id);
    }
}

void criterion9_substituted_values() {
    // Published fit coefficients and the long per-network correlation study
    // rest on data that was never published; the dataset substitutes curated
    // observation snapshots whose provenance is recorded per record, and the
    // fitting/correlation machinery itself is covered by criteria 4-5.
    const Dataset d = bundled();
    for (const auto& n : d.networks)
        require(!n.provenance.empty(), "network '" + n.id + "' lacks provenance");
    for (const auto& h : d.hardware)
        require(!h.provenance.empty(), "hardware '" + h.id + "' lacks provenance");
    for (const auto& r : d.references)
        require(!r.provenance.empty(), "reference '" + r.id + "' lacks provenance");
    require(!d.series.empty(), "no observation series to substitute fit coefficients");
    for (const auto& s : d.series) {
        require(s.series.samples.size() >= 2,
                "series '" + s.id + "' cannot support a fit");
        // every bundled series yields a usable model
        if (s.series.samples.size() == 2) {
            const auto& a = s.series.samples[0];
            const auto& b = s.series.samples[1];
            calibration::fit_two_point(a.tps, static_cast<double>(a.n_val), b.tps,
                                       static_cast<double>(b.n_val));
        } else {
            calibration::fit_ols(s.series);
        }
    }
}

}  // namespace

int main() {
    report_criterion(1, "VisaNet per-transaction figure reproduced (rel err <= 1e-7)",
                     criterion1_visanet);
    report_criterion(2, "Bitcoin global power and per-tx rows reproduced (rel err <= 1%)",
                     criterion2_bitcoin);
    report_criterion(3, "Bitcoin per-tx >= 100x the worst bundled PoS per-tx",
                     criterion3_orders_of_magnitude);
    report_criterion(4, "10,000 randomized equation-property cases at 1e-12 in under 5 s",
                     criterion4_equation_properties);
    report_criterion(5, "calibration oracle suite (OLS, two-point, Pearson, lag echo)",
                     criterion5_calibration_oracles);
    report_criterion(6, "dataset round-trip and full violation-code coverage",
                     criterion6_dataset_round_trip);
    report_criterion(7, "curve samples match the closed form; log spacing geometric",
                     criterion7_curve_sampling);
    report_criterion(8, "offline fetch replay byte-identical across runs",
                     criterion8_fetch_replay);
    report_criterion(9, "unpublished figures substituted by curated, provenance-tagged data",
                     criterion9_substituted_values);

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all 9 criteria passed\n");
    return 0;
}
