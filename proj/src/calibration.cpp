#include "dlec/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace dlec {

void ObservationSeries::validate() const {
    if (samples.empty()) throw InvariantError("observation series must contain samples");
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (!(samples[i - 1].date < samples[i].date))
            throw InvariantError("observation series timestamps must be strictly increasing (" +
                                 samples[i].date.to_string() + " follows " +
                                 samples[i - 1].date.to_string() + ")");
    }
    for (const auto& s : samples) {
        if (!std::isfinite(s.tps) || s.tps < 0.0)
            throw InvariantError("observation tps must be finite and >= 0");
    }
}

namespace calibration {

namespace {

struct CenteredSums {
    double mean_x = 0.0, mean_y = 0.0;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    std::size_t n = 0;
};

CenteredSums centered_sums(std::span<const double> x, std::span<const double> y) {
    CenteredSums s;
    s.n = x.size();
    for (std::size_t i = 0; i < s.n; ++i) {
        s.mean_x += x[i];
        s.mean_y += y[i];
    }
    s.mean_x /= static_cast<double>(s.n);
    s.mean_y /= static_cast<double>(s.n);
    for (std::size_t i = 0; i < s.n; ++i) {
        const double dx = x[i] - s.mean_x;
        const double dy = y[i] - s.mean_y;
        s.sxx += dx * dx;
        s.syy += dy * dy;
        s.sxy += dx * dy;
    }
    return s;
}

}  // namespace

CorrelationResult pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw LengthMismatchError("pearson requires equal-length series (" +
                                  std::to_string(x.size()) + " vs " + std::to_string(y.size()) +
                                  ")");
    if (x.size() < 2) throw DegenerateSeriesError("pearson requires at least 2 points");
    const auto s = centered_sums(x, y);
    if (s.sxx == 0.0 || s.syy == 0.0)
        throw DegenerateSeriesError("pearson undefined for a zero-variance series");
    return CorrelationResult{.r = s.sxy / std::sqrt(s.sxx * s.syy), .lag_days = 0,
                             .n_pairs = x.size()};
}

CorrelationResult lagged_pearson(const ObservationSeries& series, unsigned lag_days) {
    series.validate();
    std::unordered_map<std::int64_t, double> n_val_by_day;
    n_val_by_day.reserve(series.samples.size());
    for (const auto& s : series.samples)
        n_val_by_day.emplace(s.date.serial(), static_cast<double>(s.n_val));

    // n_val at t - lag paired with tps at t; dates without a counterpart drop.
    std::vector<double> lagged_n, tps;
    for (const auto& s : series.samples) {
        auto it = n_val_by_day.find(s.date.serial() - static_cast<std::int64_t>(lag_days));
        if (it == n_val_by_day.end()) continue;
        lagged_n.push_back(it->second);
        tps.push_back(s.tps);
    }
    if (lagged_n.size() < 2)
        throw InsufficientOverlapError("lag of " + std::to_string(lag_days) +
                                       " days leaves fewer than 2 aligned pairs");
    auto result = pearson(lagged_n, tps);
    result.lag_days = lag_days;
    return result;
}

ThroughputDomain truncate_domain(double kappa, double lambda, const ThroughputDomain& base) {
    double min_tps = base.min_tps;
    double max_tps = base.max_tps;
    if (lambda == 0.0) {
        if (kappa < 1.0)
            throw ModelDegenerateError("constant model predicts fewer than 1 validator");
    } else {
        // kappa + lambda * l >= 1  <=>  l >= (1-kappa)/lambda (lambda > 0)
        //                               l <= (1-kappa)/lambda (lambda < 0)
        const double threshold = (1.0 - kappa) / lambda;
        if (lambda > 0.0)
            min_tps = std::max(min_tps, threshold);
        else
            max_tps = std::min(max_tps, threshold);
    }
    if (!(min_tps <= max_tps))
        throw ModelDegenerateError("model predicts fewer than 1 validator over the whole domain");
    return ThroughputDomain(min_tps, max_tps);
}

AffineValidatorModel fit_ols(const ObservationSeries& series, const ThroughputDomain& base) {
    series.validate();
    std::vector<double> tps, n_val;
    tps.reserve(series.samples.size());
    n_val.reserve(series.samples.size());
    for (const auto& s : series.samples) {
        tps.push_back(s.tps);
        n_val.push_back(static_cast<double>(s.n_val));
    }
    if (tps.size() < 2 || std::ranges::count(tps, tps.front()) == static_cast<long>(tps.size()))
        throw DegenerateSeriesError(
            "ols fit requires at least 2 samples with distinct throughput values");

    const auto s = centered_sums(tps, n_val);
    const double lambda = s.sxy / s.sxx;
    const double kappa = s.mean_y - lambda * s.mean_x;

    double rss = 0.0;
    for (std::size_t i = 0; i < tps.size(); ++i) {
        const double e = n_val[i] - (kappa + lambda * tps[i]);
        rss += e * e;
    }
    FitDiagnostics diag{.r_squared = s.syy > 0.0 ? 1.0 - rss / s.syy : 1.0,
                        .residual_sum_squares = rss,
                        .n_points = tps.size()};
    diag.r_squared = std::clamp(diag.r_squared, 0.0, 1.0);

    return AffineValidatorModel{.kappa = kappa,
                                .lambda = lambda,
                                .method = FitMethod::ols,
                                .domain = truncate_domain(kappa, lambda, base),
                                .diagnostics = diag};
}

AffineValidatorModel fit_ols(const ObservationSeries& series) {
    double max_tps = 0.0;
    for (const auto& s : series.samples) max_tps = std::max(max_tps, s.tps);
    if (max_tps <= 0.0) throw DegenerateSeriesError("series has no positive throughput");
    return fit_ols(series,
                   ThroughputDomain(std::min(ThroughputDomain::kDefaultMinTps, max_tps), max_tps));
}

AffineValidatorModel fit_two_point(double tps1, double n_val1, double tps2, double n_val2,
                                   const ThroughputDomain& base) {
    if (tps1 == tps2)
        throw CoincidentAbscissaError("two-point fit requires distinct throughput values");
    const double lambda = (n_val2 - n_val1) / (tps2 - tps1);
    const double kappa = n_val1 - lambda * tps1;
    return AffineValidatorModel{.kappa = kappa,
                                .lambda = lambda,
                                .method = FitMethod::two_point,
                                .domain = truncate_domain(kappa, lambda, base),
                                .diagnostics = std::nullopt};
}

AffineValidatorModel fit_two_point(double tps1, double n_val1, double tps2, double n_val2) {
    const double max_tps = std::max(tps1, tps2);
    if (max_tps <= 0.0) throw DegenerateSeriesError("two-point fit has no positive throughput");
    return fit_two_point(
        tps1, n_val1, tps2, n_val2,
        ThroughputDomain(std::min(ThroughputDomain::kDefaultMinTps, max_tps), max_tps));
}

}  // namespace calibration
}  // namespace dlec
