#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dlec/date.hpp"
#include "dlec/model.hpp"

// Estimation of the affine validator model and the correlation diagnostics
// that justify it: Pearson correlation (optionally with the validator series
// lagged by whole days), closed-form OLS, and the two-point fit used where
// only snapshot pairs of (throughput, validator count) are available.

namespace dlec {

struct Observation {
    Date date;
    std::uint64_t n_val = 0;
    double tps = 0.0;
};

/// Timestamped paired samples of validator count and throughput.
struct ObservationSeries {
    std::string source_label;
    std::vector<Observation> samples;

    /// Throws InvariantError unless timestamps are strictly increasing and
    /// at least one sample is present.
    void validate() const;
};

struct CorrelationResult {
    double r = 0.0;
    unsigned lag_days = 0;
    std::size_t n_pairs = 0;
};

namespace calibration {

/// Sample Pearson correlation coefficient of two equal-length series.
CorrelationResult pearson(std::span<const double> x, std::span<const double> y);

/// Pearson correlation with n_val lagged: pairs n_val at date t - lag_days
/// with tps at date t, by calendar date. Dates missing from either side
/// drop the pair.
CorrelationResult lagged_pearson(const ObservationSeries& series, unsigned lag_days);

/// Least-squares fit of n_val = kappa + lambda * tps over the series.
/// The model's domain is `base` truncated to where the fitted count is >= 1.
AffineValidatorModel fit_ols(const ObservationSeries& series, const ThroughputDomain& base);

/// As above with the domain spanning the observed throughput range.
AffineValidatorModel fit_ols(const ObservationSeries& series);

/// Exact affine interpolation through two (tps, n_val) snapshots.
AffineValidatorModel fit_two_point(double tps1, double n_val1, double tps2, double n_val2,
                                   const ThroughputDomain& base);
AffineValidatorModel fit_two_point(double tps1, double n_val1, double tps2, double n_val2);

/// Restrict `base` to throughputs where kappa + lambda * l >= 1. Throws
/// ModelDegenerateError when no such throughput exists in `base`.
ThroughputDomain truncate_domain(double kappa, double lambda, const ThroughputDomain& base);

}  // namespace calibration
}  // namespace dlec
