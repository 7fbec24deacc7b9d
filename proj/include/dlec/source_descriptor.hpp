#pragma once

#include <optional>
#include <string>
#include <variant>

// Declarative descriptions of the public explorer endpoints that supply
// validator counts and throughput figures. Extraction is rule-driven so a
// page layout change is a data edit, not a code change.

namespace dlec {

/// JSON-pointer lookup into a structured response body.
struct JsonPointerRule {
    std::string pointer;
};

/// Anchored regular expression with exactly one capture group, applied to a
/// text/HTML body.
struct RegexRule {
    std::string pattern;
};

/// Value cannot be extracted from a static body (rendered client-side);
/// connectors refuse such sources instead of guessing an endpoint.
struct ManualRule {};

using ExtractionRule = std::variant<JsonPointerRule, RegexRule, ManualRule>;

enum class SourceMetric { validator_count, tps, tx_per_day, tx_per_epoch };

struct SourceDescriptor {
    std::string id;
    std::string network_id;
    std::string url;
    SourceMetric metric = SourceMetric::validator_count;
    ExtractionRule extraction = ManualRule{};
    /// Applied to the extracted value, e.g. an epoch-length-in-seconds
    /// divisor turning a per-epoch count into tx/s.
    std::optional<double> post_scale;
};

}  // namespace dlec
