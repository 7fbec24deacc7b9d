#pragma once

#include <cstdint>
#include <compare>
#include <string>
#include <string_view>

#include "dlec/errors.hpp"

namespace dlec {

/// Calendar date (proleptic Gregorian), parsed from ISO-8601 YYYY-MM-DD.
struct Date {
    int year = 1970;
    unsigned month = 1;
    unsigned day = 1;

    static Date parse(std::string_view iso);

    /// Days since 1970-01-01 (negative before the epoch).
    std::int64_t serial() const;

    /// Inverse of serial().
    static Date from_serial(std::int64_t days);

    std::string to_string() const;

    auto operator<=>(const Date&) const = default;
};

}  // namespace dlec
