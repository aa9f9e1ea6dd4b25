#pragma once

#include "chainscan/common.hpp"

namespace chainscan {

/// Accepts ISO-8601 ("2017-06-01T12:00:00Z", "...T12:00:00.123+02:00") and
/// BigQuery export renderings ("2017-06-01 12:00:00 UTC", "2017-06-01 12:00:00.5+00").
/// A missing zone means UTC. Throws ParseError.
Timestamp parse_timestamp(std::string_view text);

/// "YYYY-MM-DDTHH:MM:SSZ", with ".ffffff" when the sub-second part is nonzero.
std::string format_timestamp(Timestamp ts);

struct YearMonth {
    int year = 0;
    unsigned month = 0;

    auto operator<=>(const YearMonth&) const = default;

    YearMonth next() const noexcept;
    std::string to_string() const;
};

YearMonth year_month_of(Timestamp ts);

} // namespace chainscan
