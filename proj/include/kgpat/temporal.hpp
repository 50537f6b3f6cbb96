#pragma once

#include <optional>
#include <string_view>

#include "kgpat/rdf.hpp"

namespace kgpat {

/// Converts a temporal literal to POSIX seconds (UTC). Partial dates anchor at
/// their first instant: gYear at Jan 1, gYearMonth at the first of the month,
/// gMonthDay in 1970; time is seconds after midnight; duration is its total
/// length using mean Gregorian years (365.2425 d) and months (30.436875 d).
/// Returns nullopt for unparseable lexical forms or non-temporal datatypes.
std::optional<double> to_unix_seconds(const Resource& literal);

/// Parses a numeric literal's lexical form ("INF"/"NaN" rejected).
std::optional<double> parse_numeric(std::string_view lexical);

/// Numeric or temporal value of a literal, by its datatype class.
std::optional<double> literal_value(const Resource& literal);

}  // namespace kgpat
