#include "kgpat/temporal.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <string>

#include "kgpat/graph.hpp"

namespace kgpat {

namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  bool done() const { return pos_ == s_.size(); }
  bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }
  bool eat(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  // Exactly `n` digits when n > 0, otherwise at least one digit.
  std::optional<long long> digits(int n = 0) {
    std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') {
      ++pos_;
      if (n > 0 && static_cast<int>(pos_ - start) == n) break;
    }
    std::size_t len = pos_ - start;
    if (len == 0 || (n > 0 && static_cast<int>(len) != n)) return std::nullopt;
    long long v = 0;
    std::from_chars(s_.data() + start, s_.data() + pos_, v);
    return v;
  }

  // Decimal number like "12" or "12.5".
  std::optional<double> number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && ((s_[pos_] >= '0' && s_[pos_] <= '9') || s_[pos_] == '.')) ++pos_;
    if (pos_ == start) return std::nullopt;
    double v = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (ec != std::errc{} || ptr != s_.data() + pos_) return std::nullopt;
    return v;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

std::optional<long long> year(Cursor& c) {
  bool negative = c.eat('-');
  auto y = c.digits();
  if (!y) return std::nullopt;
  return negative ? -*y : *y;
}

// Optional timezone suffix; returns the offset in seconds to subtract.
std::optional<double> timezone(Cursor& c) {
  if (c.done()) return 0.0;
  if (c.eat('Z')) return c.done() ? std::optional<double>(0.0) : std::nullopt;
  int sign = 0;
  if (c.eat('+')) sign = 1;
  else if (c.eat('-')) sign = -1;
  else return std::nullopt;
  auto hh = c.digits(2);
  if (!hh || !c.eat(':')) return std::nullopt;
  auto mm = c.digits(2);
  if (!mm || !c.done()) return std::nullopt;
  return sign * (*hh * 3600.0 + *mm * 60.0);
}

std::optional<double> civil_seconds(long long y, long long m, long long d) {
  using namespace std::chrono;
  year_month_day ymd{std::chrono::year{static_cast<int>(y)}, month{static_cast<unsigned>(m)},
                     day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return static_cast<double>(sys_days{ymd}.time_since_epoch().count()) * 86400.0;
}

std::optional<double> clock_time(Cursor& c) {
  auto hh = c.digits(2);
  if (!hh || !c.eat(':')) return std::nullopt;
  auto mm = c.digits(2);
  if (!mm || !c.eat(':')) return std::nullopt;
  auto ss = c.number();
  if (!ss || *hh > 24 || *mm > 59 || *ss >= 61.0) return std::nullopt;
  return *hh * 3600.0 + *mm * 60.0 + *ss;
}

std::optional<double> parse_duration(std::string_view s) {
  Cursor c(s);
  bool negative = c.eat('-');
  if (!c.eat('P')) return std::nullopt;
  constexpr double day = 86400.0;
  double total = 0;
  bool in_time = false;
  bool any = false;
  while (!c.done()) {
    if (!in_time && c.eat('T')) {
      in_time = true;
      continue;
    }
    auto n = c.number();
    if (!n) return std::nullopt;
    any = true;
    if (!in_time && c.eat('Y')) total += *n * 365.2425 * day;
    else if (!in_time && c.eat('M')) total += *n * 30.436875 * day;
    else if (!in_time && c.eat('D')) total += *n * day;
    else if (in_time && c.eat('H')) total += *n * 3600.0;
    else if (in_time && c.eat('M')) total += *n * 60.0;
    else if (in_time && c.eat('S')) total += *n;
    else return std::nullopt;
  }
  if (!any) return std::nullopt;
  return negative ? -total : total;
}

}  // namespace

std::optional<double> to_unix_seconds(const Resource& literal) {
  if (!literal.is_literal()) return std::nullopt;
  const std::string& dt = literal.datatype;
  Cursor c(literal.lexical);

  if (dt == xsd::duration) return parse_duration(literal.lexical);
  if (dt == xsd::time) {
    auto t = clock_time(c);
    auto tz = t ? timezone(c) : std::nullopt;
    if (!tz) return std::nullopt;
    return *t - *tz;
  }
  if (dt == xsd::gMonthDay) {
    if (!c.eat('-') || !c.eat('-')) return std::nullopt;
    auto m = c.digits(2);
    if (!m || !c.eat('-')) return std::nullopt;
    auto d = c.digits(2);
    if (!d) return std::nullopt;
    auto tz = timezone(c);
    auto base = civil_seconds(1970, *m, *d);
    if (!tz || !base) return std::nullopt;
    return *base - *tz;
  }

  auto y = year(c);
  if (!y) return std::nullopt;
  long long month = 1, d = 1;
  double tod = 0;
  if (dt == xsd::gYear) {
    // nothing more
  } else if (dt == xsd::gYearMonth || dt == xsd::date || dt == xsd::dateTime) {
    if (!c.eat('-')) return std::nullopt;
    auto m = c.digits(2);
    if (!m) return std::nullopt;
    month = *m;
    if (dt != xsd::gYearMonth) {
      if (!c.eat('-')) return std::nullopt;
      auto dd = c.digits(2);
      if (!dd) return std::nullopt;
      d = *dd;
    }
    if (dt == xsd::dateTime) {
      if (!c.eat('T')) return std::nullopt;
      auto t = clock_time(c);
      if (!t) return std::nullopt;
      tod = *t;
    }
  } else {
    return std::nullopt;
  }
  auto tz = timezone(c);
  auto base = civil_seconds(*y, month, d);
  if (!tz || !base) return std::nullopt;
  return *base + tod - *tz;
}

std::optional<double> parse_numeric(std::string_view lexical) {
  while (!lexical.empty() && lexical.front() == ' ') lexical.remove_prefix(1);
  while (!lexical.empty() && lexical.back() == ' ') lexical.remove_suffix(1);
  if (!lexical.empty() && lexical.front() == '+') lexical.remove_prefix(1);
  if (lexical.empty()) return std::nullopt;
  double v = 0;
  auto [ptr, ec] = std::from_chars(lexical.data(), lexical.data() + lexical.size(), v);
  if (ec != std::errc{} || ptr != lexical.data() + lexical.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<double> literal_value(const Resource& literal) {
  if (!literal.is_literal()) return std::nullopt;
  switch (classify_datatype(literal.datatype)) {
    case DatatypeClass::Numeric: return parse_numeric(literal.lexical);
    case DatatypeClass::Temporal: return to_unix_seconds(literal);
    default: return std::nullopt;
  }
}

}  // namespace kgpat
