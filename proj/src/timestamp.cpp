#include "chainscan/timestamp.hpp"

#include <fmt/format.h>

namespace chainscan {

namespace {

class Cursor {
public:
    explicit Cursor(std::string_view text) : text_(text) {}

    bool done() const { return pos_ == text_.size(); }
    char peek() const { return done() ? '\0' : text_[pos_]; }
    bool consume(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }
    bool consume(std::string_view s) {
        if (!text_.substr(pos_).starts_with(s)) return false;
        pos_ += s.size();
        return true;
    }
    int digits(std::size_t count) {
        int value = 0;
        for (std::size_t i = 0; i < count; ++i) {
            char c = peek();
            if (c < '0' || c > '9') fail("expected digit");
            value = value * 10 + (c - '0');
            ++pos_;
        }
        return value;
    }
    void expect(char c) {
        if (!consume(c)) fail(fmt::format("expected '{}'", c));
    }
    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError(fmt::format("invalid timestamp '{}': {} at offset {}", text_, why, pos_));
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

Timestamp parse_timestamp(std::string_view text) {
    using namespace std::chrono;
    Cursor cur(text);
    int y = cur.digits(4);
    cur.expect('-');
    int mo = cur.digits(2);
    cur.expect('-');
    int d = cur.digits(2);
    if (!cur.consume('T') && !cur.consume('t') && !cur.consume(' ')) cur.fail("expected date/time separator");
    int h = cur.digits(2);
    cur.expect(':');
    int mi = cur.digits(2);
    cur.expect(':');
    int s = cur.digits(2);

    std::int64_t micros = 0;
    if (cur.consume('.')) {
        int n = 0;
        while (cur.peek() >= '0' && cur.peek() <= '9') {
            int digit = cur.digits(1);
            if (n < 6) micros = micros * 10 + digit;
            ++n;
        }
        if (n == 0) cur.fail("empty fraction");
        for (int i = n; i < 6; ++i) micros *= 10;
    }

    minutes offset{0};
    cur.consume(' ');
    if (cur.consume('Z') || cur.consume('z') || cur.consume("UTC")) {
    } else if (cur.peek() == '+' || cur.peek() == '-') {
        int sign = cur.peek() == '-' ? -1 : 1;
        cur.consume(cur.peek());
        int oh = cur.digits(2);
        int om = 0;
        if (cur.consume(':')) {
            om = cur.digits(2);
        } else if (!cur.done()) {
            om = cur.digits(2);
        }
        offset = minutes(sign * (oh * 60 + om));
    }
    if (!cur.done()) cur.fail("trailing characters");

    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) cur.fail("invalid calendar date");
    if (h > 23 || mi > 59 || s > 60) cur.fail("invalid time of day");

    auto local = sys_days(ymd) + hours(h) + minutes(mi) + seconds(s) + microseconds(micros);
    return time_point_cast<microseconds>(local - offset);
}

std::string format_timestamp(Timestamp ts) {
    using namespace std::chrono;
    auto day_point = floor<days>(ts);
    year_month_day ymd{day_point};
    hh_mm_ss hms{ts - day_point};
    auto out = fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}", static_cast<int>(ymd.year()),
                           static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                           hms.hours().count(), hms.minutes().count(), hms.seconds().count());
    if (auto sub = hms.subseconds().count(); sub != 0) out += fmt::format(".{:06}", sub);
    out += 'Z';
    return out;
}

YearMonth YearMonth::next() const noexcept {
    return month == 12 ? YearMonth{year + 1, 1} : YearMonth{year, month + 1};
}

std::string YearMonth::to_string() const { return fmt::format("{:04}-{:02}", year, month); }

YearMonth year_month_of(Timestamp ts) {
    using namespace std::chrono;
    year_month_day ymd{floor<days>(ts)};
    return {static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month())};
}

} // namespace chainscan
