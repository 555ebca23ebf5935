#include "promptopic/types.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace promptopic {

namespace {

bool parse_int(const std::string& s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    for (std::size_t i = 0; i < len; ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[pos + i]))) return false;
    auto [p, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, out);
    return ec == std::errc() && p == s.data() + pos + len;
}

}  // namespace

std::optional<Timestamp> parse_rfc3339(const std::string& s) {
    // YYYY-MM-DDTHH:MM:SS[.frac](Z|+hh:mm|-hh:mm)
    int y, mo, d, h, mi, sec;
    if (!parse_int(s, 0, 4, y) || s.size() < 20 || s[4] != '-' || s[7] != '-') return std::nullopt;
    if (!parse_int(s, 5, 2, mo) || !parse_int(s, 8, 2, d)) return std::nullopt;
    if (s[10] != 'T' && s[10] != 't' && s[10] != ' ') return std::nullopt;
    if (!parse_int(s, 11, 2, h) || s[13] != ':' || !parse_int(s, 14, 2, mi) || s[16] != ':' ||
        !parse_int(s, 17, 2, sec))
        return std::nullopt;

    std::size_t pos = 19;
    if (pos < s.size() && s[pos] == '.') {  // fractional seconds: truncate
        ++pos;
        std::size_t digits = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            ++pos;
            ++digits;
        }
        if (digits == 0) return std::nullopt;
    }
    if (pos >= s.size()) return std::nullopt;

    int offset_min = 0;
    char c = s[pos];
    if (c == 'Z' || c == 'z') {
        if (pos + 1 != s.size()) return std::nullopt;
    } else if (c == '+' || c == '-') {
        int oh, om;
        if (pos + 6 != s.size() || !parse_int(s, pos + 1, 2, oh) || s[pos + 3] != ':' ||
            !parse_int(s, pos + 4, 2, om))
            return std::nullopt;
        offset_min = oh * 60 + om;
        if (c == '-') offset_min = -offset_min;
    } else {
        return std::nullopt;
    }

    using namespace std::chrono;
    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || sec > 60) return std::nullopt;
    if (sec == 60) sec = 59;  // leap second: clamp
    sys_seconds t = sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec};
    return t - minutes{offset_min};
}

std::string format_rfc3339(Timestamp t) {
    using namespace std::chrono;
    auto dp = floor<days>(t);
    year_month_day ymd{dp};
    hh_mm_ss<seconds> tod{t - dp};
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()), static_cast<long long>(tod.hours().count()),
                  static_cast<long long>(tod.minutes().count()),
                  static_cast<long long>(tod.seconds().count()));
    return buf;
}

}  // namespace promptopic
