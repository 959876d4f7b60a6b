#pragma once

// Two-line element set parsing, validation and formatting.
//
// Parsing is strictly fixed-column: every field is read from its documented
// column span, separator columns must be blank, and both lines must carry a
// valid modulo-10 checksum.

#include "leochan/core/error.hpp"
#include "leochan/core/time.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace leochan {

struct Tle {
    std::string name;
    int catalog_number{0};
    char classification{'U'};
    std::string intl_designator; ///< columns 10-17, right-trimmed
    int epoch_year{2000};        ///< four-digit year
    double epoch_day{1.0};       ///< fractional day of year, 1.0 = Jan 1 00:00 UTC
    double ndot{0.0};            ///< first derivative of mean motion / 2, rev/day²
    double nddot{0.0};           ///< second derivative of mean motion / 6, rev/day³
    double bstar{0.0};           ///< drag term, 1/earth-radii
    int ephemeris_type{0};
    int element_set_number{0};
    double inclination_deg{0.0};
    double raan_deg{0.0};
    double eccentricity{0.0};
    double arg_perigee_deg{0.0};
    double mean_anomaly_deg{0.0};
    double mean_motion_revs_per_day{0.0};
    int rev_number{0};

    Instant epoch() const { return Instant::from_year_and_day(epoch_year, epoch_day); }

    friend bool operator==(const Tle&, const Tle&) = default;
};

inline constexpr std::size_t kTleLineLength = 69;

/// Modulo-10 checksum: digits count their value, '-' counts 1, everything else 0.
constexpr int tle_checksum(std::string_view payload)
{
    int sum = 0;
    for (char c : payload) {
        if (c >= '0' && c <= '9')
            sum += c - '0';
        else if (c == '-')
            sum += 1;
    }
    return sum % 10;
}

namespace detail {

// 1-based inclusive column span, as TLE documentation writes them.
inline std::string_view columns(std::string_view line, int first, int last)
{
    return line.substr(static_cast<std::size_t>(first - 1), static_cast<std::size_t>(last - first + 1));
}

[[noreturn]] inline void malformed(int line_no, int first, int last, std::string_view field, std::string_view text)
{
    throw Error(ErrorCode::MalformedField, "line " + std::to_string(line_no) + " columns " + std::to_string(first) +
                                               "-" + std::to_string(last) + " (" + std::string(field) + "): '" +
                                               std::string(text) + "'");
}

// Right-aligned numeric field: leading blanks allowed, nothing after the number.
inline double parse_real(std::string_view line, int line_no, int first, int last, std::string_view field)
{
    const std::string_view raw = columns(line, first, last);
    std::string_view s = raw;
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty() || s.front() == ' ' || s.front() == '+' || s.front() == '-') malformed(line_no, first, last, field, raw);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, std::chars_format::fixed);
    if (ec != std::errc{} || ptr != s.data() + s.size()) malformed(line_no, first, last, field, raw);
    return negative ? -v : v;
}

inline int parse_int(std::string_view line, int line_no, int first, int last, std::string_view field)
{
    const std::string_view raw = columns(line, first, last);
    std::string_view s = raw;
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    if (s.empty()) malformed(line_no, first, last, field, raw);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v < 0) malformed(line_no, first, last, field, raw);
    return v;
}

// Digits with an implied leading decimal point, e.g. eccentricity "0001234" -> 0.0001234.
inline double parse_implied_fraction(std::string_view line, int line_no, int first, int last, std::string_view field)
{
    const std::string_view raw = columns(line, first, last);
    long digits = 0;
    for (char c : raw) {
        if (c < '0' || c > '9') malformed(line_no, first, last, field, raw);
        digits = digits * 10 + (c - '0');
    }
    return static_cast<double>(digits) / std::pow(10.0, static_cast<double>(raw.size()));
}

// 8-column "SMMMMMsE" field: sign, 5 mantissa digits with implied leading point, exponent sign and digit.
inline double parse_implied_exponent(std::string_view line, int line_no, int first, int last, std::string_view field)
{
    const std::string_view raw = columns(line, first, last);
    const char sign = raw[0];
    if (sign != ' ' && sign != '+' && sign != '-') malformed(line_no, first, last, field, raw);
    int mantissa = 0;
    for (int i = 1; i <= 5; ++i) {
        const char c = raw[static_cast<std::size_t>(i)];
        if (c < '0' || c > '9') malformed(line_no, first, last, field, raw);
        mantissa = mantissa * 10 + (c - '0');
    }
    const char esign = raw[6];
    const char edigit = raw[7];
    if ((esign != '+' && esign != '-' && esign != ' ') || edigit < '0' || edigit > '9')
        malformed(line_no, first, last, field, raw);
    const int exponent = (esign == '-' ? -1 : 1) * (edigit - '0');
    const double v = mantissa * 1e-5 * std::pow(10.0, exponent);
    return sign == '-' ? -v : v;
}

inline void check_line_shape(std::string_view line, int line_no)
{
    if (line.size() != kTleLineLength)
        throw Error(ErrorCode::LineLengthError, "line " + std::to_string(line_no) + " has " +
                                                    std::to_string(line.size()) + " characters, expected 69");
    if (line[0] != static_cast<char>('0' + line_no) || line[1] != ' ')
        malformed(line_no, 1, 2, "line number", columns(line, 1, 2));
    const char last = line[68];
    if (last < '0' || last > '9') malformed(line_no, 69, 69, "checksum", columns(line, 69, 69));
    const int expected = tle_checksum(line.substr(0, 68));
    if (expected != last - '0')
        throw Error(ErrorCode::ChecksumMismatch, "line " + std::to_string(line_no) + " checksum is " +
                                                     std::string(1, last) + ", computed " + std::to_string(expected));
}

inline void require_blank(std::string_view line, int line_no, std::initializer_list<int> cols)
{
    for (int c : cols)
        if (line[static_cast<std::size_t>(c - 1)] != ' ') malformed(line_no, c, c, "separator", columns(line, c, c));
}

inline std::string rtrim(std::string_view s)
{
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\t')) s.remove_suffix(1);
    return std::string(s);
}

inline void check_range(bool ok, int line_no, int first, int last, std::string_view field, std::string_view line)
{
    if (!ok) malformed(line_no, first, last, field, columns(line, first, last));
}

} // namespace detail

/// Parse one element set. Throws Error{LineLengthError | ChecksumMismatch | MalformedField}.
inline Tle parse_tle(std::string_view line1, std::string_view line2, std::string_view name = {})
{
    using namespace detail;
    check_line_shape(line1, 1);
    check_line_shape(line2, 2);
    require_blank(line1, 1, {9, 18, 33, 44, 53, 62, 64});
    require_blank(line2, 2, {8, 17, 26, 34, 43, 52});

    Tle t;
    t.name = rtrim(name);
    t.catalog_number = parse_int(line1, 1, 3, 7, "catalog number");
    t.classification = line1[7];
    t.intl_designator = rtrim(columns(line1, 10, 17));
    const int yy = parse_int(line1, 1, 19, 20, "epoch year");
    t.epoch_year = yy >= 57 ? 1900 + yy : 2000 + yy;
    t.epoch_day = parse_real(line1, 1, 21, 32, "epoch day");
    check_range(t.epoch_day >= 1.0 && t.epoch_day < 367.0, 1, 21, 32, "epoch day", line1);
    t.ndot = parse_real(line1, 1, 34, 43, "ndot");
    t.nddot = parse_implied_exponent(line1, 1, 45, 52, "nddot");
    t.bstar = parse_implied_exponent(line1, 1, 54, 61, "bstar");
    t.ephemeris_type = line1[62] == ' ' ? 0 : parse_int(line1, 1, 63, 63, "ephemeris type");
    t.element_set_number = parse_int(line1, 1, 65, 68, "element set number");

    const int cat2 = parse_int(line2, 2, 3, 7, "catalog number");
    if (cat2 != t.catalog_number)
        throw Error(ErrorCode::MalformedField, "catalog numbers differ between lines (" +
                                                   std::to_string(t.catalog_number) + " vs " + std::to_string(cat2) +
                                                   ")");
    t.inclination_deg = parse_real(line2, 2, 9, 16, "inclination");
    check_range(t.inclination_deg >= 0.0 && t.inclination_deg <= 180.0, 2, 9, 16, "inclination", line2);
    t.raan_deg = parse_real(line2, 2, 18, 25, "raan");
    check_range(t.raan_deg >= 0.0 && t.raan_deg < 360.0, 2, 18, 25, "raan", line2);
    t.eccentricity = parse_implied_fraction(line2, 2, 27, 33, "eccentricity");
    t.arg_perigee_deg = parse_real(line2, 2, 35, 42, "argument of perigee");
    check_range(t.arg_perigee_deg >= 0.0 && t.arg_perigee_deg < 360.0, 2, 35, 42, "argument of perigee", line2);
    t.mean_anomaly_deg = parse_real(line2, 2, 44, 51, "mean anomaly");
    check_range(t.mean_anomaly_deg >= 0.0 && t.mean_anomaly_deg < 360.0, 2, 44, 51, "mean anomaly", line2);
    t.mean_motion_revs_per_day = parse_real(line2, 2, 53, 63, "mean motion");
    check_range(t.mean_motion_revs_per_day > 0.0, 2, 53, 63, "mean motion", line2);
    t.rev_number = parse_int(line2, 2, 64, 68, "revolution number");
    return t;
}

namespace detail {

inline std::string format_implied_exponent(double v)
{
    char buf[32];
    if (v == 0.0) return " 00000-0";
    const char sign = v < 0 ? '-' : ' ';
    const double a = std::fabs(v);
    int e = static_cast<int>(std::floor(std::log10(a))) + 1;
    long m = std::lround(a * std::pow(10.0, 5 - e));
    if (m >= 100000) {
        ++e;
        m = std::lround(a * std::pow(10.0, 5 - e));
    }
    if (e < -9 || e > 9) throw Error(ErrorCode::MalformedField, "value out of range for implied-exponent field");
    std::snprintf(buf, sizeof buf, "%c%05ld%c%d", sign, m, e < 0 ? '-' : '+', std::abs(e));
    return buf;
}

inline std::string with_checksum(std::string payload)
{
    payload.push_back(static_cast<char>('0' + tle_checksum(payload)));
    return payload;
}

} // namespace detail

/// Format back to the fixed-column layout, checksums included.
inline std::pair<std::string, std::string> format_tle(const Tle& t)
{
    char ndot[16];
    std::snprintf(ndot, sizeof ndot, "%.8f", std::fabs(t.ndot));
    std::string ndot_field = std::string(1, t.ndot < 0 ? '-' : ' ') + (ndot + 1); // drop the leading '0'

    char l1[80];
    std::snprintf(l1, sizeof l1, "1 %05d%c %-8.8s %02d%012.8f %s %s %s %d %4d", t.catalog_number, t.classification,
                  t.intl_designator.c_str(), t.epoch_year % 100, t.epoch_day, ndot_field.c_str(),
                  detail::format_implied_exponent(t.nddot).c_str(), detail::format_implied_exponent(t.bstar).c_str(),
                  t.ephemeris_type, t.element_set_number);

    char ecc[16];
    std::snprintf(ecc, sizeof ecc, "%07ld", std::lround(t.eccentricity * 1e7));
    char l2[80];
    std::snprintf(l2, sizeof l2, "2 %05d %8.4f %8.4f %s %8.4f %8.4f %11.8f%5d", t.catalog_number, t.inclination_deg,
                  t.raan_deg, ecc, t.arg_perigee_deg, t.mean_anomaly_deg, t.mean_motion_revs_per_day,
                  t.rev_number % 100000);
    return {detail::with_checksum(l1), detail::with_checksum(l2)};
}

/// Parse a text stream of element sets: an optional name line before each line-1/line-2 pair.
inline std::vector<Tle> parse_tle_stream(std::istream& in)
{
    std::vector<Tle> out;
    std::optional<std::string> name;
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& l = lines[i];
        if (l.size() >= 2 && l[0] == '1' && l[1] == ' ') {
            if (i + 1 >= lines.size())
                throw Error(ErrorCode::MalformedField, "line 1 at file line " + std::to_string(i + 1) +
                                                           " has no following line 2");
            std::string_view nm = name ? std::string_view(*name) : std::string_view{};
            if (nm.size() >= 2 && nm[0] == '0' && nm[1] == ' ') nm.remove_prefix(2);
            out.push_back(parse_tle(l, lines[i + 1], nm));
            name.reset();
            ++i;
        } else if (detail::rtrim(l).empty() && !name) {
            name = std::string{};
        } else {
            if (name && !name->empty())
                throw Error(ErrorCode::MalformedField, "unexpected text at file line " + std::to_string(i + 1));
            name = l;
        }
    }
    return out;
}

inline std::vector<Tle> read_tle_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open TLE file '" + path + "'");
    return parse_tle_stream(in);
}

} // namespace leochan
