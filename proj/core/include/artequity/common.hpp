#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace artequity {

// Exit-code semantics: usage errors map to 1, data errors to 2,
// numerical failures to 3 (see pipeline::run_cli).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Gender { man, woman, unknown };

std::string_view to_string(Gender g);
std::optional<Gender> gender_from_string(std::string_view s);

// Calendar date at day resolution. Validated on parse; ordering is
// lexicographic on (year, month, day).
struct Date {
    int year = 0;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    static bool is_valid(int y, int m, int d);
    // Parses strict ISO-8601 YYYY-MM-DD. Rejects invalid calendar dates.
    static std::optional<Date> parse_iso(std::string_view s);
    std::string to_iso() const;
};

// FNV-1a, used for config digests and artifact-bundle fingerprints.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string to_hex(std::uint64_t v);

// Shortest-ish deterministic formatting for CSV artifacts ("%.12g").
std::string format_double(double v);
// "0.437" -> "43.7%", "0.2358" -> "23.58%": percent with trailing zeros trimmed.
std::string format_percent(double fraction, int decimals = 2);

std::string trim(std::string_view s);

} // namespace artequity
