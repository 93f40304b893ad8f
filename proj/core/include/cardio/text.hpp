#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cardio::text {

/// Shortest decimal text that parses back to exactly `v` ("72", "129.5").
std::string decimal(double v);

/// Full-string decimal parse; nullopt on junk, empty input or trailing text.
std::optional<double> parse_decimal(std::string_view s);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char delimiter);

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

/// Round-half-up of num/den to `places` decimals, computed exactly.
std::string rounded_ratio(std::uint64_t num, std::uint64_t den, int places);

}  // namespace cardio::text
