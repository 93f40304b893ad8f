#include "cardio/text.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace cardio::text {

std::string decimal(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_decimal(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char delimiter) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(delimiter, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t state) {
  for (unsigned char c : bytes) {
    state ^= c;
    state *= 0x100000001b3ULL;
  }
  return state;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

__extension__ typedef unsigned __int128 u128;

std::string rounded_ratio(std::uint64_t num, std::uint64_t den, int places) {
  if (den == 0) throw std::invalid_argument("rounded_ratio: zero denominator");
  u128 scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  // floor(num * scale / den + 1/2)
  u128 scaled = (2 * static_cast<u128>(num) * scale + den) /
                             (2 * static_cast<u128>(den));
  auto whole = static_cast<unsigned long long>(scaled / scale);
  auto frac = static_cast<unsigned long long>(scaled % scale);
  std::string out = std::to_string(whole);
  if (places > 0) {
    std::string f = std::to_string(frac);
    out += '.';
    out += std::string(static_cast<std::size_t>(places) - f.size(), '0');
    out += f;
  }
  return out;
}

}  // namespace cardio::text
