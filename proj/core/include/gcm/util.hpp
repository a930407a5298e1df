#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace gcm {

// Shortest-exact double formatting used in every output file, so that
// re-running with identical inputs reproduces identical bytes.
std::string format_g17(double v);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

// "key = value" files with '#' comments. Returned in file order.
struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
};
std::vector<KeyValue> parse_key_value_text(const std::string& text);

// Strict double parse: the whole token must be consumed.
double parse_double(const std::string& token);

// Double with an optional SI suffix: f p n u m k meg (case-insensitive).
double parse_si_value(const std::string& token);

// "start:stop:step" inclusive of stop when it lands within 1e-9;
// a bare number yields a single value.
std::vector<double> parse_range(const std::string& text);

// FNV-1a 64-bit, plus the normalized-config digest built on it
// (comments stripped, lines trimmed, blank lines dropped).
std::uint64_t fnv1a64(std::string_view data);
std::uint64_t config_digest(std::string_view config_text);
std::string digest_hex(std::uint64_t digest);

double pearson(const std::vector<double>& x, const std::vector<double>& y);

// Population moments: mean, m2, m3. Skewness g1 = m3 / m2^(3/2).
struct Moments {
  double mean = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
};
Moments moments(const std::vector<double>& x);

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

}  // namespace gcm
