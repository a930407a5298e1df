#include "gcm/util.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gcm/errors.hpp"

namespace gcm {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write file: " + path.string());
  out << content;
  if (!out) throw ValidationError("write failed: " + path.string());
}

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::vector<KeyValue> parse_key_value_text(const std::string& text) {
  std::vector<KeyValue> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", lineno);
    KeyValue kv;
    kv.key = trim(t.substr(0, eq));
    kv.value = trim(t.substr(eq + 1));
    kv.line = lineno;
    if (kv.key.empty()) throw ParseError("empty key", lineno);
    out.push_back(std::move(kv));
  }
  return out;
}

double parse_double(const std::string& token) {
  if (token.empty()) throw ValidationError("malformed number: empty token");
  size_t pos = 0;
  double v;
  try {
    v = std::stod(token, &pos);
  } catch (const std::exception&) {
    throw ValidationError("malformed number: '" + token + "'");
  }
  if (pos != token.size()) throw ValidationError("malformed number: '" + token + "'");
  return v;
}

double parse_si_value(const std::string& token) {
  if (token.empty()) throw ValidationError("malformed number: empty token");
  size_t pos = 0;
  double v;
  try {
    v = std::stod(token, &pos);
  } catch (const std::exception&) {
    throw ValidationError("malformed number: '" + token + "'");
  }
  std::string suffix = to_lower(token.substr(pos));
  if (suffix.empty()) return v;
  if (suffix == "f") return v * 1e-15;
  if (suffix == "p") return v * 1e-12;
  if (suffix == "n") return v * 1e-9;
  if (suffix == "u") return v * 1e-6;
  if (suffix == "m") return v * 1e-3;
  if (suffix == "k") return v * 1e3;
  if (suffix == "meg") return v * 1e6;
  throw ValidationError("malformed number: '" + token + "' (unknown suffix '" + suffix + "')");
}

std::vector<double> parse_range(const std::string& text) {
  auto c1 = text.find(':');
  if (c1 == std::string::npos) return {parse_double(trim(text))};
  auto c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos)
    throw ValidationError("range must be start:stop:step, got '" + text + "'");
  double start = parse_double(trim(text.substr(0, c1)));
  double stop = parse_double(trim(text.substr(c1 + 1, c2 - c1 - 1)));
  double step = parse_double(trim(text.substr(c2 + 1)));
  if (!(step > 0.0)) throw ValidationError("range step must be > 0 in '" + text + "'");
  if (stop < start - 1e-9) throw ValidationError("range stop < start in '" + text + "'");
  std::vector<double> out;
  for (int i = 0;; ++i) {
    double v = start + i * step;
    if (v > stop + 1e-9) break;
    out.push_back(v);
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t config_digest(std::string_view config_text) {
  std::istringstream in{std::string(config_text)};
  std::string line, normalized;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    normalized += t;
    normalized += '\n';
  }
  return fnv1a64(normalized);
}

std::string digest_hex(std::uint64_t digest) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
  return buf;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ValidationError("pearson: need two equally sized series of length >= 2");
  const size_t n = x.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0)
    throw ValidationError("pearson: zero-variance series");
  return sxy / std::sqrt(sxx * syy);
}

Moments moments(const std::vector<double>& x) {
  Moments m;
  if (x.empty()) return m;
  const double n = static_cast<double>(x.size());
  for (double v : x) m.mean += v;
  m.mean /= n;
  for (double v : x) {
    const double d = v - m.mean;
    m.m2 += d * d;
    m.m3 += d * d * d;
  }
  m.m2 /= n;
  m.m3 /= n;
  return m;
}

}  // namespace gcm
