#include "pppo/text_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>

#include "pppo/errors.hpp"

namespace pppo::io {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_csv(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      break;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

bool parse_kv_line(const std::string& line, std::string& key, std::string& value) {
  const std::string t = trim(line);
  if (t.empty() || t[0] == '#') return false;
  const auto eq = t.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("malformed line (expected 'key = value'): " + t);
  }
  key = trim(std::string_view(t).substr(0, eq));
  value = trim(std::string_view(t).substr(eq + 1));
  if (key.empty()) throw ConfigError("malformed line (empty key): " + t);
  return true;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw ConfigError("not a number: '" + s + "'");
  return v;
}

long parse_long(const std::string& s) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') throw ConfigError("not an integer: '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError("not a boolean (use true/false): '" + s + "'");
}

KvPairs read_kv_stream(std::istream& is) {
  KvPairs out;
  std::string line, key, value;
  while (std::getline(is, line)) {
    if (parse_kv_line(line, key, value)) out.emplace_back(key, value);
  }
  return out;
}

void write_kv_stream(std::ostream& os, const KvPairs& pairs) {
  for (const auto& [k, v] : pairs) os << k << " = " << v << '\n';
}

}  // namespace pppo::io
