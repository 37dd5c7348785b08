#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pppo::io {

// %.17g: shortest form guaranteed to round-trip a double exactly.
std::string format_full(double v);
// %.12g: the CSV precision (12 significant digits).
std::string format_csv(double v);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

// Parses "key = value"; returns false for blank / comment ('#') lines,
// throws ConfigError when the line is malformed.
bool parse_kv_line(const std::string& line, std::string& key, std::string& value);

double parse_double(const std::string& s);
long parse_long(const std::string& s);
bool parse_bool(const std::string& s);

// Ordered key/value text file (the config, manifest and checkpoint carrier).
using KvPairs = std::vector<std::pair<std::string, std::string>>;
KvPairs read_kv_stream(std::istream& is);
void write_kv_stream(std::ostream& os, const KvPairs& pairs);

}  // namespace pppo::io
