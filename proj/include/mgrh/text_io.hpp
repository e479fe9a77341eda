// Copyright 2026 The mgrh Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Small readers and writers for the flat files: comma-separated tables with
// a fixed header and line-oriented key = value files. Errors carry the file
// name and the 1-based line number.

#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace mgrh::io {

class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& file, int line, const std::string& what)
      : std::runtime_error(file + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what),
        file_(file),
        line_(line) {}
  [[nodiscard]] const std::string& file() const { return file_; }
  [[nodiscard]] int line() const { return line_; }

 private:
  std::string file_;
  int line_;
};

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(std::string_view line, char sep = ',') {
  std::vector<std::string> out;
  size_t pos = 0;
  while (true) {
    const size_t next = line.find(sep, pos);
    out.emplace_back(trim(line.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

// Shortest text that parses back to the same double.
inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string format_fixed(double v, int decimals) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  std::string s(buf, res.ptr);
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);  // no "-0.000"
  return s;
}

struct Row {
  int line = 0;
  std::vector<std::string> fields;
};

class Table {
 public:
  Table(std::string file, std::vector<Row> rows) : file_(std::move(file)), rows_(std::move(rows)) {}

  [[nodiscard]] const std::vector<Row>& rows() const { return rows_; }
  [[nodiscard]] const std::string& file() const { return file_; }

  [[nodiscard]] double number(const Row& r, size_t col) const {
    const std::string& f = r.fields[col];
    double v = 0.0;
    const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
    if (f.empty() || res.ec != std::errc() || res.ptr != f.data() + f.size()) {
      throw FormatError(file_, r.line, "'" + f + "' is not a number");
    }
    return v;
  }

  [[nodiscard]] int integer(const Row& r, size_t col) const {
    const std::string& f = r.fields[col];
    int v = 0;
    const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
    if (f.empty() || res.ec != std::errc() || res.ptr != f.data() + f.size()) {
      throw FormatError(file_, r.line, "'" + f + "' is not an integer");
    }
    return v;
  }

  [[noreturn]] void fail(const Row& r, const std::string& what) const { throw FormatError(file_, r.line, what); }

 private:
  std::string file_;
  std::vector<Row> rows_;
};

// Reads a table whose first non-comment line must equal `header`. Blank
// lines and lines starting with '#' are skipped.
inline Table read_table(const std::string& path, const std::vector<std::string>& header) {
  std::ifstream in(path);
  if (!in) throw FormatError(path, 0, "cannot open file");
  std::vector<Row> rows;
  std::string line;
  int no = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto fields = split(t);
    if (!seen_header) {
      if (fields != header) {
        std::string want;
        for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
        throw FormatError(path, no, "expected header '" + want + "'");
      }
      seen_header = true;
      continue;
    }
    if (fields.size() != header.size()) {
      throw FormatError(path, no,
                        "expected " + std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
    }
    rows.push_back({no, std::move(fields)});
  }
  if (!seen_header) throw FormatError(path, 0, "missing header");
  return Table(path, std::move(rows));
}

struct KeyValue {
  std::string value;
  int line = 0;
};

// key = value lines; '#' starts a comment. Keys must be unique.
inline std::map<std::string, KeyValue> read_key_values(std::istream& in, const std::string& name) {
  std::map<std::string, KeyValue> out;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    std::string_view t = line;
    if (const auto hash = t.find('#'); hash != std::string_view::npos) t = t.substr(0, hash);
    t = trim(t);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) throw FormatError(name, no, "expected 'key = value'");
    const std::string key(trim(t.substr(0, eq)));
    if (key.empty()) throw FormatError(name, no, "empty key");
    if (!out.emplace(key, KeyValue{std::string(trim(t.substr(eq + 1))), no}).second) {
      throw FormatError(name, no, "duplicate key '" + key + "'");
    }
  }
  return out;
}

inline std::map<std::string, KeyValue> read_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path, 0, "cannot open file");
  return read_key_values(in, path);
}

// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 14695981039346656037ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<size_t>(i)] = digits[v & 0xfu];
  return s;
}

}  // namespace mgrh::io
