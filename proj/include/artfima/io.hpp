#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "artfima/errors.hpp"
#include "artfima/stats.hpp"

#ifndef ARTFIMA_VERSION
#define ARTFIMA_VERSION "0.0.0"
#endif

namespace artfima::io {

inline constexpr const char* tool_version = ARTFIMA_VERSION;

/// Shortest decimal form that reads back to the same double (at most 17 significant digits).
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  if (r.ec != std::errc()) throw error("format_double: conversion failed");
  return std::string(buf, r.ptr);
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw invalid_parameter("not a number: '" + s + "'");
  return v;
}

/// RFC 4180 field: quoted when it contains a comma, quote, CR or LF.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> row) {
    if (row.size() != header_.size()) throw error("csv: row width does not match the header");
    rows_.push_back(std::move(row));
  }

  template <class... T>
  void add(const T&... v) {
    add_row({cell(v)...});
  }

  std::size_t rows() const { return rows_.size(); }

  std::string str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) out += ',';
        out += csv_field(r[i]);
      }
      out += "\r\n";
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
  }

 private:
  static std::string cell(double v) { return format_double(v); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  template <class I>
  static std::string cell(I v)
    requires std::is_integral_v<I>
  {
    return std::to_string(v);
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Flat configuration: ordered key -> canonical value string.
using Config = std::map<std::string, std::string>;

inline std::string config_to_text(const Config& c) {
  std::string out;
  for (const auto& [k, v] : c) out += k + " = " + v + "\n";
  return out;
}

/// Parses `key = value` lines; blank lines and lines starting with '#' or ';' are skipped.
inline Config config_from_text(const std::string& text) {
  Config c;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw invalid_parameter("config line " + std::to_string(lineno) + ": expected key = value");
    c[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return c;
}

inline std::string config_hash(const Config& c) {
  std::string s;
  for (const auto& [k, v] : c) s += k + "=" + v + "\n";
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(s)));
  return buf;
}

inline nlohmann::ordered_json summary_json(const McSummary& s) {
  nlohmann::ordered_json j;
  j["replicates"] = s.replicates;
  j["seed"] = s.seed;
  j["first_stream"] = s.first_stream;
  auto& q = j["quantiles"] = nlohmann::ordered_json::object();
  for (const auto& [p, v] : s.quantiles) q[format_double(p)] = v;
  j["ks"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : s.ks) j["ks"][k] = v;
  j["extra"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : s.extra) j["extra"][k] = v;
  return j;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw error("write to '" + path + "' failed");
}

/// Sidecar metadata written next to an output file as <path>.json.
inline nlohmann::ordered_json sidecar(const std::string& subcommand, const Config& c) {
  nlohmann::ordered_json j;
  j["tool"] = "artfima";
  j["version"] = tool_version;
  j["subcommand"] = subcommand;
  j["config_hash"] = config_hash(c);
  j["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : c) j["config"][k] = v;
  return j;
}

}  // namespace artfima::io
