#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace varjack {

inline constexpr const char* kVersion = "0.1.0";

// 17 significant digits round-trips every double exactly.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// RFC 4180 field quoting.
inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) {
    if (row.size() != header.size())
      throw std::invalid_argument("csv row width mismatch");
    rows.push_back(std::move(row));
  }

  void write(std::ostream& os) const {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ',';
        os << csv_escape(cells[i]);
      }
      os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
  }
};

struct ExperimentManifest {
  std::string subcommand;
  nlohmann::json config = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::string version = kVersion;
  std::string timestamp;  // excluded from reproducibility comparisons

  static std::string now_utc() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
  }

  nlohmann::json to_json() const {
    return nlohmann::json{{"subcommand", subcommand},
                          {"config", config},
                          {"seed", seed},
                          {"version", version},
                          {"timestamp", timestamp}};
  }
};

// Full experiment output: manifest + one JSON object per result row.
inline nlohmann::json experiment_json(const ExperimentManifest& manifest,
                                      nlohmann::json rows) {
  return nlohmann::json{{"manifest", manifest.to_json()},
                        {"rows", std::move(rows)}};
}

inline std::uint64_t default_seed() {
  if (const char* env = std::getenv("VARJACK_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return static_cast<std::uint64_t>(v);
    throw std::invalid_argument("VARJACK_SEED is not an integer");
  }
  return 1;
}

inline nlohmann::json load_json_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

}  // namespace varjack
