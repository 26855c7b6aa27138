// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "icbeam/experiment.hpp"

namespace icbeam {

/// FNV-1a 64-bit digest of a byte string, hex-encoded. Regression
/// fingerprint, not a cryptographic hash.
inline std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  char out[17];
  static const char* hex = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    out[i] = hex[h & 0xf];
    h >>= 4;
  }
  out[16] = '\0';
  return std::string(out);
}

/// Checked-in regression point: an experiment config, the CSV it produced,
/// digests of both, and a per-column tolerance policy. Columns without an
/// entry compare exactly (the reduction order is fixed by trial index, so
/// exact is the default); a column mapped to a relative tolerance is
/// compared numerically instead.
struct GoldenRecord {
  std::string name;
  std::string config_path;
  std::string expected_csv_path;
  std::string config_digest;
  std::string expected_csv_digest;
  std::map<std::string, double> column_tolerances;
};

struct GoldenReport {
  std::string name;
  bool passed = false;
  std::string error;  // set when verification could not run at all
  std::vector<std::string> failures;

  std::string summary() const {
    if (!error.empty()) return name + ": ERROR " + error;
    return name + (passed ? ": PASS" : ": FAIL (" + std::to_string(failures.size()) +
                                           " mismatches)");
  }
};

inline GoldenRecord golden_record_from_json(const Json& j) {
  GoldenRecord r;
  try {
    r.name = j.value("name", "");
    r.config_path = j.at("config").get<std::string>();
    r.expected_csv_path = j.at("expected_csv").get<std::string>();
    r.config_digest = j.value("config_digest", "");
    r.expected_csv_digest = j.value("expected_csv_digest", "");
    if (j.contains("tolerances")) {
      for (const auto& [column, tol] : j["tolerances"].items()) {
        r.column_tolerances[column] = tol.get<double>();
      }
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("golden record: ") + e.what());
  }
  return r;
}

inline GoldenRecord load_golden_record(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open golden record: " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ConfigError("golden record parse error in " + path + ": " + e.what());
  }
  GoldenRecord r = golden_record_from_json(j);
  if (r.name.empty()) r.name = std::filesystem::path(path).stem().string();
  // Relative paths resolve against the record's own directory.
  const auto base = std::filesystem::path(path).parent_path();
  auto resolve = [&](std::string& p) {
    if (!p.empty() && std::filesystem::path(p).is_relative()) {
      p = (base / p).string();
    }
  };
  resolve(r.config_path);
  resolve(r.expected_csv_path);
  return r;
}

namespace detail {

inline std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline bool numeric_close(const std::string& a, const std::string& b, double rel_tol) {
  char* end_a = nullptr;
  char* end_b = nullptr;
  const double x = std::strtod(a.c_str(), &end_a);
  const double y = std::strtod(b.c_str(), &end_b);
  if (end_a == a.c_str() || end_b == b.c_str()) return a == b;
  const double scale = std::max({std::abs(x), std::abs(y), 1e-300});
  return std::abs(x - y) <= rel_tol * scale;
}

}  // namespace detail

/// Reruns the recorded experiment and compares against the stored CSV,
/// column by column under the record's tolerance policy. Missing inputs
/// produce an error report, never a crash.
inline GoldenReport verify_golden(const GoldenRecord& record) {
  GoldenReport report;
  report.name = record.name;

  const auto config_text = detail::read_file(record.config_path);
  if (!config_text) {
    report.error = "missing config: " + record.config_path;
    return report;
  }
  if (!record.config_digest.empty() && fnv1a_digest(*config_text) != record.config_digest) {
    report.error = "config digest mismatch for " + record.config_path +
                   " (stored record refers to a different config)";
    return report;
  }
  const auto expected_text = detail::read_file(record.expected_csv_path);
  if (!expected_text) {
    report.error = "missing expected CSV: " + record.expected_csv_path;
    return report;
  }

  std::string actual_text;
  try {
    ExperimentConfig config = experiment_config_from_json(Json::parse(*config_text));
    actual_text = to_csv(run_experiment(config));
  } catch (const std::exception& e) {
    report.error = std::string("rerun failed: ") + e.what();
    return report;
  }

  if (record.column_tolerances.empty() && !record.expected_csv_digest.empty() &&
      fnv1a_digest(actual_text) == record.expected_csv_digest &&
      actual_text == *expected_text) {
    report.passed = true;
    return report;
  }

  const auto expected = parse_csv(*expected_text);
  const auto actual = parse_csv(actual_text);
  if (expected.empty() || actual.empty() || expected[0] != actual[0]) {
    report.failures.push_back("header mismatch");
    return report;
  }
  if (expected.size() != actual.size()) {
    report.failures.push_back("row count mismatch: expected " +
                              std::to_string(expected.size() - 1) + ", got " +
                              std::to_string(actual.size() - 1));
    return report;
  }
  const auto& header = expected[0];
  for (std::size_t row = 1; row < expected.size(); ++row) {
    for (std::size_t col = 0; col < header.size(); ++col) {
      const std::string& want = expected[row][col];
      const std::string& got = actual[row][col];
      const auto tol = record.column_tolerances.find(header[col]);
      const bool ok = tol == record.column_tolerances.end()
                          ? want == got
                          : detail::numeric_close(want, got, tol->second);
      if (!ok) {
        report.failures.push_back("row " + std::to_string(row) + " column " + header[col] +
                                  ": expected " + want + ", got " + got);
      }
    }
  }
  report.passed = report.failures.empty();
  return report;
}

}  // namespace icbeam
