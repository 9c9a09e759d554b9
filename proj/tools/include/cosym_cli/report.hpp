#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace cosym::cli {

struct ResidualRow {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed() const { return value <= tolerance; }
};

struct CriterionResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ConvergenceRow {
  int resolution = 0;
  double spacing = 0.0;
  double error = 0.0;
};

// Plot-ready table written as CSV.
struct Series {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Report {
  nlohmann::ordered_json echo;
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  std::vector<ResidualRow> residuals;
  std::vector<ConvergenceRow> convergence;
  nlohmann::ordered_json convergence_fit = nlohmann::ordered_json::object();
  std::vector<CriterionResult> criteria;
  std::vector<std::pair<std::string, double>> timings;  // seconds, kept out of report.json
  std::map<std::string, Series> series;

  void residual(const std::string& name, double value, double tolerance);
  void criterion(const std::string& name, bool passed, const std::string& detail);

  bool passed() const;
  // Names of failed criteria, then failed residuals as "residual:<name>".
  std::vector<std::string> failures() const;

  // Deterministic for a fixed config and seed.
  nlohmann::ordered_json to_json() const;
  nlohmann::ordered_json timings_json() const;
};

// Writes report.json, timings.json and one <name>.csv per series.
void write_report(const Report& report, const std::filesystem::path& dir);
void write_csv(const Series& series, const std::filesystem::path& path);

// Accumulates wall-clock time into report.timings when it goes out of scope.
class Stopwatch {
public:
  Stopwatch(Report& report, std::string label);
  ~Stopwatch();
  Stopwatch(const Stopwatch&) = delete;
  Stopwatch& operator=(const Stopwatch&) = delete;

private:
  Report& report_;
  std::string label_;
  double start_;
};

}  // namespace cosym::cli
