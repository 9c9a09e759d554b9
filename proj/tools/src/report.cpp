#include "cosym_cli/report.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "cosym_cli/config.hpp"

namespace cosym::cli {

namespace {

double now() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::invalid_argument, "cannot write " + path.string());
  out << text;
}

}  // namespace

void Report::residual(const std::string& name, double value, double tolerance) {
  residuals.push_back({name, value, tolerance});
}

void Report::criterion(const std::string& name, bool passed, const std::string& detail) {
  criteria.push_back({name, passed, detail});
}

bool Report::passed() const { return failures().empty(); }

std::vector<std::string> Report::failures() const {
  std::vector<std::string> out;
  for (const auto& c : criteria)
    if (!c.passed) out.push_back(c.name);
  for (const auto& r : residuals)
    if (!r.passed()) out.push_back("residual:" + r.name);
  return out;
}

nlohmann::ordered_json Report::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = schema_version;
  j["config"] = echo;
  j["results"] = results;
  auto& res = j["residuals"] = nlohmann::ordered_json::array();
  for (const auto& r : residuals)
    res.push_back({{"name", r.name}, {"value", r.value}, {"tolerance", r.tolerance}, {"passed", r.passed()}});
  auto& conv = j["convergence"] = nlohmann::ordered_json::object();
  conv["fit"] = convergence_fit;
  auto& rows = conv["rows"] = nlohmann::ordered_json::array();
  for (const auto& c : convergence)
    rows.push_back({{"resolution", c.resolution}, {"spacing", c.spacing}, {"error", c.error}});
  auto& crit = j["criteria"] = nlohmann::ordered_json::array();
  for (const auto& c : criteria) crit.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["failures"] = failures();
  j["passed"] = passed();
  return j;
}

nlohmann::ordered_json Report::timings_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [label, seconds] : timings) j[label] = seconds;
  return j;
}

void write_csv(const Series& series, const std::filesystem::path& path) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (std::size_t c = 0; c < series.columns.size(); ++c) out << (c ? "," : "") << series.columns[c];
  out << "\n";
  for (const auto& row : series.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << "\n";
  }
  write_text(path, out.str());
}

void write_report(const Report& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "report.json", report.to_json().dump(2) + "\n");
  write_text(dir / "timings.json", report.timings_json().dump(2) + "\n");
  for (const auto& [name, s] : report.series) write_csv(s, dir / (name + ".csv"));
}

Stopwatch::Stopwatch(Report& report, std::string label)
    : report_(report), label_(std::move(label)), start_(now()) {}

Stopwatch::~Stopwatch() {
  const double dt = now() - start_;
  auto it = std::find_if(report_.timings.begin(), report_.timings.end(),
                         [&](const auto& t) { return t.first == label_; });
  if (it == report_.timings.end())
    report_.timings.emplace_back(label_, dt);
  else
    it->second += dt;
}

}  // namespace cosym::cli
