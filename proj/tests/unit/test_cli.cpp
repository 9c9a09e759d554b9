#include "helpers.hpp"

#include <filesystem>

#include "cosym_cli/experiments.hpp"

using namespace cosym;
using namespace cosym::cli;
using nlohmann::json;

namespace {

std::vector<std::string> violations_of(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.violations();
  }
  return {};
}

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
  return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("empty config takes the defaults") {
    const ExperimentConfig c = parse_config(json::object());
    CHECK(c.experiment == "verify");
    CHECK(c.model.kind == "hyperbolic");
    CHECK(c.grid.n_torus == 32);
    CHECK(c.deformation_seed() == c.seed);
  }

  TEST_CASE("every violation is listed") {
    const json j = {{"experiment", "optimise"},
                    {"colour", "red"},
                    {"grid", {{"n_torus", 0}, {"spacing", 1}}},
                    {"optimizer", {{"steps", "many"}}},
                    {"matrix", {1, 2, 3}}};
    const auto v = violations_of(j);
    CHECK(v.size() == 6);
    CHECK(mentions(v, "colour is not a recognised key"));
    CHECK(mentions(v, "grid.spacing is not a recognised key"));
    CHECK(mentions(v, "optimizer.steps must be an integer"));
    CHECK(mentions(v, "matrix must be 4 integers"));
    CHECK(mentions(v, "experiment must be one of"));
    CHECK(mentions(v, "grid.n_torus must be at least 1"));
  }

  TEST_CASE("model and grid mismatches are rejected") {
    CHECK(mentions(violations_of({{"model", "flat_cokahler"}, {"grid", {{"monodromy", {2, 1, 1, 1}}}}}),
                   "grid.monodromy does not match"));
    CHECK(mentions(violations_of({{"experiment", "optimize"}, {"model", "sol"}}), "optimize needs the hyperbolic"));
    CHECK(mentions(violations_of({{"matrix", {1, 1, 0, 1}}}), "|trace| > 2"));
    CHECK(mentions(violations_of({{"matrix", {2, 1, 1, 2}}}), "determinant 1"));
    CHECK(mentions(violations_of({{"schema_version", 2}}), "schema_version 2"));
  }

  TEST_CASE("echo round trips") {
    const json j = {{"experiment", "gap_identity"}, {"seed", 5}, {"deformation", {{"amplitude", 0.2}}}};
    const ExperimentConfig c = parse_config(j);
    const ExperimentConfig d = parse_config(json::parse(to_json(c).dump()));
    CHECK(to_json(c).dump() == to_json(d).dump());
    CHECK(d.deformation.amplitude == 0.2);
    CHECK(d.deformation_seed() == 5);
  }

  TEST_CASE("betti report") {
    ExperimentConfig c = parse_config({{"experiment", "betti"}, {"matrix", {1, 1, 0, 1}}});
    const Report r = run(c);
    CHECK(r.results["betti"] == json::array({1, 2, 2, 1}));
    CHECK(r.passed());
  }

  TEST_CASE("flat energy is exactly zero") {
    const Report r = run(parse_config({{"experiment", "energy"}, {"model", "flat_cokahler"}, {"grid", {{"n_torus", 8}, {"n_fiber", 8}}}}));
    CHECK(r.results["energy"].get<double>() == 0.0);
    CHECK(r.passed());
  }

  TEST_CASE("verify on the cat map passes and is deterministic") {
    const ExperimentConfig c = parse_config(json::object());
    const Report a = run(c), b = run(c);
    CHECK(a.passed());
    CHECK(a.to_json().dump() == b.to_json().dump());
    CHECK(a.residuals.size() > 10);
  }

  TEST_CASE("a coarse grid misses the energy criterion and says so") {
    const Report r = run(parse_config({{"grid", {{"n_torus", 16}, {"n_fiber", 16}}}}));
    CHECK_FALSE(r.passed());
    const auto f = r.failures();
    CHECK(std::find(f.begin(), f.end(), "energy_closed_form") != f.end());
    CHECK(r.to_json()["failures"] == json(f));
  }

  TEST_CASE("verify on the Sol box") {
    const Report r = run(parse_config({{"model", "sol"}, {"mu", 0.5}, {"grid", {{"n_torus", 16}, {"n_fiber", 16}}}}));
    CHECK(r.passed());
  }

  TEST_CASE("order fit") {
    std::vector<ConvergenceRow> rows;
    for (int n : {16, 32, 64}) rows.push_back({n, 1.0 / n, 3.0 * std::pow(1.0 / n, 4)});
    OrderFit f = fit_order(rows, 1e-14);
    CHECK(f.order == doctest::Approx(4.0));
    CHECK(f.monotone);
    CHECK_FALSE(f.exact);
    for (auto& r : rows) r.error = 1e-15;
    CHECK(fit_order(rows, 1e-10).exact);
    rows[0].error = 1e-3;
    rows[1].error = 1e-2;
    rows[2].error = 1e-4;
    CHECK_FALSE(fit_order(rows, 1e-10).monotone);
  }

  TEST_CASE("sweep needs three increasing resolutions") {
    const ExperimentConfig c = parse_config(json::object());
    CHECK_THROWS_AS(convergence_sweep(c, {16, 32}), ConfigError);
    CHECK_THROWS_AS(convergence_sweep(c, {32, 16, 64}), ConfigError);
  }

  TEST_CASE("sweep of an exact quantity sits at the floor") {
    ExperimentConfig c = parse_config({{"sweep", {{"quantity", "lyapunov_error"}}}});
    const Report r = convergence_sweep(c, {8, 12, 16});
    CHECK(r.passed());
    CHECK(r.convergence_fit["exact"].get<bool>());
  }

  TEST_CASE("reports land on disk") {
    const auto dir = std::filesystem::temp_directory_path() / "cosym_cli_test";
    std::filesystem::remove_all(dir);
    Report r;
    r.echo = to_json(ExperimentConfig{});
    r.series["s"] = Series{{"a", "b"}, {{1.0, 2.0}}};
    r.criterion("x", false, "failed on purpose");
    write_report(r, dir);
    CHECK(std::filesystem::exists(dir / "report.json"));
    CHECK(std::filesystem::exists(dir / "timings.json"));
    CHECK(std::filesystem::exists(dir / "s.csv"));
    CHECK(r.failures() == std::vector<std::string>{"x"});
    std::filesystem::remove_all(dir);
  }
}
