#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "abphase/cli/runner.hpp"
#include "abphase/cli/scenario.hpp"

using namespace abphase;
using namespace abphase::cli;
namespace fs = std::filesystem;

namespace {

const char* kBase = R"({
  "solenoid": {"radius": 1.0, "flux": 2.0},
  "model": "ideal_infinite",
  "paths": {"loop": {"type": "circle", "radius": 3.0}},
  "commands": [{"op": "closed_loop_phase", "path": "loop"}]
})";

json base() { return json::parse(kBase); }

Scenario parse(const json& j) { return parse_scenario(j.dump()); }

std::string schema_where(const json& j) {
  try {
    parse(j);
  } catch (const SchemaError& e) {
    return e.where();
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("abphase_test_" + name);
  fs::remove_all(p);
  return p;
}

RunOutcome run_quiet(const Scenario& sc, RunOptions o) {
  std::ostringstream log;
  return run_scenario(sc, o, log);
}

}  // namespace

TEST(Scenario, MinimalParses) {
  const Scenario sc = parse(base());
  EXPECT_FALSE(sc.solenoid.is_finite());
  EXPECT_EQ(sc.commands.size(), 1u);
  EXPECT_EQ(sc.commands[0].id, "cmd0");
  EXPECT_EQ(sc.paths.at("loop").segment_count(), 64u);
}

TEST(Scenario, UnknownFieldsRejectedEverywhere) {
  auto j = base();
  j["colour"] = "blue";
  EXPECT_EQ(schema_where(j), "$.colour");
  j = base();
  j["solenoid"]["length"] = 3;
  EXPECT_EQ(schema_where(j), "$.solenoid.length");
  j = base();
  j["paths"]["loop"]["radus"] = 3;
  EXPECT_EQ(schema_where(j), "$.paths.loop.radus");
  j = base();
  j["commands"][0]["tolerance"] = 1;
  EXPECT_EQ(schema_where(j), "$.commands[0].tolerance");
}

TEST(Scenario, MissingAndMistypedFields) {
  auto j = base();
  j["solenoid"].erase("flux");
  EXPECT_EQ(schema_where(j), "$.solenoid.flux");
  j = base();
  j["solenoid"]["radius"] = "one";
  EXPECT_EQ(schema_where(j), "$.solenoid.radius");
  j = base();
  j["solenoid"]["radius"] = -1.0;
  EXPECT_EQ(schema_where(j), "$.solenoid");
  j = base();
  j["model"] = "dipole";
  EXPECT_EQ(schema_where(j), "$.model");
}

TEST(Scenario, ReferencesChecked) {
  auto j = base();
  j["commands"][0]["path"] = "nowhere";
  EXPECT_EQ(schema_where(j), "$.commands[0].path");
  j = base();
  j["commands"].push_back(j["commands"][0]);
  j["commands"][0]["id"] = "x";
  j["commands"][1]["id"] = "x";
  EXPECT_EQ(schema_where(j), "$.commands[1].id");
  j = base();
  j["commands"][0]["expect"] = {{"field", "energy"}, {"value", 1.0}, {"rel_tol", 1e-3}};
  EXPECT_EQ(schema_where(j), "$.commands[0].expect.field");
  j = base();
  j["commands"] = json::array({{{"op", "energies"}}});
  EXPECT_EQ(schema_where(j), "$.commands[0]");
}

TEST(Scenario, QuadratureModelsNeedFiniteLength) {
  auto j = base();
  j["model"] = "biot_savart";
  EXPECT_EQ(schema_where(j), "$.model");
  j["solenoid"]["half_length"] = 5.0;
  EXPECT_NO_THROW(parse(j));
}

TEST(Scenario, SyntaxErrorHasLocation) {
  try {
    parse_scenario("{\"solenoid\": {\"radius\": 1,}", "broken.json");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_NE(e.where().find("broken.json (byte"), std::string::npos);
  }
}

TEST(Scenario, GaugeAndPathGenerators) {
  auto j = base();
  j["gauge"] = {{"kind", "regular"}, {"type", "bump"},
                {"params", {{"center", {2, 0, 0}}, {"width", 1.0}, {"amplitude", 0.5}}}};
  j["paths"]["w"] = {{"type", "wedge_pair"}, {"radius", 2.0}, {"theta", 1.0}};
  j["paths"]["only_b"] = {{"type", "wedge_pair"}, {"radius", 2.0}, {"theta", 1.0}, {"branch", "b"}};
  j["paths"]["poly"] = {{"type", "polyline"}, {"vertices", {{2, 0}, {0, 2}, {2, 0}}}, {"closed", true}};
  const Scenario sc = parse(j);
  EXPECT_EQ(sc.gauge.kind(), em::GaugeKind::regular);
  EXPECT_EQ(sc.paths.count("w.a"), 1u);
  EXPECT_EQ(sc.paths.count("w.b"), 1u);
  EXPECT_EQ(sc.paths.at("only_b").vertices().size(), 3u);
  EXPECT_TRUE(sc.paths.at("poly").closed());

  j["gauge"]["params"]["height"] = 1.0;
  EXPECT_EQ(schema_where(j), "$.gauge.params.height");
  j["gauge"] = {{"kind", "regular"}, {"type", "cubic"}};
  EXPECT_EQ(schema_where(j), "$.gauge.type");
  j["gauge"] = {{"kind", "none"}};
  j["paths"]["poly"]["closed"] = "yes";
  EXPECT_EQ(schema_where(j), "$.paths.poly.closed");
  j["paths"]["poly"] = {{"type", "polyline"}, {"vertices", {{2, 0}, {0, 2}}}, {"closed", true}};
  EXPECT_EQ(schema_where(j), "$.paths.poly");
}

TEST(Runner, ClosedLoopResultAndExpectation) {
  auto j = base();
  j["commands"][0]["expect"] = {{"value", 2.0}, {"rel_tol", 1e-9}};
  RunOptions o;
  o.out_dir = scratch("closed").string();
  o.seed_free = true;
  const auto out = run_quiet(parse(j), o);
  EXPECT_EQ(out.exit_code, kExitOk);
  const json& rec = out.results["records"][0];
  EXPECT_EQ(rec["status"], "ok");
  EXPECT_NEAR(rec["result"]["phase"].get<double>(), 2.0, 1e-9);
  EXPECT_EQ(rec["result"]["winding_number"], 1);
  EXPECT_TRUE(rec["expect"]["passed"].get<bool>());
  EXPECT_TRUE(fs::exists(out.results_file));
  EXPECT_FALSE(out.results.contains("timestamp"));
  EXPECT_EQ(rec["provenance"], "ideal_infinite+gauge:none");
}

TEST(Runner, FailedExpectationExitsOne) {
  auto j = base();
  j["commands"][0]["expect"] = {{"value", 3.0}, {"rel_tol", 1e-9}};
  RunOptions o;
  o.out_dir = scratch("expect").string();
  const auto out = run_quiet(parse(j), o);
  EXPECT_EQ(out.exit_code, kExitAssertion);
  EXPECT_EQ(out.results["records"][0]["status"], "assertion_failed");
  EXPECT_TRUE(out.results.contains("timestamp"));
}

TEST(Runner, GeometryErrorExitsThreeAndContinues) {
  auto j = base();
  j["gauge"] = {{"kind", "singular"}, {"string_flux", 2.0}};
  j["paths"]["through_axis"] = {{"type", "radial"}, {"phi", 0.0}, {"from", 0.0}, {"to", 2.0}};
  j["commands"] = json::array({{{"op", "phase"}, {"path", "through_axis"}},
                               {{"op", "closed_loop_phase"}, {"path", "loop"}}});
  RunOptions o;
  o.out_dir = scratch("geometry").string();
  const auto out = run_quiet(parse(j), o);
  EXPECT_EQ(out.exit_code, kExitGeometry);
  EXPECT_EQ(out.results["records"][0]["status"], "error");
  EXPECT_EQ(out.results["records"][0]["error"]["class"], "geometry");
  EXPECT_EQ(out.results["records"][1]["status"], "ok");
}

TEST(Runner, NonConvergenceExitsFour) {
  auto j = base();
  j["model"] = "finite_elliptic";
  j["solenoid"]["half_length"] = 50.0;
  j["quad"] = {{"rel_tol", 1e-15}, {"abs_tol", 0.0}, {"max_subdivisions", 1}};
  RunOptions o;
  o.out_dir = scratch("nonconv").string();
  const auto out = run_quiet(parse(j), o);
  EXPECT_EQ(out.exit_code, kExitNotConverged);
  EXPECT_EQ(out.results["records"][0]["status"], "not_converged");
}

TEST(Runner, TolOverride) {
  RunOptions o;
  o.out_dir = scratch("tol").string();
  o.rel_tol = 1e-5;
  const auto out = run_quiet(parse(base()), o);
  EXPECT_EQ(out.results["quad"]["rel_tol"].get<double>(), 1e-5);
}

TEST(Runner, SeedFreeOutputIsByteIdentical) {
  auto j = base();
  j["solenoid"]["half_length"] = 20.0;
  j["model"] = "finite_elliptic";
  j["commands"].push_back({{"op", "sample_field"},
                           {"grid", {{"type", "line"}, {"from", {0, 0, 0}}, {"to", {3, 0, 0.5}}, {"points", 7}}}});
  const Scenario sc = parse(j);
  RunOptions a, b;
  a.out_dir = scratch("det_a").string();
  b.out_dir = scratch("det_b").string();
  a.seed_free = b.seed_free = true;
  b.threads = 4;
  run_quiet(sc, a);
  run_quiet(sc, b);
  EXPECT_EQ(slurp(fs::path(*a.out_dir) / "results.json"), slurp(fs::path(*b.out_dir) / "results.json"));
  EXPECT_EQ(slurp(fs::path(*a.out_dir) / "cmd1.csv"), slurp(fs::path(*b.out_dir) / "cmd1.csv"));
}

TEST(Runner, SampleFieldFlagsExcludedRows) {
  auto j = base();
  j["commands"] = json::array({{{"op", "sample_field"},
                                {"file", "pts.csv"},
                                {"grid", {{"type", "points"}, {"points", {{1, 0, 0}, {2, 0, 0}}}}}}});
  RunOptions o;
  o.out_dir = scratch("sample").string();
  const auto out = run_quiet(parse(j), o);
  EXPECT_EQ(out.results["records"][0]["result"]["excluded_rows"], 1);
  const std::string csv = slurp(fs::path(*o.out_dir) / "pts.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "x,y,z,A_x,A_y,A_z,B_x,B_y,B_z,status");
  // rho = R: A is continuous but B is not, so only the B columns are left blank
  EXPECT_NE(csv.find("1,0,0,0,0.31830988618379069,0,,,,\"excluded_b:"), std::string::npos);
}

TEST(Runner, ZeroFluxGivesZeroColumns) {
  auto j = base();
  j["solenoid"]["flux"] = 0.0;
  j["commands"] = json::array({{{"op", "sample_field"},
                                {"file", "zero.csv"},
                                {"grid", {{"type", "line"}, {"from", {0.5, 0, 0}}, {"to", {5, 0, 0}}, {"points", 4}}}}});
  RunOptions o;
  o.out_dir = scratch("zero").string();
  run_quiet(parse(j), o);
  std::istringstream in(slurp(fs::path(*o.out_dir) / "zero.csv"));
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::stringstream ls(line);
    std::string cell;
    for (int col = 0; col < 9 && std::getline(ls, cell, ','); ++col) {
      if (col >= 3) {
        EXPECT_EQ(std::stod(cell), 0.0) << line;
      }
    }
  }
  EXPECT_EQ(rows, 4);
}

TEST(Runner, BundledScenariosParse) {
  for (const char* f : {"closed_loop.json", "endpoint_mismatch.json", "wedge.json", "energies.json",
                        "singular_gauge.json"}) {
    EXPECT_NO_THROW(load_scenario(std::string(ABPHASE_SCENARIO_DIR) + "/" + f)) << f;
  }
}
