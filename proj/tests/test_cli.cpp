#include <doctest.h>

#include "cli_app.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace chaoskit::cli;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "chaoskit");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return main_entry(static_cast<int>(argv.size()), argv.data());
}

const char* kMixtureSpec = R"({
  "measure": {"kind": "mixture", "weights": [0.3, 0.7],
              "components": [{"kind": "beta01", "alpha": 2.0, "beta": 4.5},
                             {"kind": "beta01", "alpha": 4.0, "beta": 1.5}]},
  "degree": 4
})";

}  // namespace

TEST_CASE("basis subcommand on the beta mixture") {
  write_file("cli_mix.json", kMixtureSpec);
  REQUIRE(invoke({"basis", "--spec", "cli_mix.json", "--out", "cli_basis"}) == 0);
  const auto out = json::parse(slurp("cli_basis.json"));
  const std::vector<std::vector<double>> expected = {{-0.6, 1},
                                                     {0.23, -1.09, 1},
                                                     {-0.08, 0.73, -1.6, 1},
                                                     {0.03, -0.38, 1.47, -2.11, 1}};
  const auto& monic = out.at("monic");
  for (std::size_t k = 1; k <= 4; ++k) {
    for (std::size_t j = 0; j <= k; ++j) {
      CHECK(std::abs(monic.at(k).at(j).get<double>() - expected[k - 1][j]) <= 0.005);
    }
  }
  CHECK(out.at("alpha").size() == 5);
  CHECK(out.at("source") == "multiple_discretization");
  const auto csv = read_csv("cli_basis.csv");
  CHECK(csv.front() == std::vector<std::string>{"factor", "k", "power", "coefficient"});
  CHECK(csv.size() == 1 + 15);
}

TEST_CASE("quad subcommand") {
  write_file("cli_u.json", R"({"measure": {"kind": "uniform01"}})");
  REQUIRE(invoke({"quad", "--spec", "cli_u.json", "--rule", "gauss", "--n", "2", "--out", "cli_q"}) == 0);
  const auto rows = read_csv("cli_q.csv");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"node", "weight"});
  CHECK(std::stod(rows[1][0]) == doctest::Approx(0.5 - 0.5 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(std::stod(rows[2][0]) == doctest::Approx(0.5 + 0.5 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(std::stod(rows[1][1]) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rows[1][0].find("0.2113248654051871") == 0);
  REQUIRE(invoke({"quad", "--spec", "cli_u.json", "--rule", "cc", "--n", "3", "--out", "cli_cc"}) == 0);
  const auto cc = read_csv("cli_cc.csv");
  REQUIRE(cc.size() == 4);
  CHECK(std::stod(cc[2][1]) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(invoke({"quad", "--spec", "cli_u.json", "--rule", "simpson", "--n", "3", "--out", "cli_bad"}) == 2);
}

TEST_CASE("tensor subcommand") {
  write_file("cli_g.json", R"({"measure": {"kind": "gaussian"}, "degree": 4})");
  REQUIRE(invoke({"tensor", "--spec", "cli_g.json", "--order", "3", "--out", "cli_t"}) == 0);
  const auto rows = read_csv("cli_t.csv");
  CHECK(rows[0] == std::vector<std::string>{"k1", "k2", "k3", "value"});
  bool found = false;
  for (const auto& r : rows) {
    if (r[0] == "1" && r[1] == "1" && r[2] == "2") {
      CHECK(std::stod(r[3]) == doctest::Approx(2.0).epsilon(1e-13));
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("overrides") {
  json spec = json::parse(kMixtureSpec);
  apply_override(spec, "degree=2");
  apply_override(spec, "measure.weights=[0.5,0.5]");
  apply_override(spec, "method=lanczos");
  CHECK(spec.at("degree") == 2);
  CHECK(spec.at("measure").at("weights").at(0) == 0.5);
  CHECK(spec.at("method") == "lanczos");
  CHECK_THROWS_AS(apply_override(spec, "novalue"), SpecError);
  const auto basis = basis_from_json(spec);
  CHECK(basis.total_degree() == 2);
}

TEST_CASE("measure schema forms") {
  const auto a = measure_from_json(json::parse(R"({"kind": "beta01", "alpha": 2, "beta": 4.5})"));
  CHECK(a.canonical()->alpha == 2.0);
  const auto b = measure_from_json(json::parse(
      R"({"mixture": [{"weight": 1.0, "measure": {"kind": "uniform01"}}]})"));
  CHECK(b.density(0.3) == 1.0);
  CHECK_THROWS_AS(measure_from_json(json::parse(R"({"alpha": 1})")), SpecError);
  CHECK_THROWS_AS(measure_from_json(json::parse(R"({"kind": "mixture", "weights": [1]})")), SpecError);
}

TEST_CASE("error exits") {
  write_file("cli_broken.json", "{\n  \"measure\": {\"kind\": \"uniform01\"},\n  oops\n}");
  std::ostringstream err;
  RunConfig cfg;
  cfg.subcommand = "basis";
  cfg.spec_path = "cli_broken.json";
  cfg.out_prefix = "cli_err";
  CHECK(run(cfg, err) == 2);
  CHECK(err.str().find("line 3") != std::string::npos);
  CHECK(invoke({"frobnicate"}) != 0);
  CHECK(invoke({}) == 2);
  write_file("cli_bad_beta.json", R"({"measure": {"kind": "beta01", "alpha": -1, "beta": 2}, "degree": 2})");
  CHECK(invoke({"basis", "--spec", "cli_bad_beta.json", "--out", "cli_err"}) == 1);
}

TEST_CASE("outputs are deterministic for a fixed seed") {
  write_file("cli_prop.json", R"({"total_degree": 2, "mc_samples": 200})");
  REQUIRE(invoke({"propagate", "--spec", "cli_prop.json", "--seed", "5", "--out", "cli_p1"}) == 0);
  REQUIRE(invoke({"propagate", "--spec", "cli_prop.json", "--seed", "5", "--out", "cli_p2"}) == 0);
  CHECK(slurp("cli_p1.csv") == slurp("cli_p2.csv"));
  CHECK(slurp("cli_p1.json") == slurp("cli_p2.json"));
  const auto rows = read_csv("cli_p1.csv");
  CHECK(rows[0] == std::vector<std::string>{"t", "mean_cA", "std_cA", "mean_cB", "std_cB"});

  write_file("cli_ocp.json", R"({"total_degree": 2, "mc_samples": 500})");
  REQUIRE(invoke({"ocp", "--spec", "cli_ocp.json", "--out", "cli_o1"}) == 0);
  REQUIRE(invoke({"ocp", "--spec", "cli_ocp.json", "--out", "cli_o2"}) == 0);
  CHECK(slurp("cli_o1.csv") == slurp("cli_o2.csv"));
  const auto summary = json::parse(slurp("cli_o1.json"));
  CHECK(summary.at("seed") == kDefaultSeed);
  CHECK(summary.contains("violation_rate"));
  CHECK(summary.contains("objective"));
}

TEST_CASE("bench smoke run") {
  write_file("cli_bench.json", R"({"repetitions": 2})");
  REQUIRE(invoke({"bench", "--spec", "cli_bench.json", "--out", "cli_b"}) == 0);
  const auto rows = read_csv("cli_b.csv");
  CHECK(rows.size() == 1 + 9);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double t = std::stod(rows[i][2]);
    CHECK(std::isfinite(t));
    CHECK(t > 0.0);
  }
}

TEST_CASE("format_real round trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 12345.678}) CHECK(std::stod(format_real(v)) == v);
}
