#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "minclique/cli.hpp"
#include "minclique/clique_bounds.hpp"

using namespace minclique;
using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

// First CSV block after the config line, as column -> values.
std::map<std::string, std::vector<std::string>> first_block(const std::string& text, int block = 0) {
  auto lines = split(text, '\n');
  std::size_t i = 1;  // skip "# config"
  for (int b = 0; b < block; ++b) {
    while (i < lines.size() && !lines[i].empty()) ++i;
    ++i;
  }
  const auto header = split(lines.at(i), ',');
  std::map<std::string, std::vector<std::string>> cols;
  for (++i; i < lines.size() && !lines[i].empty(); ++i) {
    const auto cells = split(lines[i], ',');
    for (std::size_t c = 0; c < header.size(); ++c) cols[header[c]].push_back(c < cells.size() ? cells[c] : "");
  }
  return cols;
}

double num(const std::string& s) { return std::stod(s); }

std::string body(const std::string& text) { return text.substr(text.find('\n') + 1); }

}  // namespace

TEST_CASE("bounds command reproduces the reference evaluations") {
  auto r = run({"bounds", "--n", "1000", "--k", "3", "--w", "0.0029486"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("# config: command=bounds", 0) == 0);
  auto c = first_block(r.out);
  // Published values come from the unrounded mean; 0.0029486 is rounded, hence 2e-5.
  CHECK(std::fabs(num(c["lower"][0]) - 0.50278) <= 2e-5);
  CHECK(std::fabs(num(c["upper"][0]) - 0.51387) <= 2e-5);
  CHECK(c["closed_form"][0] == "true");

  r = run({"bounds", "--n", "1000000", "--k", "10", "--w", "1"});
  REQUIRE(r.code == 0);
  CHECK(std::fabs(num(first_block(r.out)["upper"][0]) - 0.00231) <= 1e-5);

  r = run({"bounds", "--n", "100", "--k", "3", "--w", "0"});
  REQUIRE(r.code == 0);
  c = first_block(r.out);
  CHECK(num(c["lower"][0]) == 0.0);
  CHECK(num(c["upper"][0]) == 0.0);

  // Probabilities carry six significant digits.
  CHECK(c["lambda"][0] == "0.00000e+00");
  r = run({"bounds", "--n", "10000000", "--k", "10", "--w", "1"});
  c = first_block(r.out);
  CHECK(c["b2"][0].find('e') != std::string::npos);
  CHECK(c["b2"][0].size() >= 11);
}

TEST_CASE("--z and the equivalent --w give identical reports") {
  const CliqueInstance inst{1000, 3, WeightModel::uniform()};
  for (double z : {0.5, 2.9486, 4.0}) {
    const double w = weight_from_scaled(inst, z);
    const auto a = run({"bounds", "--n", "1000", "--k", "3", "--z", cli::format_exact(z)});
    const auto b = run({"bounds", "--n", "1000", "--k", "3", "--w", cli::format_exact(w)});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(body(a.out) == body(b.out));
    const auto ja = json::parse(run({"bounds", "--n", "1000", "--k", "3", "--z", cli::format_exact(z),
                                               "--format", "json"}).out);
    const auto jb = json::parse(run({"bounds", "--n", "1000", "--k", "3", "--w", cli::format_exact(w),
                                               "--format", "json"}).out);
    CHECK(ja["result"] == jb["result"]);
  }
  // General H: z n^(-v/m).
  const auto a = run({"bounds", "--n", "20", "--graph", "C4", "--z", "2"});
  const auto b = run({"bounds", "--n", "20", "--graph", "C4", "--w", cli::format_exact(2.0 * std::pow(20.0, -1.0))});
  CHECK(body(a.out) == body(b.out));
  CHECK(run({"bounds", "--n", "20", "--k", "3", "--z", "1", "--w", "1"}).code == 2);
}

TEST_CASE("table row and absent entries") {
  auto r = run({"table", "--n", "1000", "--k", "3"});
  REQUIRE(r.code == 0);
  auto c = first_block(r.out);
  const auto row = table_stats(CliqueInstance{1000, 3, WeightModel::uniform()});
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5f", row.lb_at_mu);
  CHECK(c["lb_at_mu"][0] == buf);
  std::snprintf(buf, sizeof buf, "%.5f", row.max_gap);
  CHECK(c["max_gap"][0] == buf);
  CHECK(c["col_095"][0] == "---");
  CHECK(c["k"][0] == "3");
  CHECK(c["n"][0] == "1000");

  r = run({"table", "--n", "1e4", "--k", "3", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["config"]["n"] == 10000);
  CHECK(j["result"]["col_095"].is_number());

  // Asymptotic mean above 1: validity error.
  r = run({"table", "--n", "100", "--k", "10"});
  CHECK(r.code == 2);
  CHECK(r.err.find("validity error") != std::string::npos);
}

TEST_CASE("curve values at the mean match the table columns") {
  for (const char* n : {"100", "1000"}) {
    const auto r = run({"curve", "--n", n, "--k", "3"});
    REQUIRE(r.code == 0);
    auto c = first_block(r.out);
    REQUIRE(c["w"].size() == 301);
    CHECK(c["w_over_mu"][0] == "0");
    CHECK(c["w_over_mu"][100] == "1");
    CHECK(c["w_over_mu"][300] == "3");
    const auto row = table_stats(CliqueInstance{std::stoll(n), 3, WeightModel::uniform()});
    CHECK(num(c["lower"][100]) == doctest::Approx(row.lb_at_mu).epsilon(1e-5));
    CHECK(num(c["upper"][100]) == doctest::Approx(row.ub_at_mu).epsilon(1e-5));
    for (std::size_t i = 1; i < c["lower"].size(); ++i) CHECK(num(c["lower"][i]) >= num(c["lower"][i - 1]));
  }
}

TEST_CASE("significance test command") {
  auto r = run({"test", "--n", "1000", "--k", "3", "--observed", "0.0005", "--tail", "lower", "--alpha", "0.05"});
  REQUIRE(r.code == 0);
  auto c = first_block(r.out);
  CHECK(c["verdict"][0] == "significant");
  CHECK(num(c["cdf_upper"][0]) < 0.05);

  r = run({"test", "--n", "1000", "--k", "3", "--observed", "0.0029", "--tail", "lower"});
  CHECK(first_block(r.out)["verdict"][0] == "not significant");
  CHECK(run({"test", "--n", "1000", "--k", "3", "--observed", "0.1", "--tail", "middle"}).code == 2);
  CHECK(run({"test", "--n", "20", "--graph", "C4", "--observed", "0.1"}).code == 2);
}

TEST_CASE("graph-info, mean and census") {
  auto r = run({"graph-info", "--graph", "P3"});
  REQUIRE(r.code == 0);
  auto c = first_block(r.out);
  CHECK(c["a_H"][0] == "2");
  CHECK(c["strictly_balanced"][0] == "true");
  CHECK(c["density"][0] == "2/3");

  r = run({"graph-info", "--graph", "0 1 1 2 0 2 2 3", "--n", "100"});
  REQUIRE(r.code == 0);
  c = first_block(r.out);
  CHECK(c["strictly_balanced"][0] == "false");
  CHECK(c["mu_hat"][0].empty());
  CHECK(r.out.find("asymptotic_cdf") == std::string::npos);

  r = run({"graph-info", "--k", "4", "--n", "1000", "--grid-points", "4", "--x-max", "1.5"});
  c = first_block(r.out);
  CHECK(c["a_H"][0] == "24");
  CHECK(c["d_prime"][0] == "9/5");
  auto s = first_block(r.out, 1);
  REQUIRE(s["asymptotic_cdf"].size() == 4);
  for (std::size_t i = 1; i < 4; ++i) CHECK(num(s["asymptotic_cdf"][i]) > num(s["asymptotic_cdf"][i - 1]));

  r = run({"mean", "--n", "100000", "--k", "10"});
  CHECK(std::fabs(num(first_block(r.out)["mu_hat"][0]) - 1.8856) <= 5e-5);
  r = run({"mean", "--n", "1000", "--k", "3", "--dist", "exp:2"});
  CHECK(num(first_block(r.out)["mu_hat"][0]) == doctest::Approx(2.9486e-3 / 2).epsilon(1e-4));

  r = run({"census", "--graph", "K3", "--n", "6"});
  REQUIRE(r.code == 0);
  c = first_block(r.out);
  REQUIRE(c["ell"].size() == 1);
  CHECK(c["ell"][0] == "2");
  CHECK(c["a"][0] == "1");
  CHECK(c["b"][0] == "2");
  // C(6,3) * 3 * 3 ordered pairs.
  CHECK(num(c["count"][0]) == 180.0);
}

TEST_CASE("graph from a file") {
  const auto path = std::filesystem::temp_directory_path() / "minclique_cli_c5.txt";
  {
    std::ofstream f(path);
    f << "0 1\n1 2\n2 3\n3 4\n4 0\n";
  }
  const auto r = run({"graph-info", "--graph", path.string()});
  REQUIRE(r.code == 0);
  CHECK(first_block(r.out)["a_H"][0] == "10");
  std::filesystem::remove(path);
}

TEST_CASE("simulate is deterministic and writes its samples") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto samples = (dir / "minclique_cli_samples.csv").string();
  const std::vector<std::string> args{"simulate", "--n", "30", "--k", "3", "--trials", "300", "--seed", "5",
                                      "--grid-points", "20", "--samples", samples};
  const auto a = run(args);
  REQUIRE(a.code == 0);
  const auto b = run(args);
  CHECK(a.out == b.out);

  setenv("MINCLIQUE_THREADS", "3", 1);
  const auto c = run(args);
  unsetenv("MINCLIQUE_THREADS");
  CHECK(a.out == c.out);

  auto sum = first_block(a.out);
  CHECK(sum["trials"][0] == "300");
  CHECK(sum["envelope_passed"][0] == "true");
  CHECK(first_block(a.out, 1)["w"].size() == 20);

  std::ifstream f(samples);
  std::string line;
  std::getline(f, line);
  CHECK(line.rfind("# seed=5 trials=300", 0) == 0);
  std::getline(f, line);
  CHECK(line == "W");
  int count = 0;
  double prev = -1.0;
  while (std::getline(f, line)) {
    const double x = std::stod(line);
    CHECK(x >= prev);
    prev = x;
    ++count;
  }
  CHECK(count == 300);
  std::filesystem::remove(samples);

  const auto other = run({"simulate", "--n", "30", "--k", "3", "--trials", "300", "--seed", "6",
                            "--grid-points", "20"});
  CHECK(body(other.out) != body(a.out));
}

TEST_CASE("output file, json shape and exit codes") {
  const auto path = (std::filesystem::temp_directory_path() / "minclique_cli_out.json").string();
  auto r = run({"bounds", "--n", "100", "--k", "4", "--w", "0.1", "--format", "json", "--out", path});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  const auto j = json::parse(f);
  CHECK(j["config"]["command"] == "bounds");
  CHECK(j["config"]["w"] == 0.1);
  CHECK(j["result"]["lower"].is_number());
  std::filesystem::remove(path);

  CHECK(run({"--help"}).code == 0);
  CHECK(run({"bounds", "--help"}).out.find("--w") != std::string::npos);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"bounds", "--n", "10", "--k", "3", "--w", "x"}).code == 2);

  r = run({"bounds", "--n", "5", "--k", "7", "--w", "0.1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("domain error") != std::string::npos);
  r = run({"bounds", "--n", "5", "--graph", "0 0", "--w", "0.1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("graph parse error") != std::string::npos);
  r = run({"census", "--graph", "K8"});
  CHECK(r.code == 2);
  CHECK(r.err.find("guard error") != std::string::npos);
  CHECK(run({"bounds", "--n", "10", "--k", "3", "--w", "0.1", "--digits", "3"}).code == 2);
  CHECK(run({"bounds", "--n", "2.5", "--k", "3", "--w", "0.1"}).code == 2);
  CHECK(run({"simulate", "--n", "70", "--graph", "P3", "--trials", "1"}).code == 2);
}
