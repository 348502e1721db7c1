#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "rpm/errors.hpp"
#include "run_record.hpp"

using rpm::cli::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(RPM_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  while (std::fgets(buf, sizeof buf, p)) r.out += buf;
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::vector<double>> parse_csv(const std::string& text, std::string& header) {
  std::istringstream in(text);
  std::getline(in, header);
  std::vector<std::vector<double>> rows;
  for (std::string line; std::getline(in, line);) {
    std::vector<double> row;
    std::istringstream cells(line);
    for (std::string c; std::getline(cells, c, ',');) row.push_back(std::stod(c));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("run record schema") {
  rpm::cli::RunRecord r;
  r.command = "demo";
  r.results = {{"x", 0.1}};
  CHECK(rpm::cli::validate_run_record(r.to_json()).empty());
  json bad = r.to_json();
  bad.erase("meta");
  CHECK_FALSE(rpm::cli::validate_run_record(bad).empty());
  json nan = r.to_json();
  nan["results"]["y"] = std::nan("");
  CHECK_FALSE(rpm::cli::validate_run_record(nan).empty());
  json extra = r.to_json();
  extra["other"] = 1;
  CHECK_FALSE(rpm::cli::validate_run_record(extra).empty());
}

TEST_CASE("precise dump keeps 17 significant digits and round-trips") {
  const json j{{"a", 0.1}, {"b", 1.0}, {"c", std::vector<double>{1.0 / 3, -2e-300}}, {"d", "s"}, {"e", 7}};
  const std::string text = rpm::cli::dump_precise(j);
  CHECK(text.find("0.10000000000000001") != std::string::npos);
  CHECK(text.find("0.33333333333333331") != std::string::npos);
  const json back = json::parse(text);
  CHECK(back == j);
}

TEST_CASE("grid parsing") {
  CHECK(rpm::cli::parse_grid("-2:2:0.01").size() == 401);
  CHECK(rpm::cli::parse_grid("0:1:0.25") == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  CHECK_THROWS_AS(rpm::cli::parse_grid("0:1"), rpm::InvalidArgument);
  CHECK_THROWS_AS(rpm::cli::parse_grid("1:0:0.1"), rpm::InvalidArgument);
  CHECK_THROWS_AS(rpm::cli::parse_grid("0:1:0"), rpm::InvalidArgument);
}

TEST_CASE("verify-appendix") {
  const Run r = run("verify-appendix --table");
  CHECK(r.code == 0);
  CHECK(r.out.find("Y(pi/3)  1.333333333  1.333333333") != std::string::npos);
  const Run j = run("verify-appendix");
  const json rec = json::parse(j.out);
  const json& first = rec["results"]["checks"][0];
  CHECK(first["name"] == "Y(pi/3)");
  CHECK(first["abs_delta"].get<double>() < 1e-10);
  for (const auto& c : rec["results"]["checks"]) CHECK(c["pass"].get<bool>());
}

TEST_CASE("stationary") {
  const Run r = run("stationary --L 6");
  CHECK(r.code == 0);
  const json rec = json::parse(r.out);
  CHECK(rec["command"] == "stationary");
  CHECK(rec["results"]["normalization"].get<double>() == 140);
  CHECK(rpm::cli::validate_run_record(rec).empty());
}

TEST_CASE("every command emits a valid record") {
  for (const char* args : {"stationary --L 4 --states", "eigen --L 4 --alpha 0.3 --beta -0.2",
                           "bethe --L 4 --delta -0.5 --phi 2.0943951023931957", "cgf --observable joint --L 6 --grid -1:1:0.5 --alpha 0.2",
                           "rate --observable global --L 6 --grid 0:1:0.25", "cumulants --L 6 --max-order 2",
                           "simulate --L 4 --tmax 2e4 --seed 3 --trajectories 2", "verify-appendix"}) {
    CAPTURE(args);
    const Run r = run(args);
    CHECK(r.code == 0);
    const json rec = json::parse(r.out);
    CHECK(rpm::cli::validate_run_record(rec).empty());
  }
}

TEST_CASE("cgf CSV reproduces the sewn tiles curve") {
  const Run r = run("cgf --observable tiles --L 100 --grid -2:2:0.01 --csv");
  REQUIRE(r.code == 0);
  std::string header;
  const auto rows = parse_csv(r.out, header);
  CHECK(header == "param,bulk,fsc,total");
  REQUIRE(rows.size() == 401);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][1] > rows[i - 1][1]);
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) CHECK(rows[i + 1][1] - 2 * rows[i][1] + rows[i - 1][1] > -1e-9);
}

TEST_CASE("rate CSV") {
  const Run r = run("rate --observable tiles --L 10 --grid 0:12:0.5 --csv");
  REQUIRE(r.code == 0);
  std::string header;
  const auto rows = parse_csv(r.out, header);
  CHECK(header == "y,rate,legendre_param");
  CHECK(std::isinf(rows.front()[1]));
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][1] >= 0);
}

TEST_CASE("simulate is deterministic") {
  const std::string args = "simulate --L 6 --tmax 5e3 --seed 9 --trajectories 3 --threads ";
  json a = json::parse(run(args + "1").out), b = json::parse(run(args + "3").out);
  CHECK(a["results"] == b["results"]);
}

TEST_CASE("exit codes") {
  CHECK(run("stationary --L 5").code == 2);
  CHECK(run("cgf --L 4 --grid nonsense").code == 2);
  CHECK(run("rate --observable joint --L 4 --grid 0:1:0.5").code == 2);
  CHECK(run("eigen --L 4 --csv").code == 2);
  CHECK(run("no-such-command").code == 2);
  CHECK(run("stationary --L 22").code == 4);
  CHECK(run("validate /nonexistent.json").code == 2);
}
