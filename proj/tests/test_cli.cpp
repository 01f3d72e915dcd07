#include <doctest.h>

#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "qrfcomm");
  std::ostringstream out;
  std::ostringstream err;
  const int code = qrfcomm::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> data_rows(const std::string& csv, std::string* header = nullptr) {
  std::istringstream in(csv);
  std::string line;
  std::vector<std::vector<double>> rows;
  bool seen_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!seen_header) {
      seen_header = true;
      if (header) *header = line;
      continue;
    }
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qrfcomm_test_" + name);
}

}  // namespace

TEST_CASE("fig2 default ladder") {
  const auto r = run({"fig2"});
  REQUIRE(r.code == 0);
  std::string header;
  const auto rows = data_rows(r.out, &header);
  CHECK(header == "Delta,s,fidelity,fidelity_numeric");
  REQUIRE(rows.size() == 153);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(std::abs(rows[i][2] - rows[i][3]) <= 1e-6);
    if (rows[i][1] == 0.0) {
      CHECK(rows[i][2] == 1.0);
    } else {
      CHECK(rows[i][2] < rows[i - 1][2]);
    }
  }
  CHECK(r.out.rfind("# tool: qrfcomm", 0) == 0);
  CHECK(r.out.find("# seed: none") != std::string::npos);
}

TEST_CASE("fig2 single point and usage errors") {
  const auto r = run({"fig2", "--Delta", "1", "--s-min", "1.4142135623730951", "--s-max", "1.5", "--s-step", "1"});
  REQUIRE(r.code == 0);
  const auto rows = data_rows(r.out);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0][3] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));

  const auto cfg = temp_path("empty_delta.json");
  std::ofstream(cfg) << R"({"fig2": {"Delta": []}})";
  CHECK(run({"fig2", "--config", cfg.string()}).code == 2);
  CHECK(run({"fig2", "--s-step", "-1"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"fig9"}).code == 2);
  CHECK(run({"fig2", "--format", "xml"}).code == 2);
}

TEST_CASE("fig3") {
  const auto r = run({"fig3", "--scan-x-bar"});
  REQUIRE(r.code == 0);
  std::string header;
  const auto rows = data_rows(r.out, &header);
  CHECK(header == "ratio,F_max,p_bar_max_sigma,beta,x_bar_max_sigma");
  REQUIRE(rows.size() == 50);
  CHECK(rows.front()[0] == doctest::Approx(0.1));
  CHECK(rows.back()[0] == doctest::Approx(10.0));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i][1] >= rows[i][3]);
    CHECK(rows[i][4] == 0.0);
    if (i > 0) CHECK(rows[i][1] > rows[i - 1][1]);
  }
  const auto one = data_rows(run({"fig3", "--ratio-min", "1", "--ratio-max", "1", "--ratio-count", "1"}).out);
  REQUIRE(one.size() == 1);
  CHECK(one[0][3] == doctest::Approx(0.816496580928).epsilon(1e-11));
}

TEST_CASE("converge-tau") {
  const auto r = run({"converge-tau"});
  REQUIRE(r.code == 0);
  std::string header;
  const auto rows = data_rows(r.out, &header);
  CHECK(header == "tau,max_deviation,fidelity_tau,fidelity_inf,trace_error");
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i][4] <= 1e-8);
    if (i > 0) CHECK(rows[i][1] <= rows[i - 1][1]);
  }
  CHECK(run({"converge-tau", "--tau", "10,5"}).code == 2);
  CHECK(run({"converge-tau", "--quad-nodes", "10"}).code == 3);
}

TEST_CASE("simulate") {
  const std::vector<std::string> args{"simulate", "--seed", "42", "--samples", "5000", "--tau", "10"};
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("\"fidelity_kernel\"") != std::string::npos);
  CHECK(a.out.find("\"deviation_std_err\"") != std::string::npos);
  CHECK(a.out.find("\"seed\": 42") != std::string::npos);
  CHECK(run({"simulate", "--seed", "1", "--samples", "10"}).code == 2);
  CHECK(run({"simulate", "--samples", "5000"}).code == 2);
  const auto other = run({"simulate", "--seed", "43", "--samples", "5000", "--tau", "10"});
  CHECK(other.out != a.out);
}

TEST_CASE("config file with flag override and file output") {
  const auto cfg = temp_path("config.json");
  std::ofstream(cfg) << R"({"seed": 7, "format": "csv", "simulate": {"samples": 2000, "tau": 5}})";
  const auto out = temp_path("sim.csv");
  std::filesystem::remove(out);
  const auto r = run({"simulate", "--config", cfg.string(), "--tau", "8", "--out", out.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(out);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("\"tau\":8.0") != std::string::npos);
  CHECK(text.find("\"samples\":2000") != std::string::npos);
  CHECK(text.find("# seed: 7") != std::string::npos);
  CHECK(data_rows(text).size() == 1);

  const auto failed = temp_path("failed.csv");
  std::filesystem::remove(failed);
  CHECK(run({"converge-tau", "--quad-nodes", "10", "--out", failed.string()}).code == 3);
  CHECK_FALSE(std::filesystem::exists(failed));

  const auto broken = temp_path("broken.json");
  std::ofstream(broken) << "{not json";
  CHECK(run({"fig3", "--config", broken.string()}).code == 2);
}

TEST_CASE("json format") {
  const auto r = run({"fig3", "--ratio-min", "1", "--ratio-max", "2", "--ratio-count", "2", "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\"rows\"") != std::string::npos);
  CHECK(r.out.find("\"F_max\"") != std::string::npos);
}
