#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "diocap/cli.hpp"

using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = diocap::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("expand pi") {
  const auto r = run({"expand", "--value", "pi", "--terms", "5", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["a0"] == 3);
  CHECK(j["digits"] == json::array({7, 15, 1, 292, 1}));
  CHECK(j["convergents"][1] == json::array({1, "22", "7"}));
}

TEST_CASE("series with N = 0 is the empty sum") {
  const auto r = run({"series", "--kind", "brjuno", "--rule", "golden", "--N", "0"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["total"] == 0.0);
}

TEST_CASE("lemma series reports the proof checks") {
  const auto r = run({"series", "--kind", "lemma1", "--rule", "nonbrjuno-exp", "--N", "20", "--epsilon", "0.1"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["cauchy_bunyakovsky"]["holds"] == true);
  CHECK(j["bound_chain"]["violations"].empty());
  CHECK(j.contains("split"));

  const auto csv = run({"series", "--kind", "brjuno", "--value", "golden", "--N", "5", "--format", "csv"});
  REQUIRE(csv.code == 0);
  const auto rows = csv_rows(csv.out);
  CHECK(rows.front() == std::vector<std::string>{"n", "term", "partial_sum", "in_N_split"});
  CHECK(rows.size() == 6);
}

TEST_CASE("potential sweep csv is nondecreasing") {
  const auto r = run({"potential", "--alpha", "golden", "--qmax-sweep", "128:1024:x2", "--sigma", "2.4", "--epsilon",
                      "0.1", "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == std::vector<std::string>{"q_max", "potential", "tail_bound"});
  for (std::size_t i = 2; i < rows.size(); ++i) CHECK(std::stod(rows[i][1]) >= std::stod(rows[i - 1][1]));
  CHECK(r.out.find('\r') == std::string::npos);
}

TEST_CASE("every subcommand produces machine output") {
  const std::vector<std::vector<std::string>> commands{
      {"construct", "--rule", "nonbrjuno-exp", "--terms", "8"},
      {"kernel", "--family", "K2", "--d", "0:0.5:5"},
      {"gauge", "--family", "H1", "--t", "0,0.01,0.1"},
      {"measure", "--qmax", "12"},
      {"capacity", "--nodes", "16"},
      {"cover", "--samples", "50", "--gauge", "power", "--epsilon", "0.01"},
  };
  for (const auto& c : commands) {
    const auto r = run(c);
    CHECK_MESSAGE(r.code == 0, c.front() << ": " << r.err);
    CHECK(json::accept(r.out));
  }
  const auto m = json::parse(run({"measure", "--qmax", "10"}).out);
  CHECK(m["count"] == 9);
  CHECK(m["atoms"].size() == 9);
  CHECK(m["atoms"][0][0] == "1/10");
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"expand"}).code == 2);
  CHECK(run({"expand", "--value", "banana"}).code == 2);
  CHECK(run({"series", "--kind", "brjuno", "--N", "3"}).code == 2);
  CHECK(run({"measure", "--qmax", "5"}).code == 2);
  CHECK(run({"construct", "--rule", "spiral"}).code == 2);

  const auto rational = run({"expand", "--value", "22/7", "--terms", "5"});
  CHECK(rational.code == 3);
  CHECK(rational.out.empty());
  CHECK_FALSE(rational.err.empty());
  CHECK(run({"gauge", "--family", "H2", "--t", "0.5"}).code == 3);
  CHECK(run({"kernel", "--sigma", "0"}).code == 2);

  const auto capped = run({"capacity", "--nodes", "200", "--tol", "1e-14", "--max-iters", "3"});
  CHECK(capped.code == 4);
  CHECK(capped.out.empty());

  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("potential") != std::string::npos);
}

TEST_CASE("output file") {
  const std::string path = "diocap_cli_test_output.json";
  std::remove(path.c_str());
  const auto r = run({"kernel", "--d", "0.5", "--output", path});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(json::parse(buf.str())["values"][0][0] == 0.5);
  std::remove(path.c_str());
}

TEST_CASE("thread count does not change output") {
  const std::vector<std::string> args{"potential", "--alpha", "pi-frac", "--qmax-sweep", "16:256:x2"};
  auto a = args;
  a.insert(a.end(), {"--threads", "1"});
  auto b = args;
  b.insert(b.end(), {"--threads", "8"});
  CHECK(run(a).out == run(b).out);
}
