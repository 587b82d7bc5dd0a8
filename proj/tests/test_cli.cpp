#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cellflow/io.hpp"

namespace fs = std::filesystem;
using namespace cellflow;

namespace {

const fs::path work = CLI_WORK_DIR;

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + CELLFLOW_CLI + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path fresh(const std::string& name) {
  const fs::path dir = work / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

std::vector<io::MetricsRow> metrics(const fs::path& p) {
  std::ifstream in(p);
  return io::read_metrics(in);
}

fs::path generated() {
  static const fs::path dir = [] {
    const fs::path d = fresh("instance");
    REQUIRE(run("generate --nodes 60 --cells 5 --len 6 --sigma-n 0.75 --samples 20 --seed 1 "
                "--out-dir " + q(d)) == 0);
    return d;
  }();
  return dir;
}

}  // namespace

TEST_CASE("generate writes four files and is bit-identical on re-run") {
  const fs::path a = generated();
  const fs::path b = fresh("instance_again");
  REQUIRE(run("generate --nodes 60 --cells 5 --len 6 --sigma-n 0.75 --samples 20 --seed 1 "
              "--out-dir " + q(b)) == 0);
  for (const char* f : {"edges.csv", "flows.csv", "truth.csv", "manifest.json"}) {
    CHECK(fs::exists(a / f));
    if (std::string(f) != "manifest.json") CHECK(slurp(a / f) == slurp(b / f));
  }
}

TEST_CASE("generate with no cells writes an empty truth file") {
  const fs::path d = fresh("nocells");
  REQUIRE(run("generate --cells 0 --seed 2 --out-dir " + q(d)) == 0);
  CHECK(slurp(d / "truth.csv").empty());
}

TEST_CASE("generated files re-serialize to identical bytes") {
  const fs::path d = generated();
  const Skeleton g = io::load_edges(d / "edges.csv");
  std::ostringstream e, f, c;
  io::write_edges(e, g);
  io::write_flows(f, io::load_flows(d / "flows.csv", g.edge_count()));
  io::write_cells(c, io::load_cells(d / "truth.csv", g));
  CHECK(e.str() == slurp(d / "edges.csv"));
  CHECK(f.str() == slurp(d / "flows.csv"));
  CHECK(c.str() == slurp(d / "truth.csv"));
}

TEST_CASE("infer populates recovery against the truth file") {
  const fs::path in = generated();
  const fs::path out = fresh("infer_similarity");
  REQUIRE(run("infer --edges " + q(in / "edges.csv") + " --flows " + q(in / "flows.csv") +
              " --truth " + q(in / "truth.csv") +
              " --heuristic similarity --max-cells 5 --svg --out-dir " + q(out)) == 0);
  const auto rows = metrics(out / "metrics.csv");
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    REQUIRE(rows[i].recovery);
    if (i > 0) CHECK(rows[i].loss <= rows[i - 1].loss);
  }
  const Skeleton g = io::load_edges(in / "edges.csv");
  CHECK(io::load_cells(out / "cells.csv", g).size() == 5);
  const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
  CHECK(summary.at("stop_reason") == "max_cells");
  CHECK(summary.at("recovery").get<double>() == rows.back().recovery.value());
  CHECK(slurp(out / "loss.svg").find("<svg") == 0);
}

TEST_CASE("a huge epsilon leaves only the budget-0 row") {
  const fs::path in = generated();
  const fs::path out = fresh("infer_epsilon");
  REQUIRE(run("infer --edges " + q(in / "edges.csv") + " --flows " + q(in / "flows.csv") +
              " --epsilon 1e12 --out-dir " + q(out)) == 0);
  const auto rows = metrics(out / "metrics.csv");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].iteration == 0);
  CHECK(slurp(out / "cells.csv").empty());
}

TEST_CASE("triangles on a triangle-free grid stops immediately") {
  const fs::path d = fresh("grid");
  {
    std::ofstream e(d / "edges.csv");
    e << "u,v\n0,1\n1,2\n3,4\n4,5\n0,3\n1,4\n2,5\n";
    std::ofstream f(d / "flows.csv");
    f << "e,f1\n0,1\n1,1\n2,-1\n3,-1\n4,-1\n5,0\n6,1\n";
  }
  REQUIRE(run("infer --edges " + q(d / "edges.csv") + " --flows " + q(d / "flows.csv") +
              " --heuristic triangles --max-cells 3 --out-dir " + q(d / "out")) == 0);
  const auto summary = nlohmann::json::parse(slurp(d / "out" / "summary.json"));
  CHECK(summary.at("stop_reason") == "no_candidates");
  CHECK(summary.at("iterations") == 0);
}

TEST_CASE("decompose: pure gradient and missing cells file") {
  const fs::path d = fresh("decompose");
  {
    std::ofstream e(d / "edges.csv");
    e << "u,v\n0,1\n1,2\n0,2\n2,3\n";
    // potentials 0, 1, 3, 6
    std::ofstream f(d / "flows.csv");
    f << "e,f1\n0,1\n1,2\n2,3\n3,3\n";
    std::ofstream c(d / "cells.csv");
    c << "0,1,2\n";
  }
  REQUIRE(run("decompose --edges " + q(d / "edges.csv") + " --flows " + q(d / "flows.csv") +
              " --cells " + q(d / "cells.csv") + " --out-dir " + q(d / "with")) == 0);
  REQUIRE(run("decompose --edges " + q(d / "edges.csv") + " --flows " + q(d / "flows.csv") +
              " --out-dir " + q(d / "without")) == 0);
  for (const char* sub : {"with", "without"}) {
    std::istringstream in(slurp(d / sub / "decomposition.csv"));
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "sample,grad,curl,harm,total,pythagoras_check");
    std::istringstream fields(row);
    std::string v[6];
    for (auto& s : v) std::getline(fields, s, ',');
    CHECK(std::stod(v[1]) == doctest::Approx(std::stod(v[4])));
    CHECK(std::abs(std::stod(v[2])) <= 1e-6);
    CHECK(std::abs(std::stod(v[3])) <= 1e-6);
  }
  std::istringstream none(slurp(d / "without" / "decomposition.csv"));
  std::string line;
  std::getline(none, line);
  std::getline(none, line);
  CHECK(line.find(",0,") != std::string::npos);  // curl column is exactly zero
}

TEST_CASE("benchmark on a single tiny size") {
  const fs::path out = fresh("benchmark");
  REQUIRE(run("benchmark --triangulation-sizes 60 --smallworld-sizes --out-dir " + q(out)) == 0);
  std::istringstream in(slurp(out / "benchmark.csv"));
  std::string header, row, extra;
  std::getline(in, header);
  CHECK(header == "family,nodes,edges,seed,iterations,wall_time_ms,status");
  CHECK(std::getline(in, row));
  CHECK(row.rfind("triangulation,", 0) == 0);
  CHECK(row.substr(row.size() - 3) == ",ok");
  CHECK_FALSE(std::getline(in, extra));
}

TEST_CASE("replay reproduces infer outputs") {
  const fs::path in = generated();
  const fs::path out = fresh("replay_source");
  REQUIRE(run("infer --edges " + q(in / "edges.csv") + " --flows " + q(in / "flows.csv") +
              " --heuristic max --max-cells 3 --out-dir " + q(out)) == 0);
  const fs::path again = fresh("replay_target");
  REQUIRE(run("replay --manifest " + q(out / "manifest.json") + " --out-dir " + q(again)) == 0);
  CHECK(slurp(out / "cells.csv") == slurp(again / "cells.csv"));
}

TEST_CASE("exit codes distinguish failure kinds") {
  const fs::path d = fresh("errors");
  {
    std::ofstream e(d / "bad_edges.csv");
    e << "u,v\n3,1\n";
    std::ofstream ok(d / "edges.csv");
    ok << "u,v\n0,1\n1,2\n0,2\n";
    std::ofstream f(d / "flows.csv");
    f << "e,f1\n0,1\n1,1\n2,1\n";
    std::ofstream e5(d / "edges5.csv");
    e5 << "u,v\n0,1\n1,2\n2,3\n3,4\n0,4\n1,3\n";
    std::ofstream f5(d / "flows5.csv");
    f5 << "e,f1\n0,0.3\n1,-1.2\n2,2.5\n3,0.7\n4,-0.4\n5,1.9\n";
  }
  CHECK(run("infer --edges " + q(d / "bad_edges.csv") + " --flows " + q(d / "flows.csv") +
            " --max-cells 1 --out-dir " + q(d / "o")) == 2);
  CHECK(run("infer --edges " + q(d / "missing.csv") + " --flows " + q(d / "flows.csv") +
            " --max-cells 1 --out-dir " + q(d / "o")) == 5);
  CHECK(run("infer --edges " + q(d / "edges.csv") + " --flows " + q(d / "flows.csv") +
            " --heuristic true-cells --max-cells 1 --out-dir " + q(d / "o")) == 1);
  CHECK(run("infer --edges " + q(d / "edges5.csv") + " --flows " + q(d / "flows5.csv") +
            " --max-cells 1 --max-iter 1 --atol 1e-15 --btol 1e-15 --out-dir " + q(d / "o")) == 3);
  CHECK(run("generate --family smallworld --nodes 10 --extra-edge-prob 0 --cells 2 --len 3 "
            "--len-max 4 --out-dir " + q(d / "g")) == 4);
  CHECK(run("infer --flows x") == 1);
  CHECK(run("--help") == 0);
}
