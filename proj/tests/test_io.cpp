#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "cellflow/errors.hpp"
#include "cellflow/inference.hpp"
#include "cellflow/io.hpp"
#include "cellflow/synth.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cellflow;

namespace {

template <class Write>
std::string to_text(Write&& write) {
  std::ostringstream out;
  write(out);
  return out.str();
}

}  // namespace

TEST_CASE("numbers round-trip through their shortest form") {
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd m = oracle::random_matrix(rng, 50, 1);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const std::string s = io::format_double(m(i, 0));
    CHECK(std::stod(s) == m(i, 0));
  }
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(3.0) == "3");
}

TEST_CASE("edge lists round-trip and enforce the schema") {
  const Skeleton g = fixture::grid_skeleton();
  const std::string text = to_text([&](auto& o) { io::write_edges(o, g); });
  std::istringstream in(text);
  const Skeleton back = io::read_edges(in);
  CHECK(back.edges() == g.edges());
  CHECK(back.node_count() == g.node_count());

  auto parse = [](const std::string& s) {
    std::istringstream i(s);
    return io::read_edges(i);
  };
  CHECK_THROWS_AS(parse("a,b\n0,1\n"), ParseError);
  CHECK_THROWS_AS(parse("u,v\n1,0\n"), ParseError);
  CHECK_THROWS_AS(parse("u,v\n0,1\n0,1\n"), ParseError);
  CHECK_THROWS_AS(parse("u,v\n0,x\n"), ParseError);
  CHECK_THROWS_AS(parse("u,v\n0,1,2\n"), ParseError);
  CHECK(parse("u,v\r\n0,1\r\n\r\n1,2\r\n").edge_count() == 2);
}

TEST_CASE("flow files round-trip bit-exactly") {
  std::mt19937_64 rng(2);
  const FlowMatrix f = oracle::random_matrix(rng, 22, 4);
  const std::string text = to_text([&](auto& o) { io::write_flows(o, f); });
  CHECK(text.rfind("e,f1,f2,f3,f4\n", 0) == 0);
  std::istringstream in(text);
  CHECK(io::read_flows(in, 22) == f);

  auto parse = [](const std::string& s, std::size_t edges) {
    std::istringstream i(s);
    return io::read_flows(i, edges);
  };
  CHECK_THROWS_AS(parse("e,f1\n0,1\n", 2), ParseError);
  CHECK_THROWS_AS(parse("e,f1\n0,1\n2,1\n", 2), ParseError);
  CHECK_THROWS_AS(parse("e,f2\n0,1\n", 1), ParseError);
  CHECK_THROWS_AS(parse("e,f1\n0,nan\n", 1), ParseError);
  CHECK_THROWS_AS(parse("e,f1\n0,1,2\n", 1), ParseError);
}

TEST_CASE("cells files round-trip and are canonicalized on read") {
  const Skeleton g = fixture::grid_skeleton();
  const auto cells = fixture::grid_cells(g);
  const std::string text = to_text([&](auto& o) { io::write_cells(o, cells); });
  std::istringstream in(text);
  CHECK(io::read_cells(in, g) == cells);

  std::istringstream rotated("6,1,0,5\n");
  const auto got = io::read_cells(rotated, g);
  REQUIRE(got.size() == 1);
  CHECK(got[0].to_string(',') == "0,1,6,5");

  auto parse = [&](const std::string& s) {
    std::istringstream i(s);
    return io::read_cells(i, g);
  };
  CHECK_THROWS_AS(parse("0,1,2\n"), ParseError);  // not a cycle
  CHECK_THROWS_AS(parse("0,1,6,5\n5,6,1,0\n"), ParseError);
  CHECK_THROWS_AS(parse("0,1,99\n"), ParseError);
  CHECK(parse("").empty());
}

TEST_CASE("metrics file lists every iteration") {
  SynthConfig cfg;
  cfg.sigma_n = 0.5;
  cfg.seed = 3;
  const auto syn = generate_triangulation_complex(cfg);
  const FlowMatrix f = sample_flows(syn.complex, cfg);
  InferenceConfig icfg;
  icfg.max_cells = 4;
  const auto r = infer(syn.complex.skeleton(), f, icfg);
  const auto truth = std::span<const TwoCell>(syn.complex.cells());
  const std::string text = to_text([&](auto& o) { io::write_metrics(o, r, truth); });
  std::istringstream in(text);
  const auto rows = io::read_metrics(in);
  REQUIRE(rows.size() == r.history.size() + 1);
  CHECK(rows[0].cell.empty());
  CHECK(rows[0].loss == r.initial_loss);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].loss == r.history[i - 1].loss);
    CHECK(rows[i].loss <= rows[i - 1].loss);
    CHECK(rows[i].cells_count == i);
    CHECK(rows[i].cell == r.history[i - 1].cell.to_string('-'));
    REQUIRE(rows[i].recovery);
    CHECK(*rows[i].recovery == recovery_after(r, truth, i));
  }
  const std::string plain = to_text([&](auto& o) { io::write_metrics(o, r, std::nullopt); });
  std::istringstream in2(plain);
  CHECK_FALSE(io::read_metrics(in2)[1].recovery);

  std::istringstream bad("iteration,cell,loss,cells_count,b2_nnz,wall_time_ms\n1,,1,0,0,0\n");
  CHECK_THROWS_AS(io::read_metrics(bad), ParseError);
}

TEST_CASE("decomposition table matches the dense oracle") {
  const Skeleton g = fixture::small_skeleton();
  const auto cells = fixture::small_cells(g);
  const CellComplex cc(g, cells);
  std::mt19937_64 rng(4);
  const FlowMatrix f = oracle::random_matrix(rng, 6, 3);
  const auto parts = decompose(cc, f);
  const std::string text = to_text([&](auto& o) { io::write_decomposition(o, f, parts); });
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == "sample,grad,curl,harm,total,pythagoras_check");
  const IntSparse b1 = build_b1(g), b2 = build_b2(cc);
  const Eigen::MatrixXd grad = oracle::gradient_part(b1, f), curl = oracle::curl_part(b2, f);
  const Eigen::MatrixXd harm = oracle::harmonic_part(b1, b2, f);
  for (Eigen::Index j = 0; j < 3; ++j) {
    REQUIRE(std::getline(in, line));
    double v[6];
    std::istringstream fields(line);
    for (double& x : v) {
      std::string s;
      std::getline(fields, s, ',');
      x = std::stod(s);
    }
    CHECK(v[0] == j + 1);
    CHECK(std::abs(v[1] - grad.col(j).norm()) <= 1e-8 * f.col(j).norm());
    CHECK(std::abs(v[2] - curl.col(j).norm()) <= 1e-8 * f.col(j).norm());
    CHECK(std::abs(v[3] - harm.col(j).norm()) <= 1e-8 * f.col(j).norm());
    CHECK(v[5] <= 1e-6);
  }
}

TEST_CASE("file helpers report unreadable paths") {
  CHECK_THROWS_AS(io::load_edges("/nonexistent/edges.csv"), IoError);
  CHECK_THROWS_AS(io::save_edges("/nonexistent/dir/edges.csv", fixture::grid_skeleton()), IoError);
}

TEST_CASE("generated instance survives a disk round trip byte for byte") {
  SynthConfig cfg;
  cfg.sigma_n = 0.75;
  cfg.seed = 1;
  const auto syn = generate_triangulation_complex(cfg);
  const FlowMatrix f = sample_flows(syn.complex, cfg);
  const auto dir = std::filesystem::temp_directory_path() / "cellflow_io_roundtrip";
  std::filesystem::create_directories(dir);
  io::save_edges(dir / "edges.csv", syn.complex.skeleton());
  io::save_flows(dir / "flows.csv", f);
  io::save_cells(dir / "truth.csv", syn.complex.cells());
  const Skeleton g = io::load_edges(dir / "edges.csv");
  const std::string edges = to_text([&](auto& o) { io::write_edges(o, g); });
  const std::string flows =
      to_text([&](auto& o) { io::write_flows(o, io::load_flows(dir / "flows.csv", g.edge_count())); });
  const auto cells = io::load_cells(dir / "truth.csv", g);
  const std::string cell_text = to_text([&](auto& o) { io::write_cells(o, cells); });
  CHECK(edges == to_text([&](auto& o) { io::write_edges(o, syn.complex.skeleton()); }));
  CHECK(flows == to_text([&](auto& o) { io::write_flows(o, f); }));
  CHECK(cell_text == to_text([&](auto& o) { io::write_cells(o, syn.complex.cells()); }));
  std::filesystem::remove_all(dir);
}
