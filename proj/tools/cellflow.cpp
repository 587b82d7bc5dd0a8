// Command-line front end. Talks to the library only through cellflow.h.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cellflow/cellflow.h"
#include "svg.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// Thrown with a cf_status; main() turns it into the exit code.
struct Failure {
  int code;
  std::string message;
};

void check(cf_status status) {
  if (status != CF_OK) throw Failure{static_cast<int>(status), cf_last_error()};
}

template <class T, void (*Destroy)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Destroy(ptr); }
  T** out() { return &ptr; }
  T* get() const { return ptr; }
};

using Skeleton = Handle<cf_skeleton, cf_skeleton_destroy>;
using Flows = Handle<cf_flows, cf_flows_destroy>;
using Cells = Handle<cf_cells, cf_cells_destroy>;
using Result = Handle<cf_result, cf_result_destroy>;

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Failure{CF_ERR_IO, "cannot create " + dir + ": " + ec.message()};
}

std::string path_in(const std::string& dir, const char* name) { return (fs::path(dir) / name).string(); }

std::string absolute(const std::string& p) {
  return p.empty() ? p : fs::absolute(p).lexically_normal().string();
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << j.dump(2) << '\n';
  if (!out) throw Failure{CF_ERR_IO, "failed writing " + path};
}

std::string family_name(cf_family f) {
  return f == CF_FAMILY_SMALLWORLD ? "smallworld" : "triangulation";
}

cf_family parse_family(const std::string& s) {
  if (s == "triangulation") return CF_FAMILY_TRIANGULATION;
  if (s == "smallworld") return CF_FAMILY_SMALLWORLD;
  throw Failure{CF_ERR_INVALID_ARGUMENT, "unknown family '" + s + "'"};
}

// ---------------------------------------------------------------------------
// generate

struct GenerateParams {
  std::string family = "triangulation";
  std::size_t nodes = 60;
  std::size_t cells = 5;
  std::size_t len = 6;
  std::size_t len_max = 0;  // 0: same as len
  double sigma_c = 1.0;
  double sigma_n = 0.0;
  std::size_t samples = 20;
  double prune_prob = 0.3;
  double extra_edge_prob = 0.01;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

json to_json(const GenerateParams& p) {
  return {{"family", p.family},         {"nodes", p.nodes},
          {"cells", p.cells},           {"len", p.len},
          {"len_max", p.len_max},       {"sigma_c", p.sigma_c},
          {"sigma_n", p.sigma_n},       {"samples", p.samples},
          {"prune_prob", p.prune_prob}, {"extra_edge_prob", p.extra_edge_prob},
          {"seed", p.seed},             {"out_dir", p.out_dir}};
}

GenerateParams generate_from(const json& j) {
  GenerateParams p;
  p.family = j.at("family").get<std::string>();
  p.nodes = j.at("nodes").get<std::size_t>();
  p.cells = j.at("cells").get<std::size_t>();
  p.len = j.at("len").get<std::size_t>();
  p.len_max = j.at("len_max").get<std::size_t>();
  p.sigma_c = j.at("sigma_c").get<double>();
  p.sigma_n = j.at("sigma_n").get<double>();
  p.samples = j.at("samples").get<std::size_t>();
  p.prune_prob = j.at("prune_prob").get<double>();
  p.extra_edge_prob = j.at("extra_edge_prob").get<double>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.out_dir = j.at("out_dir").get<std::string>();
  return p;
}

void run_generate(const GenerateParams& p) {
  cf_synth_config c;
  cf_synth_config_default(&c);
  c.family = parse_family(p.family);
  c.node_count = p.nodes;
  c.cell_count = p.cells;
  c.min_cell_length = p.len;
  c.max_cell_length = p.len_max ? p.len_max : p.len;
  c.sigma_c = p.sigma_c;
  c.sigma_n = p.sigma_n;
  c.sample_count = p.samples;
  c.prune_prob = p.prune_prob;
  c.extra_edge_prob = p.extra_edge_prob;
  c.seed = p.seed;
  Skeleton skeleton;
  Flows flows;
  Cells truth;
  check(cf_generate(&c, skeleton.out(), flows.out(), truth.out()));
  ensure_dir(p.out_dir);
  check(cf_skeleton_save(skeleton.get(), path_in(p.out_dir, "edges.csv").c_str()));
  check(cf_flows_save(flows.get(), path_in(p.out_dir, "flows.csv").c_str()));
  check(cf_cells_save(truth.get(), path_in(p.out_dir, "truth.csv").c_str()));
  write_json(path_in(p.out_dir, "manifest.json"),
             {{"command", "generate"}, {"version", cf_version()}, {"params", to_json(p)}});
  std::cout << "generated " << cf_skeleton_node_count(skeleton.get()) << " nodes, "
            << cf_skeleton_edge_count(skeleton.get()) << " edges, "
            << cf_cells_count(truth.get()) << " cells -> " << p.out_dir << '\n';
}

// ---------------------------------------------------------------------------
// infer

struct InferParams {
  std::string edges, flows, truth;
  std::string heuristic = "similarity";
  std::size_t candidates = 5;
  int clusters = 4;
  std::optional<std::size_t> max_cells;
  std::optional<double> epsilon;
  std::optional<std::size_t> b2_nnz_budget;
  double atol = 1e-8, btol = 1e-8;
  int max_iterations = 0;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  bool svg = false;
};

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> opt_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

json to_json(const InferParams& p) {
  return {{"edges", absolute(p.edges)},
          {"flows", absolute(p.flows)},
          {"truth", absolute(p.truth)},
          {"heuristic", p.heuristic},
          {"candidates", p.candidates},
          {"clusters", p.clusters},
          {"max_cells", opt(p.max_cells)},
          {"epsilon", opt(p.epsilon)},
          {"b2_nnz_budget", opt(p.b2_nnz_budget)},
          {"atol", p.atol},
          {"btol", p.btol},
          {"max_iterations", p.max_iterations},
          {"seed", p.seed},
          {"out_dir", p.out_dir},
          {"svg", p.svg}};
}

InferParams infer_from(const json& j) {
  InferParams p;
  p.edges = j.at("edges").get<std::string>();
  p.flows = j.at("flows").get<std::string>();
  p.truth = j.at("truth").get<std::string>();
  p.heuristic = j.at("heuristic").get<std::string>();
  p.candidates = j.at("candidates").get<std::size_t>();
  p.clusters = j.at("clusters").get<int>();
  p.max_cells = opt_from<std::size_t>(j, "max_cells");
  p.epsilon = opt_from<double>(j, "epsilon");
  p.b2_nnz_budget = opt_from<std::size_t>(j, "b2_nnz_budget");
  p.atol = j.at("atol").get<double>();
  p.btol = j.at("btol").get<double>();
  p.max_iterations = j.at("max_iterations").get<int>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.out_dir = j.at("out_dir").get<std::string>();
  p.svg = j.at("svg").get<bool>();
  return p;
}

void run_infer(const InferParams& p) {
  Skeleton skeleton;
  Flows flows;
  Cells truth;
  check(cf_skeleton_load(p.edges.c_str(), skeleton.out()));
  check(cf_flows_load(p.flows.c_str(), skeleton.get(), flows.out()));
  if (!p.truth.empty()) check(cf_cells_load(p.truth.c_str(), skeleton.get(), truth.out()));

  cf_infer_config c;
  cf_infer_config_default(&c);
  check(cf_parse_heuristic(p.heuristic.c_str(), &c.heuristic));
  c.candidates = p.candidates;
  c.clusters = p.clusters;
  if (p.max_cells) { c.has_max_cells = 1; c.max_cells = *p.max_cells; }
  if (p.epsilon) { c.has_epsilon = 1; c.epsilon = *p.epsilon; }
  if (p.b2_nnz_budget) { c.has_b2_nnz_budget = 1; c.b2_nnz_budget = *p.b2_nnz_budget; }
  c.solver.atol = p.atol;
  c.solver.btol = p.btol;
  c.solver.max_iterations = p.max_iterations;
  c.seed = p.seed;

  Result result;
  check(cf_infer(skeleton.get(), flows.get(), &c, truth.get(), result.out()));
  Cells found;
  check(cf_result_cells(result.get(), found.out()));

  ensure_dir(p.out_dir);
  check(cf_cells_save(found.get(), path_in(p.out_dir, "cells.csv").c_str()));
  check(cf_result_write_metrics(result.get(), truth.get(), path_in(p.out_dir, "metrics.csv").c_str()));

  const std::size_t iterations = cf_result_iteration_count(result.get());
  json summary = {{"stop_reason", cf_result_stop_reason(result.get())},
                  {"iterations", iterations},
                  {"cells", cf_cells_count(found.get())},
                  {"flow_norm", cf_result_flow_norm(result.get())},
                  {"initial_loss", cf_result_initial_loss(result.get())},
                  {"final_loss", cf_result_final_loss(result.get())}};
  if (truth.get()) {
    double recovery = 0.0;
    check(cf_recovery_accuracy(found.get(), truth.get(), &recovery));
    summary["recovery"] = recovery;
  }
  write_json(path_in(p.out_dir, "summary.json"), summary);
  write_json(path_in(p.out_dir, "manifest.json"),
             {{"command", "infer"}, {"version", cf_version()}, {"params", to_json(p)}});

  if (p.svg) {
    cellflow::cli::Series s{p.heuristic, {{0.0, cf_result_initial_loss(result.get())}}};
    for (std::size_t i = 0; i < iterations; ++i) {
      cf_iteration it;
      check(cf_result_iteration(result.get(), i, &it));
      s.points.emplace_back(static_cast<double>(it.cells_count), it.loss);
    }
    cellflow::cli::write_line_chart(path_in(p.out_dir, "loss.svg"), "loss vs number of cells",
                                    "cells", "harmonic loss", {s});
  }
  std::cout << "added " << iterations << " cells, loss " << cf_result_final_loss(result.get())
            << ", stop: " << cf_result_stop_reason(result.get()) << '\n';
}

// ---------------------------------------------------------------------------
// decompose

struct DecomposeParams {
  std::string edges, flows, cells;
  double atol = 1e-8, btol = 1e-8;
  std::string out_dir = ".";
};

json to_json(const DecomposeParams& p) {
  return {{"edges", absolute(p.edges)}, {"flows", absolute(p.flows)},
          {"cells", absolute(p.cells)}, {"atol", p.atol},
          {"btol", p.btol},             {"out_dir", p.out_dir}};
}

DecomposeParams decompose_from(const json& j) {
  DecomposeParams p;
  p.edges = j.at("edges").get<std::string>();
  p.flows = j.at("flows").get<std::string>();
  p.cells = j.at("cells").get<std::string>();
  p.atol = j.at("atol").get<double>();
  p.btol = j.at("btol").get<double>();
  p.out_dir = j.at("out_dir").get<std::string>();
  return p;
}

void run_decompose(const DecomposeParams& p) {
  Skeleton skeleton;
  Flows flows;
  Cells cells;
  check(cf_skeleton_load(p.edges.c_str(), skeleton.out()));
  check(cf_flows_load(p.flows.c_str(), skeleton.get(), flows.out()));
  if (!p.cells.empty()) check(cf_cells_load(p.cells.c_str(), skeleton.get(), cells.out()));
  cf_solver_config s;
  cf_solver_config_default(&s);
  s.atol = p.atol;
  s.btol = p.btol;
  ensure_dir(p.out_dir);
  check(cf_decompose(skeleton.get(), flows.get(), cells.get(), &s,
                     path_in(p.out_dir, "decomposition.csv").c_str()));
  write_json(path_in(p.out_dir, "manifest.json"),
             {{"command", "decompose"}, {"version", cf_version()}, {"params", to_json(p)}});
  std::cout << "wrote " << path_in(p.out_dir, "decomposition.csv") << '\n';
}

// ---------------------------------------------------------------------------
// benchmark

struct BenchmarkParams {
  std::vector<std::size_t> triangulation_sizes{100, 1000, 10000};
  std::vector<std::size_t> smallworld_sizes{100, 1000};
  std::size_t seeds = 1;
  std::uint64_t seed = 0;
  std::size_t cells = 4;
  std::size_t samples = 5;
  std::size_t candidates = 5;
  double sigma_n = 0.75;
  std::string out_dir = ".";
  bool svg = false;
};

json to_json(const BenchmarkParams& p) {
  return {{"triangulation_sizes", p.triangulation_sizes},
          {"smallworld_sizes", p.smallworld_sizes},
          {"seeds", p.seeds},
          {"seed", p.seed},
          {"cells", p.cells},
          {"samples", p.samples},
          {"candidates", p.candidates},
          {"sigma_n", p.sigma_n},
          {"out_dir", p.out_dir},
          {"svg", p.svg}};
}

BenchmarkParams benchmark_from(const json& j) {
  BenchmarkParams p;
  p.triangulation_sizes = j.at("triangulation_sizes").get<std::vector<std::size_t>>();
  p.smallworld_sizes = j.at("smallworld_sizes").get<std::vector<std::size_t>>();
  p.seeds = j.at("seeds").get<std::size_t>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.cells = j.at("cells").get<std::size_t>();
  p.samples = j.at("samples").get<std::size_t>();
  p.candidates = j.at("candidates").get<std::size_t>();
  p.sigma_n = j.at("sigma_n").get<double>();
  p.out_dir = j.at("out_dir").get<std::string>();
  p.svg = j.at("svg").get<bool>();
  return p;
}

struct BenchmarkRow {
  std::string family;
  std::size_t nodes = 0, edges = 0;
  std::uint64_t seed = 0;
  double wall_time_ms = 0.0;
  std::size_t iterations = 0;
  std::string status = "ok";
};

BenchmarkRow bench_one(const BenchmarkParams& p, cf_family family, std::size_t size,
                       std::uint64_t seed) {
  BenchmarkRow row;
  row.family = family_name(family);
  row.nodes = size;
  row.seed = seed;
  cf_synth_config c;
  cf_synth_config_default(&c);
  c.family = family;
  c.node_count = size;
  c.cell_count = p.cells;
  // Sparse small-world rings rarely close short cycles; allow up to a full lap.
  c.min_cell_length = family == CF_FAMILY_SMALLWORLD ? 3 : 6;
  c.max_cell_length = family == CF_FAMILY_SMALLWORLD ? size : 6;
  c.sample_count = p.samples;
  c.sigma_n = p.sigma_n;
  c.seed = seed;
  Skeleton skeleton;
  Flows flows;
  if (cf_generate(&c, skeleton.out(), flows.out(), nullptr) != CF_OK) {
    row.status = std::string("generation failed: ") + cf_last_error();
    return row;
  }
  row.nodes = cf_skeleton_node_count(skeleton.get());
  row.edges = cf_skeleton_edge_count(skeleton.get());
  cf_infer_config ic;
  cf_infer_config_default(&ic);
  ic.heuristic = CF_HEURISTIC_SIMILARITY;
  ic.candidates = p.candidates;
  ic.has_max_cells = 1;
  ic.max_cells = p.cells;
  ic.seed = seed;
  Result result;
  const auto t0 = std::chrono::steady_clock::now();
  const cf_status st = cf_infer(skeleton.get(), flows.get(), &ic, nullptr, result.out());
  row.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (st != CF_OK) {
    row.status = std::string("inference failed: ") + cf_last_error();
    return row;
  }
  row.iterations = cf_result_iteration_count(result.get());
  return row;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

void run_benchmark(const BenchmarkParams& p) {
  std::vector<BenchmarkRow> rows;
  const std::pair<cf_family, const std::vector<std::size_t>*> plan[] = {
      {CF_FAMILY_TRIANGULATION, &p.triangulation_sizes},
      {CF_FAMILY_SMALLWORLD, &p.smallworld_sizes}};
  for (const auto& [family, sizes] : plan) {
    for (std::size_t size : *sizes) {
      for (std::size_t k = 0; k < p.seeds; ++k) {
        rows.push_back(bench_one(p, family, size, p.seed + k));
        const auto& r = rows.back();
        std::cerr << r.family << " n=" << r.nodes << " e=" << r.edges << " seed=" << r.seed
                  << " " << r.wall_time_ms << " ms " << r.status << '\n';
      }
    }
  }
  ensure_dir(p.out_dir);
  const std::string path = path_in(p.out_dir, "benchmark.csv");
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << "family,nodes,edges,seed,iterations,wall_time_ms,status\n";
    char buf[64];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%.17g", r.wall_time_ms);
      out << r.family << ',' << r.nodes << ',' << r.edges << ',' << r.seed << ',' << r.iterations
          << ',' << buf << ',' << csv_field(r.status) << '\n';
    }
    if (!out) throw Failure{CF_ERR_IO, "failed writing " + path};
  }
  write_json(path_in(p.out_dir, "manifest.json"),
             {{"command", "benchmark"}, {"version", cf_version()}, {"params", to_json(p)}});
  if (p.svg) {
    std::vector<cellflow::cli::Series> series;
    for (const char* fam : {"triangulation", "smallworld"}) {
      cellflow::cli::Series s{fam, {}};
      for (const auto& r : rows) {
        if (r.family == fam && r.status == "ok" && r.edges > 0 && r.wall_time_ms > 0) {
          s.points.emplace_back(std::log10(static_cast<double>(r.edges)), std::log10(r.wall_time_ms));
        }
      }
      if (!s.points.empty()) series.push_back(std::move(s));
    }
    cellflow::cli::write_line_chart(path_in(p.out_dir, "runtime.svg"), "runtime vs graph size",
                                    "log10 edges", "log10 wall time [ms]", series);
  }
  std::cout << "wrote " << rows.size() << " rows to " << path << '\n';
}

// ---------------------------------------------------------------------------
// replay

void run_replay(const std::string& manifest_path, const std::string& out_dir) {
  std::ifstream in(manifest_path);
  if (!in) throw Failure{CF_ERR_IO, "cannot open " + manifest_path};
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception& e) {
    throw Failure{CF_ERR_PARSE, "manifest: " + std::string(e.what())};
  }
  try {
    json params = m.at("params");
    if (!out_dir.empty()) params["out_dir"] = out_dir;
    const std::string cmd = m.at("command").get<std::string>();
    if (cmd == "generate") return run_generate(generate_from(params));
    if (cmd == "infer") return run_infer(infer_from(params));
    if (cmd == "decompose") return run_decompose(decompose_from(params));
    if (cmd == "benchmark") return run_benchmark(benchmark_from(params));
    throw Failure{CF_ERR_PARSE, "manifest: unknown command '" + cmd + "'"};
  } catch (const json::exception& e) {
    throw Failure{CF_ERR_PARSE, "manifest: " + std::string(e.what())};
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Infer polygonal 2-cells from edge flows."};
  app.require_subcommand(1);

  GenerateParams gen;
  auto* g = app.add_subcommand("generate", "Write a synthetic instance (edges, flows, truth).");
  g->add_option("--family", gen.family, "triangulation or smallworld")
      ->check(CLI::IsMember({"triangulation", "smallworld"}))
      ->capture_default_str();
  g->add_option("--nodes", gen.nodes, "Number of points / ring nodes")->capture_default_str();
  g->add_option("--cells", gen.cells, "Number of planted cells")->capture_default_str();
  g->add_option("--len", gen.len, "Planted cell length (minimum if --len-max is given)")
      ->capture_default_str();
  g->add_option("--len-max", gen.len_max, "Maximum planted cell length");
  g->add_option("--sigma-c", gen.sigma_c, "Cell flow standard deviation")->capture_default_str();
  g->add_option("--sigma-n", gen.sigma_n, "Edge noise standard deviation")->capture_default_str();
  g->add_option("--samples", gen.samples, "Number of flow samples")->capture_default_str();
  g->add_option("--prune-prob", gen.prune_prob, "Deletion probability (triangulation)")
      ->capture_default_str();
  g->add_option("--extra-edge-prob", gen.extra_edge_prob, "Chord probability (smallworld)")
      ->capture_default_str();
  g->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  g->add_option("--out-dir", gen.out_dir, "Output directory")->capture_default_str();

  InferParams inf;
  std::size_t max_cells = 0, budget = 0;
  double epsilon = 0.0;
  auto* i = app.add_subcommand("infer", "Greedily add cells to explain the flows.");
  i->add_option("--edges", inf.edges, "Edge list CSV")->required();
  i->add_option("--flows", inf.flows, "Flow CSV")->required();
  i->add_option("--truth", inf.truth, "Ground-truth cells (adds recovery)");
  i->add_option("--heuristic", inf.heuristic, "max, similarity, triangles or true-cells")
      ->capture_default_str();
  i->add_option("--candidates", inf.candidates, "Candidates per iteration (m)")->capture_default_str();
  i->add_option("--clusters", inf.clusters, "k-means clusters (k, similarity)")->capture_default_str();
  auto* o_max = i->add_option("--max-cells", max_cells, "Stop after this many cells (n)");
  auto* o_eps = i->add_option("--epsilon", epsilon, "Stop once loss < epsilon");
  auto* o_nnz = i->add_option("--b2-nnz-budget", budget, "Cap on nonzeros of the cell boundary");
  i->add_option("--atol", inf.atol, "Solver atol")->capture_default_str();
  i->add_option("--btol", inf.btol, "Solver btol")->capture_default_str();
  i->add_option("--max-iter", inf.max_iterations, "Solver iteration cap (0: automatic)");
  i->add_option("--seed", inf.seed, "Random seed (k-means)")->capture_default_str();
  i->add_option("--out-dir", inf.out_dir, "Output directory")->capture_default_str();
  i->add_flag("--svg", inf.svg, "Also render loss.svg");

  DecomposeParams dec;
  auto* d = app.add_subcommand("decompose", "Per-sample gradient/curl/harmonic norms.");
  d->add_option("--edges", dec.edges, "Edge list CSV")->required();
  d->add_option("--flows", dec.flows, "Flow CSV")->required();
  d->add_option("--cells", dec.cells, "Cells CSV (default: none)");
  d->add_option("--atol", dec.atol, "Solver atol")->capture_default_str();
  d->add_option("--btol", dec.btol, "Solver btol")->capture_default_str();
  d->add_option("--out-dir", dec.out_dir, "Output directory")->capture_default_str();

  BenchmarkParams bench;
  auto* b = app.add_subcommand("benchmark", "Runtime against graph size.");
  auto* o_tri = b->add_option("--triangulation-sizes", bench.triangulation_sizes,
                              "Node counts, default 100,1000,10000 (no value skips)")
      ->delimiter(',')
      ->expected(0, CLI::detail::expected_max_vector_size);
  auto* o_sw = b->add_option("--smallworld-sizes", bench.smallworld_sizes,
                             "Node counts, default 100,1000 (no value skips)")
      ->delimiter(',')
      ->expected(0, CLI::detail::expected_max_vector_size);
  b->add_option("--seeds", bench.seeds, "Seeds per size")->capture_default_str();
  b->add_option("--seed", bench.seed, "First seed")->capture_default_str();
  b->add_option("--cells", bench.cells, "Planted cells and cells inferred")->capture_default_str();
  b->add_option("--samples", bench.samples, "Flow samples")->capture_default_str();
  b->add_option("--candidates", bench.candidates, "Candidates per iteration")->capture_default_str();
  b->add_option("--sigma-n", bench.sigma_n, "Edge noise")->capture_default_str();
  b->add_option("--out-dir", bench.out_dir, "Output directory")->capture_default_str();
  b->add_flag("--svg", bench.svg, "Also render runtime.svg");

  std::string manifest, replay_out;
  auto* r = app.add_subcommand("replay", "Re-run a command from its manifest.json.");
  r->add_option("--manifest", manifest, "Manifest path")->required();
  r->add_option("--out-dir", replay_out, "Override the output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(CF_ERR_INVALID_ARGUMENT);
  }

  try {
    if (*g) {
      run_generate(gen);
    } else if (*i) {
      if (*o_max) inf.max_cells = max_cells;
      if (*o_eps) inf.epsilon = epsilon;
      if (*o_nnz) inf.b2_nnz_budget = budget;
      run_infer(inf);
    } else if (*d) {
      run_decompose(dec);
    } else if (*b) {
      // a size flag given without values reads as one empty string
      for (auto [opt, sizes] : {std::pair{o_tri, &bench.triangulation_sizes},
                                std::pair{o_sw, &bench.smallworld_sizes}}) {
        const auto& res = opt->results();
        if (res.size() == 1 && res[0].empty()) sizes->clear();
      }
      run_benchmark(bench);
    } else if (*r) {
      run_replay(manifest, replay_out);
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.code;
  }
  return 0;
}
