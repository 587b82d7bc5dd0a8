#include "cellflow/cellflow.h"

#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "cellflow/complex.hpp"
#include "cellflow/errors.hpp"
#include "cellflow/hodge.hpp"
#include "cellflow/inference.hpp"
#include "cellflow/io.hpp"
#include "cellflow/synth.hpp"

using namespace cellflow;

struct cf_skeleton {
  Skeleton value;
};

struct cf_flows {
  FlowMatrix value;
};

struct cf_cells {
  std::vector<TwoCell> value;
};

struct cf_result {
  InferenceResult value;
};

namespace {

thread_local std::string last_error;

cf_status fail(cf_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Maps the library's exception hierarchy onto status codes.
template <class F>
cf_status guarded(F&& body) {
  try {
    body();
    return CF_OK;
  } catch (const ParseError& e) {
    return fail(CF_ERR_PARSE, e.what());
  } catch (const SolverError& e) {
    return fail(CF_ERR_SOLVER, e.what());
  } catch (const GenerationError& e) {
    return fail(CF_ERR_GENERATION, e.what());
  } catch (const IoError& e) {
    return fail(CF_ERR_IO, e.what());
  } catch (const InvalidInput& e) {
    return fail(CF_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CF_ERR_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* message) {
  if (!ok) throw InvalidInput(message);
}

SolverConfig to_solver(const cf_solver_config& c) {
  SolverConfig s;
  s.atol = c.atol;
  s.btol = c.btol;
  s.max_iterations = c.max_iterations;
  s.threads = c.threads;
  return s;
}

}  // namespace

extern "C" {

const char* cf_version(void) { return "0.1.0"; }

const char* cf_last_error(void) { return last_error.c_str(); }

cf_status cf_skeleton_create(size_t node_count, const uint32_t* tails, const uint32_t* heads,
                             size_t edge_count, cf_skeleton** out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    require(edge_count == 0 || (tails && heads), "edge arrays are null");
    std::vector<Edge> edges(edge_count);
    for (size_t i = 0; i < edge_count; ++i) edges[i] = {tails[i], heads[i]};
    *out = new cf_skeleton{Skeleton(node_count, std::move(edges))};
  });
}

cf_status cf_skeleton_load(const char* path, cf_skeleton** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new cf_skeleton{io::load_edges(path)};
  });
}

cf_status cf_skeleton_save(const cf_skeleton* skeleton, const char* path) {
  return guarded([&] {
    require(skeleton && path, "null argument");
    io::save_edges(path, skeleton->value);
  });
}

size_t cf_skeleton_node_count(const cf_skeleton* skeleton) {
  return skeleton ? skeleton->value.node_count() : 0;
}

size_t cf_skeleton_edge_count(const cf_skeleton* skeleton) {
  return skeleton ? skeleton->value.edge_count() : 0;
}

cf_status cf_skeleton_edge(const cf_skeleton* skeleton, size_t edge, uint32_t* tail,
                           uint32_t* head) {
  return guarded([&] {
    require(skeleton && tail && head, "null argument");
    require(edge < skeleton->value.edge_count(), "edge index out of range");
    const auto& e = skeleton->value.edge(static_cast<EdgeId>(edge));
    *tail = e.tail;
    *head = e.head;
  });
}

void cf_skeleton_destroy(cf_skeleton* skeleton) { delete skeleton; }

cf_status cf_flows_create(size_t edge_count, size_t sample_count, const double* values,
                          cf_flows** out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    require(edge_count * sample_count == 0 || values, "values are null");
    auto flows = std::make_unique<cf_flows>();
    flows->value = Eigen::Map<const FlowMatrix>(values, static_cast<Eigen::Index>(edge_count),
                                                static_cast<Eigen::Index>(sample_count));
    require(flows->value.allFinite(), "flows must be finite");
    *out = flows.release();
  });
}

cf_status cf_flows_load(const char* path, const cf_skeleton* skeleton, cf_flows** out) {
  return guarded([&] {
    require(path && skeleton && out, "null argument");
    *out = new cf_flows{io::load_flows(path, skeleton->value.edge_count())};
  });
}

cf_status cf_flows_save(const cf_flows* flows, const char* path) {
  return guarded([&] {
    require(flows && path, "null argument");
    io::save_flows(path, flows->value);
  });
}

size_t cf_flows_edge_count(const cf_flows* flows) {
  return flows ? static_cast<size_t>(flows->value.rows()) : 0;
}

size_t cf_flows_sample_count(const cf_flows* flows) {
  return flows ? static_cast<size_t>(flows->value.cols()) : 0;
}

const double* cf_flows_data(const cf_flows* flows) { return flows ? flows->value.data() : nullptr; }

void cf_flows_destroy(cf_flows* flows) { delete flows; }

cf_status cf_cells_create(const cf_skeleton* skeleton, const uint32_t* nodes,
                          const size_t* lengths, size_t cell_count, cf_cells** out) {
  return guarded([&] {
    require(skeleton && out, "null argument");
    require(cell_count == 0 || (nodes && lengths), "cell arrays are null");
    auto cells = std::make_unique<cf_cells>();
    CellKeySet seen;
    size_t offset = 0;
    for (size_t i = 0; i < cell_count; ++i) {
      TwoCell cell = canonicalize(skeleton->value, std::span(nodes + offset, lengths[i]));
      offset += lengths[i];
      if (!seen.insert(cell.key()).second) throw InvalidInput("duplicate cell " + cell.to_string());
      cells->value.push_back(std::move(cell));
    }
    *out = cells.release();
  });
}

cf_status cf_cells_load(const char* path, const cf_skeleton* skeleton, cf_cells** out) {
  return guarded([&] {
    require(path && skeleton && out, "null argument");
    *out = new cf_cells{io::load_cells(path, skeleton->value)};
  });
}

cf_status cf_cells_save(const cf_cells* cells, const char* path) {
  return guarded([&] {
    require(cells && path, "null argument");
    io::save_cells(path, cells->value);
  });
}

size_t cf_cells_count(const cf_cells* cells) { return cells ? cells->value.size() : 0; }

size_t cf_cells_length(const cf_cells* cells, size_t index) {
  return cells && index < cells->value.size() ? cells->value[index].length() : 0;
}

cf_status cf_cells_nodes(const cf_cells* cells, size_t index, uint32_t* out, size_t capacity) {
  return guarded([&] {
    require(cells && out, "null argument");
    require(index < cells->value.size(), "cell index out of range");
    const auto& nodes = cells->value[index].nodes();
    require(capacity >= nodes.size(), "output buffer too small");
    std::copy(nodes.begin(), nodes.end(), out);
  });
}

cf_status cf_recovery_accuracy(const cf_cells* found, const cf_cells* truth, double* out) {
  return guarded([&] {
    require(found && truth && out, "null argument");
    *out = recovery_accuracy(found->value, truth->value);
  });
}

void cf_cells_destroy(cf_cells* cells) { delete cells; }

void cf_synth_config_default(cf_synth_config* config) {
  if (!config) return;
  const SynthConfig d;
  config->family = CF_FAMILY_TRIANGULATION;
  config->node_count = d.node_count;
  config->cell_count = d.cell_count;
  config->min_cell_length = d.min_cell_length;
  config->max_cell_length = d.max_cell_length;
  config->sigma_c = d.sigma_c;
  config->sigma_n = d.sigma_n;
  config->sample_count = d.samples;
  config->prune_prob = d.prune_prob;
  config->extra_edge_prob = d.extra_edge_prob;
  config->seed = d.seed;
}

cf_status cf_generate(const cf_synth_config* config, cf_skeleton** skeleton, cf_flows** flows,
                      cf_cells** truth) {
  return guarded([&] {
    require(config != nullptr, "config is null");
    require(config->family == CF_FAMILY_TRIANGULATION || config->family == CF_FAMILY_SMALLWORLD,
            "unknown graph family");
    SynthConfig c;
    c.family = config->family == CF_FAMILY_SMALLWORLD ? GraphFamily::SmallWorld
                                                      : GraphFamily::Triangulation;
    c.node_count = config->node_count;
    c.cell_count = config->cell_count;
    c.min_cell_length = config->min_cell_length;
    c.max_cell_length = config->max_cell_length;
    c.sigma_c = config->sigma_c;
    c.sigma_n = config->sigma_n;
    c.samples = config->sample_count;
    c.prune_prob = config->prune_prob;
    c.extra_edge_prob = config->extra_edge_prob;
    c.seed = config->seed;
    SyntheticComplex generated = generate_complex(c);
    auto f = std::make_unique<cf_flows>(cf_flows{sample_flows(generated.complex, c)});
    auto t = std::make_unique<cf_cells>(cf_cells{generated.complex.cells()});
    auto s = std::make_unique<cf_skeleton>(cf_skeleton{generated.complex.skeleton()});
    if (skeleton) *skeleton = s.release();
    if (flows) *flows = f.release();
    if (truth) *truth = t.release();
  });
}

void cf_solver_config_default(cf_solver_config* config) {
  if (!config) return;
  const SolverConfig d;
  config->atol = d.atol;
  config->btol = d.btol;
  config->max_iterations = d.max_iterations;
  config->threads = d.threads;
}

void cf_infer_config_default(cf_infer_config* config) {
  if (!config) return;
  const InferenceConfig d;
  config->heuristic = CF_HEURISTIC_SIMILARITY;
  config->candidates = d.candidates;
  config->clusters = d.clusters;
  config->has_max_cells = 0;
  config->max_cells = 0;
  config->has_epsilon = 0;
  config->epsilon = 0.0;
  config->has_b2_nnz_budget = 0;
  config->b2_nnz_budget = 0;
  cf_solver_config_default(&config->solver);
  config->seed = d.seed;
}

cf_status cf_parse_heuristic(const char* name, cf_heuristic* out) {
  return guarded([&] {
    require(name && out, "null argument");
    const auto h = parse_heuristic(name);
    if (!h) throw InvalidInput(std::string("unknown heuristic '") + name + "'");
    *out = static_cast<cf_heuristic>(static_cast<int>(*h));
  });
}

cf_status cf_infer(const cf_skeleton* skeleton, const cf_flows* flows,
                   const cf_infer_config* config, const cf_cells* truth, cf_result** out) {
  return guarded([&] {
    require(skeleton && flows && config && out, "null argument");
    require(config->heuristic >= CF_HEURISTIC_MAX && config->heuristic <= CF_HEURISTIC_TRUE_CELLS,
            "unknown heuristic");
    InferenceConfig c;
    c.heuristic = static_cast<Heuristic>(static_cast<int>(config->heuristic));
    c.candidates = config->candidates;
    c.clusters = config->clusters;
    if (config->has_max_cells) c.max_cells = config->max_cells;
    if (config->has_epsilon) c.epsilon = config->epsilon;
    if (config->has_b2_nnz_budget) c.b2_nnz_budget = config->b2_nnz_budget;
    c.solver = to_solver(config->solver);
    c.seed = config->seed;
    std::span<const TwoCell> gt;
    if (truth) gt = truth->value;
    *out = new cf_result{infer(skeleton->value, flows->value, c, gt)};
  });
}

size_t cf_result_iteration_count(const cf_result* result) {
  return result ? result->value.history.size() : 0;
}

cf_status cf_result_iteration(const cf_result* result, size_t index, cf_iteration* out) {
  return guarded([&] {
    require(result && out, "null argument");
    require(index < result->value.history.size(), "iteration index out of range");
    const auto& r = result->value.history[index];
    *out = {r.loss, r.cells_count, r.b2_nnz, r.wall_time_ms};
  });
}

double cf_result_initial_loss(const cf_result* result) {
  return result ? result->value.initial_loss : 0.0;
}

double cf_result_final_loss(const cf_result* result) {
  return result ? result->value.final_loss() : 0.0;
}

double cf_result_flow_norm(const cf_result* result) {
  return result ? result->value.flow_norm : 0.0;
}

const char* cf_result_stop_reason(const cf_result* result) {
  return result ? to_string(result->value.stop).data() : "";
}

cf_status cf_result_cells(const cf_result* result, cf_cells** out) {
  return guarded([&] {
    require(result && out, "null argument");
    *out = new cf_cells{result->value.complex.cells()};
  });
}

cf_status cf_result_write_metrics(const cf_result* result, const cf_cells* truth,
                                  const char* path) {
  return guarded([&] {
    require(result && path, "null argument");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(std::string("cannot open ") + path + " for writing");
    if (truth) {
      io::write_metrics(out, result->value, std::span<const TwoCell>(truth->value));
    } else {
      io::write_metrics(out, result->value);
    }
    out.flush();
    if (!out) throw IoError(std::string("failed writing ") + path);
  });
}

void cf_result_destroy(cf_result* result) { delete result; }

cf_status cf_decompose(const cf_skeleton* skeleton, const cf_flows* flows, const cf_cells* cells,
                       const cf_solver_config* solver, const char* path) {
  return guarded([&] {
    require(skeleton && flows && path, "null argument");
    SolverConfig s;
    if (solver) s = to_solver(*solver);
    CellComplex complex(skeleton->value, cells ? cells->value : std::vector<TwoCell>{});
    const Decomposition parts = decompose(complex, flows->value, s);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(std::string("cannot open ") + path + " for writing");
    io::write_decomposition(out, flows->value, parts);
    out.flush();
    if (!out) throw IoError(std::string("failed writing ") + path);
  });
}

}  // extern "C"
