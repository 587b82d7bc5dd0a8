#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cellflow/complex.hpp"
#include "cellflow/hodge.hpp"
#include "cellflow/inference.hpp"

namespace cellflow::io {

// CSV formats. Readers throw ParseError with a line number; the path
// overloads throw IoError when the file cannot be opened.
//
//   edges:   "u,v" header, then tail,head per edge with tail < head
//   flows:   "e,f1,...,fs" header, then e,values per edge in edge order
//   cells:   one canonical node cycle per line, comma separated, no header
//   metrics: iteration,cell,loss,cells_count,b2_nnz,wall_time_ms[,recovery]

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Node count is one past the largest endpoint.
Skeleton read_edges(std::istream& in);
void write_edges(std::ostream& out, const Skeleton& skeleton);

FlowMatrix read_flows(std::istream& in, std::size_t edge_count);
void write_flows(std::ostream& out, const FlowMatrix& flows);

/// Each line is canonicalized against `skeleton`.
std::vector<TwoCell> read_cells(std::istream& in, const Skeleton& skeleton);
void write_cells(std::ostream& out, std::span<const TwoCell> cells);

/// Row 0 is the empty complex; row i the state after the i-th added cell.
/// `recovery` adds a column with recovery_after(result, truth, i).
void write_metrics(std::ostream& out, const InferenceResult& result,
                   std::optional<std::span<const TwoCell>> truth = std::nullopt);

struct MetricsRow {
  std::size_t iteration;
  std::string cell;  ///< '-' joined nodes, empty on row 0
  double loss;
  std::size_t cells_count;
  std::size_t b2_nnz;
  double wall_time_ms;
  std::optional<double> recovery;
};

std::vector<MetricsRow> read_metrics(std::istream& in);

/// Per-sample norms: sample,grad,curl,harm,total,pythagoras_check where the
/// last column is |grad^2 + curl^2 + harm^2 - total^2| / max(total^2, tiny).
void write_decomposition(std::ostream& out, const FlowMatrix& flows, const Decomposition& parts);

Skeleton load_edges(const std::filesystem::path& path);
void save_edges(const std::filesystem::path& path, const Skeleton& skeleton);
FlowMatrix load_flows(const std::filesystem::path& path, std::size_t edge_count);
void save_flows(const std::filesystem::path& path, const FlowMatrix& flows);
std::vector<TwoCell> load_cells(const std::filesystem::path& path, const Skeleton& skeleton);
void save_cells(const std::filesystem::path& path, std::span<const TwoCell> cells);

}  // namespace cellflow::io
