#include "cellflow/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string_view>

#include "cellflow/errors.hpp"

namespace cellflow::io {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(std::string_view what, std::size_t line, std::string_view detail) {
  throw ParseError(std::string(what) + " line " + std::to_string(line) + ": " +
                   std::string(detail));
}

template <class T>
T parse_uint(std::string_view field, std::string_view what, std::size_t line) {
  field = trim(field);
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    fail(what, line, "expected a non-negative integer, got '" + std::string(field) + "'");
  }
  return value;
}

double parse_real(std::string_view field, std::string_view what, std::size_t line) {
  field = trim(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    fail(what, line, "expected a number, got '" + std::string(field) + "'");
  }
  if (!std::isfinite(value)) fail(what, line, "non-finite value");
  return value;
}

bool next_line(std::istream& in, std::string& line, std::size_t& number) {
  if (!std::getline(in, line)) return false;
  ++number;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void check_written(std::ostream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw InvalidInput("cannot format number");
  return std::string(buf, ptr);
}

Skeleton read_edges(std::istream& in) {
  constexpr std::string_view what = "edge list";
  std::string line;
  std::size_t number = 0;
  if (!next_line(in, line, number) || trim(line) != "u,v") {
    fail(what, 1, "expected header 'u,v'");
  }
  std::vector<Edge> edges;
  std::size_t node_count = 0;
  while (next_line(in, line, number)) {
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 2) fail(what, number, "expected 2 fields");
    const auto u = parse_uint<NodeId>(fields[0], what, number);
    const auto v = parse_uint<NodeId>(fields[1], what, number);
    if (u >= v) fail(what, number, "tail must be smaller than head");
    edges.push_back({u, v});
    node_count = std::max<std::size_t>(node_count, std::size_t{v} + 1);
  }
  try {
    return Skeleton(node_count, std::move(edges));
  } catch (const InvalidInput& e) {
    throw ParseError(std::string("edge list: ") + e.what());
  }
}

void write_edges(std::ostream& out, const Skeleton& skeleton) {
  out << "u,v\n";
  for (const auto& e : skeleton.edges()) out << e.tail << ',' << e.head << '\n';
}

FlowMatrix read_flows(std::istream& in, std::size_t edge_count) {
  constexpr std::string_view what = "flow file";
  std::string line;
  std::size_t number = 0;
  if (!next_line(in, line, number)) fail(what, 1, "missing header");
  const auto header = split(trim(line), ',');
  if (header.size() < 2 || trim(header[0]) != "e") {
    fail(what, 1, "expected header 'e,f1,...,fs'");
  }
  const std::size_t samples = header.size() - 1;
  for (std::size_t j = 0; j < samples; ++j) {
    if (trim(header[j + 1]) != "f" + std::to_string(j + 1)) {
      fail(what, 1, "expected column 'f" + std::to_string(j + 1) + "'");
    }
  }
  FlowMatrix flows(static_cast<Eigen::Index>(edge_count), static_cast<Eigen::Index>(samples));
  std::size_t row = 0;
  while (next_line(in, line, number)) {
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != samples + 1) {
      fail(what, number, "expected " + std::to_string(samples + 1) + " fields");
    }
    if (row >= edge_count) fail(what, number, "more rows than edges");
    if (parse_uint<std::size_t>(fields[0], what, number) != row) {
      fail(what, number, "expected edge index " + std::to_string(row));
    }
    for (std::size_t j = 0; j < samples; ++j) {
      flows(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j)) =
          parse_real(fields[j + 1], what, number);
    }
    ++row;
  }
  if (row != edge_count) {
    fail(what, number, "found " + std::to_string(row) + " rows for " +
                           std::to_string(edge_count) + " edges");
  }
  return flows;
}

void write_flows(std::ostream& out, const FlowMatrix& flows) {
  out << 'e';
  for (Eigen::Index j = 0; j < flows.cols(); ++j) out << ",f" << j + 1;
  out << '\n';
  for (Eigen::Index e = 0; e < flows.rows(); ++e) {
    out << e;
    for (Eigen::Index j = 0; j < flows.cols(); ++j) out << ',' << format_double(flows(e, j));
    out << '\n';
  }
}

std::vector<TwoCell> read_cells(std::istream& in, const Skeleton& skeleton) {
  constexpr std::string_view what = "cells file";
  std::vector<TwoCell> cells;
  CellKeySet seen;
  std::string line;
  std::size_t number = 0;
  std::vector<NodeId> nodes;
  while (next_line(in, line, number)) {
    if (trim(line).empty()) continue;
    nodes.clear();
    for (auto field : split(trim(line), ',')) {
      const auto v = parse_uint<NodeId>(field, what, number);
      if (v >= skeleton.node_count()) fail(what, number, "node " + std::to_string(v) + " out of range");
      nodes.push_back(v);
    }
    try {
      TwoCell cell = canonicalize(skeleton, nodes);
      if (!seen.insert(cell.key()).second) fail(what, number, "duplicate cell");
      cells.push_back(std::move(cell));
    } catch (const InvalidInput& e) {
      fail(what, number, e.what());
    }
  }
  return cells;
}

void write_cells(std::ostream& out, std::span<const TwoCell> cells) {
  for (const auto& c : cells) out << c.to_string(',') << '\n';
}

void write_metrics(std::ostream& out, const InferenceResult& result,
                   std::optional<std::span<const TwoCell>> truth) {
  out << "iteration,cell,loss,cells_count,b2_nnz,wall_time_ms";
  if (truth) out << ",recovery";
  out << '\n';
  out << "0,," << format_double(result.initial_loss) << ",0,0,0";
  if (truth) out << ',' << format_double(recovery_after(result, *truth, 0));
  out << '\n';
  for (std::size_t i = 0; i < result.history.size(); ++i) {
    const auto& r = result.history[i];
    out << i + 1 << ',' << r.cell.to_string('-') << ',' << format_double(r.loss) << ','
        << r.cells_count << ',' << r.b2_nnz << ',' << format_double(r.wall_time_ms);
    if (truth) out << ',' << format_double(recovery_after(result, *truth, i + 1));
    out << '\n';
  }
}

std::vector<MetricsRow> read_metrics(std::istream& in) {
  constexpr std::string_view what = "metrics file";
  std::string line;
  std::size_t number = 0;
  if (!next_line(in, line, number)) fail(what, 1, "missing header");
  const std::string_view base = "iteration,cell,loss,cells_count,b2_nnz,wall_time_ms";
  const auto header = trim(line);
  bool with_recovery = false;
  if (header == base) {
    with_recovery = false;
  } else if (header == std::string(base) + ",recovery") {
    with_recovery = true;
  } else {
    fail(what, 1, "unexpected header");
  }
  const std::size_t width = with_recovery ? 7 : 6;
  std::vector<MetricsRow> rows;
  while (next_line(in, line, number)) {
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != width) fail(what, number, "expected " + std::to_string(width) + " fields");
    MetricsRow row{parse_uint<std::size_t>(f[0], what, number),
                   std::string(trim(f[1])),
                   parse_real(f[2], what, number),
                   parse_uint<std::size_t>(f[3], what, number),
                   parse_uint<std::size_t>(f[4], what, number),
                   parse_real(f[5], what, number),
                   std::nullopt};
    if (with_recovery) row.recovery = parse_real(f[6], what, number);
    if (row.iteration != rows.size()) fail(what, number, "iterations must count up from 0");
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_decomposition(std::ostream& out, const FlowMatrix& flows, const Decomposition& parts) {
  out << "sample,grad,curl,harm,total,pythagoras_check\n";
  for (Eigen::Index j = 0; j < flows.cols(); ++j) {
    const double g = parts.gradient.col(j).norm();
    const double c = parts.curl.col(j).norm();
    const double h = parts.harmonic.col(j).norm();
    const double t = flows.col(j).norm();
    const double t2 = t * t;
    const double check =
        std::abs(g * g + c * c + h * h - t2) / std::max(t2, std::numeric_limits<double>::min());
    out << j + 1 << ',' << format_double(g) << ',' << format_double(c) << ','
        << format_double(h) << ',' << format_double(t) << ',' << format_double(check) << '\n';
  }
}

Skeleton load_edges(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_edges(in);
}

void save_edges(const std::filesystem::path& path, const Skeleton& skeleton) {
  auto out = open_out(path);
  write_edges(out, skeleton);
  check_written(out, path);
}

FlowMatrix load_flows(const std::filesystem::path& path, std::size_t edge_count) {
  auto in = open_in(path);
  return read_flows(in, edge_count);
}

void save_flows(const std::filesystem::path& path, const FlowMatrix& flows) {
  auto out = open_out(path);
  write_flows(out, flows);
  check_written(out, path);
}

std::vector<TwoCell> load_cells(const std::filesystem::path& path, const Skeleton& skeleton) {
  auto in = open_in(path);
  return read_cells(in, skeleton);
}

void save_cells(const std::filesystem::path& path, std::span<const TwoCell> cells) {
  auto out = open_out(path);
  write_cells(out, cells);
  check_written(out, path);
}

}  // namespace cellflow::io
