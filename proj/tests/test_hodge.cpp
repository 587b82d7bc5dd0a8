#include <doctest.h>

#include <random>

#include "cellflow/errors.hpp"
#include "cellflow/hodge.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cellflow;

namespace {

double rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

SolverConfig tight() {
  SolverConfig cfg;
  cfg.atol = 1e-12;
  cfg.btol = 1e-12;
  return cfg;
}

}  // namespace

TEST_CASE("pure gradient flows are annihilated") {
  const Skeleton g = fixture::grid_skeleton();
  const RealSparse b1 = to_real(build_b1(g));
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd phi = oracle::random_matrix(rng, 15, 3);
  const FlowMatrix f = b1.transpose() * phi;
  CHECK(project_gradient_out(b1, f).norm() <= 1e-6 * f.norm());
}

TEST_CASE("circulations pass the gradient projection unchanged") {
  const Skeleton g(3, {{0, 1}, {1, 2}, {0, 2}});
  FlowMatrix f(3, 1);
  f << 2.0, 2.0, -2.0;
  CHECK(rel(project_gradient_out(to_real(build_b1(g)), f), f) <= 1e-10);
}

TEST_CASE("gradient projection on the five-node complex matches the pseudoinverse") {
  const Skeleton g = fixture::small_skeleton();
  const IntSparse b1 = build_b1(g);
  std::mt19937_64 rng(2);
  const FlowMatrix f = oracle::random_matrix(rng, 6, 4);
  const FlowMatrix expected = f - oracle::gradient_part(b1, f);
  CHECK(rel(project_gradient_out(to_real(b1), f), expected) <= 1e-8);
}

TEST_CASE("harmonic projection with no cells is the identity") {
  const Skeleton g = fixture::small_skeleton();
  std::mt19937_64 rng(3);
  const FlowMatrix f = oracle::random_matrix(rng, 6, 2);
  CHECK(project_harmonic(to_real(build_b2(g, {})), f) == f);
}

TEST_CASE("pure curl flows are annihilated") {
  const Skeleton g = fixture::grid_skeleton();
  const RealSparse b2 = to_real(build_b2(g, fixture::grid_cells(g)));
  std::mt19937_64 rng(4);
  const FlowMatrix f = b2 * oracle::random_matrix(rng, 3, 5);
  CHECK(project_harmonic(b2, f).norm() <= 1e-6 * f.norm());
}

TEST_CASE("harmonic projection on the five-node complex matches the pseudoinverse") {
  const Skeleton g = fixture::small_skeleton();
  const IntSparse b1 = build_b1(g);
  const IntSparse b2 = build_b2(g, fixture::small_cells(g));
  std::mt19937_64 rng(5);
  const FlowMatrix raw = oracle::random_matrix(rng, 6, 3);
  const FlowMatrix f = raw - oracle::gradient_part(b1, raw);
  const FlowMatrix expected = oracle::harmonic_part(b1, b2, f);
  // With both cells the harmonic space is trivial.
  CHECK(expected.norm() <= 1e-10);
  CHECK(project_harmonic(to_real(b2), f).norm() <= 1e-8 * f.norm());
  const std::vector<TwoCell> one{fixture::small_cells(g)[1]};
  const IntSparse b2_one = build_b2(g, one);
  CHECK(rel(project_harmonic(to_real(b2_one), f), oracle::harmonic_part(b1, b2_one, f)) <= 1e-8);
}

TEST_CASE("loss of the three-cell grid complex matches the dense oracle") {
  const Skeleton g = fixture::grid_skeleton();
  const auto cells = fixture::grid_cells(g);
  const FlowMatrix f = fixture::grid_flows(g, fixture::kGridSeed);
  const IntSparse b1 = build_b1(g);
  for (std::size_t count = 0; count <= cells.size(); ++count) {
    const std::vector<TwoCell> subset(cells.begin(), cells.begin() + static_cast<long>(count));
    const double expected = oracle::harmonic_part(b1, build_b2(g, subset), f).norm();
    const double got = loss(CellComplex(g, subset), f);
    CHECK(std::abs(got - expected) <= 1e-8 * std::max(1.0, expected));
  }
  CHECK(loss(CellComplex(g), f) == doctest::Approx(f.norm()).epsilon(1e-12));
}

TEST_CASE("loss is zero when the planted cells explain the flow") {
  const Skeleton g = fixture::grid_skeleton();
  const auto cells = fixture::grid_cells(g);
  std::mt19937_64 rng(6);
  const FlowMatrix f = to_real(build_b2(g, cells)) * oracle::random_matrix(rng, 3, 4);
  CHECK(loss(CellComplex(g, cells), f) <= 1e-6);
}

TEST_CASE("loss_delta equals full recomputation for grid candidates") {
  const Skeleton g = fixture::grid_skeleton();
  const auto cells = fixture::grid_cells(g);
  const FlowMatrix f = fixture::grid_flows(g, fixture::kGridSeed);
  const std::vector<TwoCell> base{cells[2]};
  const CellComplex cc(g, base);
  const RealSparse b2 = to_real(build_b2(cc));
  const FlowMatrix residual = project_harmonic(b2, f);
  const std::vector<std::vector<NodeId>> walks{
      {0, 1, 6, 5}, {2, 3, 8, 7}, {0, 1, 2, 7, 12, 11, 10, 5}, {1, 2, 3, 4, 9, 8, 7, 6},
      {7, 8, 13, 12}};
  for (const auto& w : walks) {
    const TwoCell cand = canonicalize(g, w);
    auto extended = base;
    extended.push_back(cand);
    const double full = loss(CellComplex(g, extended), f, tight());
    CHECK(std::abs(loss_delta(b2, residual, g, cand) - full) <= 1e-8 * std::max(1.0, full));
  }
}

TEST_CASE("loss_delta of a redundant candidate leaves the loss unchanged") {
  const Skeleton g = fixture::grid_skeleton();
  const auto cells = fixture::grid_cells(g);
  const FlowMatrix f = fixture::grid_flows(g, 7);
  const RealSparse b2 = to_real(build_b2(g, cells));
  const FlowMatrix residual = project_harmonic(b2, f);
  for (const auto& c : cells) {
    CHECK(loss_delta(b2, residual, g, c) == doctest::Approx(residual.norm()).epsilon(1e-10));
  }
  // The outer boundary of the green and blue strips lies in their span.
  const std::vector<NodeId> outer{1, 2, 3, 4, 9, 14, 13, 12, 11, 6};
  CHECK(loss_delta(b2, residual, g, canonicalize(g, outer)) ==
        doctest::Approx(residual.norm()).epsilon(1e-8));
}

TEST_CASE("loss_delta of the exact circulation is zero") {
  const Skeleton g = fixture::grid_skeleton();
  const std::vector<NodeId> walk{0, 1, 6, 5};
  const TwoCell cell = canonicalize(g, walk);
  FlowMatrix residual = cell_column(g, cell) * 1.7;
  CHECK(loss_delta(build_b2(g, {}).cast<double>(), residual, g, cell) <= 1e-10);
}

TEST_CASE("projection properties on random complexes") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 15; ++trial) {
    const Skeleton g = oracle::random_graph(rng, 7, 7);
    const auto cells = oracle::random_cells(rng, g, 3);
    const RealSparse b1 = to_real(build_b1(g));
    const RealSparse b2 = to_real(build_b2(g, cells));
    const FlowMatrix f = project_gradient_out(b1, oracle::random_matrix(rng, b1.cols(), 3));
    const FlowMatrix h = project_harmonic(b2, f);
    // idempotence
    CHECK(rel(project_harmonic(b2, h), h) <= 1e-8);
    // orthogonality to the curl space
    const Eigen::VectorXd y = oracle::random_matrix(rng, b2.cols(), 1).col(0);
    const Eigen::VectorXd curl = b2 * y;
    for (Eigen::Index j = 0; j < h.cols(); ++j) {
      CHECK(std::abs(h.col(j).dot(curl)) <= 1e-6 * curl.norm() * f.norm());
    }
    // Pythagoras
    const double lhs = f.squaredNorm();
    const double rhs = (f - h).squaredNorm() + h.squaredNorm();
    CHECK(std::abs(lhs - rhs) <= 1e-6 * lhs);
    // monotonicity
    double previous = loss(CellComplex(g), f);
    for (std::size_t k = 1; k <= cells.size(); ++k) {
      const std::vector<TwoCell> prefix(cells.begin(), cells.begin() + static_cast<long>(k));
      const double current = loss(CellComplex(g, prefix), f);
      CHECK(current <= previous + 1e-8);
      previous = current;
    }
  }
}

TEST_CASE("decomposition parts sum to the input and are mutually orthogonal") {
  const Skeleton g = fixture::small_skeleton();
  const std::vector<TwoCell> one{fixture::small_cells(g)[0]};
  const CellComplex cc(g, one);
  std::mt19937_64 rng(9);
  const FlowMatrix f = oracle::random_matrix(rng, 6, 3);
  const auto parts = decompose(cc, f);
  CHECK(rel(parts.gradient + parts.curl + parts.harmonic, f) <= 1e-12);
  const IntSparse b1 = build_b1(g), b2 = build_b2(cc);
  CHECK(rel(parts.gradient, oracle::gradient_part(b1, f)) <= 1e-8);
  CHECK(rel(parts.curl, oracle::curl_part(b2, f)) <= 1e-8);
  CHECK(rel(parts.harmonic, oracle::harmonic_part(b1, b2, f)) <= 1e-8);
}

TEST_CASE("solver config validation and non-convergence") {
  SolverConfig bad;
  bad.atol = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  SolverConfig capped;
  capped.atol = capped.btol = 1e-14;
  capped.max_iterations = 1;
  const Skeleton g = fixture::grid_skeleton();
  std::mt19937_64 rng(10);
  const FlowMatrix f = oracle::random_matrix(rng, static_cast<Eigen::Index>(g.edge_count()), 1);
  CHECK_THROWS_AS(project_gradient_out(to_real(build_b1(g)), f, capped), SolverError);
}

TEST_CASE("non-finite flows are rejected") {
  const Skeleton g = fixture::small_skeleton();
  FlowMatrix f = FlowMatrix::Zero(6, 1);
  f(2, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(project_gradient_out(to_real(build_b1(g)), f), InvalidInput);
}
