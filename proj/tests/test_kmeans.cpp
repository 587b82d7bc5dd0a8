#include <doctest.h>

#include <random>
#include <set>

#include "cellflow/kmeans.hpp"
#include "oracles.hpp"

using namespace cellflow;

TEST_CASE("well separated blobs are recovered") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd(0.0, 0.1);
  const double centres[3][2] = {{0, 0}, {10, 0}, {0, 10}};
  Eigen::MatrixXd pts(90, 2);
  for (int i = 0; i < 90; ++i) {
    pts(i, 0) = centres[i % 3][0] + nd(rng);
    pts(i, 1) = centres[i % 3][1] + nd(rng);
  }
  const auto r = kmeans(pts, 3, 7);
  REQUIRE(r.centers.rows() == 3);
  for (int i = 0; i < 90; ++i) CHECK(r.labels[i] == r.labels[i % 3]);
  std::set<int> distinct{r.labels[0], r.labels[1], r.labels[2]};
  CHECK(distinct.size() == 3);
  for (int c = 0; c < 3; ++c) {
    const Eigen::RowVector2d expected(centres[c][0], centres[c][1]);
    CHECK((r.centers.row(r.labels[c]) - expected).norm() < 0.1);
  }
}

TEST_CASE("labels point to the nearest centre and centres are cluster means") {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd pts = oracle::random_matrix(rng, 60, 3);
  const auto r = kmeans(pts, 4, 11);
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    Eigen::Index best = 0;
    (r.centers.rowwise() - pts.row(i)).rowwise().squaredNorm().minCoeff(&best);
    CHECK(r.labels[i] == best);
  }
  for (Eigen::Index c = 0; c < r.centers.rows(); ++c) {
    Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(3);
    int count = 0;
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      if (r.labels[i] == c) {
        sum += pts.row(i);
        ++count;
      }
    }
    if (count > 0) CHECK((r.centers.row(c) - sum / count).norm() < 1e-12);
  }
}

TEST_CASE("same seed gives identical clustering") {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd pts = oracle::random_matrix(rng, 40, 2);
  const auto a = kmeans(pts, 5, 42);
  const auto b = kmeans(pts, 5, 42);
  CHECK(a.labels == b.labels);
  CHECK(a.centers == b.centers);
}

TEST_CASE("k is clamped to the number of points") {
  Eigen::MatrixXd pts(2, 1);
  pts << 0, 1;
  const auto r = kmeans(pts, 5, 0);
  CHECK(r.centers.rows() == 2);
  CHECK(r.labels[0] != r.labels[1]);
}

TEST_CASE("single cluster centre is the mean") {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd pts = oracle::random_matrix(rng, 20, 3);
  const auto r = kmeans(pts, 1, 0);
  CHECK((r.centers.row(0) - pts.colwise().mean()).norm() < 1e-12);
}
