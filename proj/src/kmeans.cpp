#include "cellflow/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "cellflow/errors.hpp"

namespace cellflow {

namespace {

Eigen::MatrixXd seed_centers(const Eigen::MatrixXd& points, int k, std::mt19937_64& rng) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd centers(k, points.cols());
  std::vector<char> chosen(static_cast<std::size_t>(n), 0);

  std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
  Eigen::Index pick = first(rng);
  centers.row(0) = points.row(pick);
  chosen[static_cast<std::size_t>(pick)] = 1;

  Eigen::VectorXd d2 = (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    if (total > 0.0) {
      double target = unit(rng) * total;
      pick = -1;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (d2[i] <= 0.0) continue;
        pick = i;
        target -= d2[i];
        if (target <= 0.0) break;
      }
    } else {
      // all points coincide with a center already; take the next unused row
      pick = 0;
      while (pick < n - 1 && chosen[static_cast<std::size_t>(pick)]) ++pick;
    }
    chosen[static_cast<std::size_t>(pick)] = 1;
    centers.row(c) = points.row(pick);
    d2 = d2.cwiseMin((points.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }
  return centers;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int max_iterations) {
  if (k < 1) throw InvalidInput("k-means needs k >= 1");
  if (points.rows() == 0) throw InvalidInput("k-means needs at least one point");
  k = static_cast<int>(std::min<Eigen::Index>(k, points.rows()));

  std::mt19937_64 rng(seed);
  KMeansResult res;
  res.centers = seed_centers(points, k, rng);
  res.labels.assign(static_cast<std::size_t>(points.rows()), -1);

  for (int it = 0; it < max_iterations; ++it) {
    bool changed = false;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = (points.row(i) - res.centers.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      auto& label = res.labels[static_cast<std::size_t>(i)];
      if (label != best) {
        label = best;
        changed = true;
      }
    }
    res.iterations = it + 1;
    if (!changed) break;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      const int c = res.labels[static_cast<std::size_t>(i)];
      sums.row(c) += points.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        res.centers.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
      }
    }
  }
  return res;
}

}  // namespace cellflow
