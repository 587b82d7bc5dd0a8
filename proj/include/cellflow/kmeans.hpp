#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace cellflow {

struct KMeansResult {
  Eigen::MatrixXd centers;  ///< one row per center
  std::vector<int> labels;  ///< center index per input row
  int iterations = 0;
};

/// Lloyd's k-means with k-means++ seeding under the Euclidean metric.
///
/// Rows of `points` are the observations. Stops when assignments no longer
/// change or after `max_iterations` rounds. `k` is clamped to the number of
/// points. Empty clusters keep their previous center. Deterministic in `seed`.
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                    int max_iterations = 100);

}  // namespace cellflow
