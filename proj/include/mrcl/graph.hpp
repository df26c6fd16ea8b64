#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mrcl/world.hpp"

namespace mrcl {

/// Floor applied to lambda2 before it divides the trigger threshold; a
/// disconnected graph (lambda2 = 0) then yields a very large threshold and the
/// detached robots stop event-triggering, which matches their inability to
/// communicate.
inline constexpr double kLambda2Floor = 1e-6;

/// Undirected communication graph with 0/1 adjacency and zero diagonal.
struct CommGraph {
  int n = 0;
  Eigen::MatrixXd adjacency;

  bool edge(int i, int j) const { return adjacency(i, j) != 0.0; }

  std::vector<int> neighbors(int i) const {
    std::vector<int> out;
    for (int j = 0; j < n; ++j)
      if (j != i && edge(i, j)) out.push_back(j);
    return out;
  }
};

/// Edge iff pairwise distance <= radius.
CommGraph build_graph(const std::vector<Vec2>& positions, double radius);

/// L = D - A; symmetric, zero row sums.
Eigen::MatrixXd laplacian(const CommGraph& g);

/// Second-smallest Laplacian eigenvalue (algebraic connectivity), >= 0 and
/// zero iff the graph is disconnected. Throws std::domain_error for n < 2.
double lambda2(const CommGraph& g);

/// lambda2 of the subgraph induced by robot i and its neighbors; the local
/// approximation used when network-wide connectivity is not assumed known.
double lambda2_neighborhood(const CommGraph& g, int robot);

}  // namespace mrcl
