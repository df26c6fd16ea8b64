#include "mrcl/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace mrcl {

CommGraph build_graph(const std::vector<Vec2>& positions, double radius) {
  const int n = static_cast<int>(positions.size());
  CommGraph g;
  g.n = n;
  g.adjacency = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if ((positions[i] - positions[j]).norm() <= radius) {
        g.adjacency(i, j) = 1.0;
        g.adjacency(j, i) = 1.0;
      }
    }
  }
  return g;
}

Eigen::MatrixXd laplacian(const CommGraph& g) {
  Eigen::MatrixXd l = -g.adjacency;
  for (int i = 0; i < g.n; ++i) l(i, i) = g.adjacency.row(i).sum();
  return l;
}

double lambda2(const CommGraph& g) {
  if (g.n < 2) throw std::domain_error("lambda2: graph needs at least 2 nodes");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian(g),
                                                        Eigen::EigenvaluesOnly);
  return std::max(0.0, solver.eigenvalues()(1));
}

double lambda2_neighborhood(const CommGraph& g, int robot) {
  std::vector<int> nodes = g.neighbors(robot);
  nodes.insert(nodes.begin(), robot);
  const int m = static_cast<int>(nodes.size());
  if (m < 2) return 0.0;
  CommGraph sub;
  sub.n = m;
  sub.adjacency = Eigen::MatrixXd::Zero(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (a != b) sub.adjacency(a, b) = g.adjacency(nodes[a], nodes[b]);
  return lambda2(sub);
}

}  // namespace mrcl
