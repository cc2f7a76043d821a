#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "sonata/types.hpp"

namespace sonata {

/// Undirected simple graph over agents 0..m-1.
class Graph {
 public:
  explicit Graph(int m);

  /// Adds {i, j}. Self-loops are rejected; duplicates are ignored.
  void add_edge(int i, int j);

  int size() const { return m_; }
  bool has_edge(int i, int j) const;
  int degree(int i) const { return degree_[static_cast<std::size_t>(i)]; }
  /// Unordered pairs with first < second, in lexicographic order.
  std::vector<std::pair<int, int>> edges() const;
  std::size_t edge_count() const { return edge_count_; }
  bool connected() const;

 private:
  int m_;
  std::vector<char> adj_;
  std::vector<int> degree_;
  std::size_t edge_count_ = 0;
};

Graph complete_graph(int m);
Graph path_graph(int m);

/// G(m, p) resampled until connected; throws NotConnected after 1000 draws.
Graph erdos_renyi(int m, double p, std::uint64_t seed);

/// Doubly stochastic mixing matrix together with its cached mixing statistics.
class GossipMatrix {
 public:
  /// Validates double stochasticity (1e-10) and nonnegativity.
  explicit GossipMatrix(Mat weights);

  const Mat& weights() const { return w_; }
  int size() const { return static_cast<int>(w_.rows()); }
  /// ||W - 11^T/m||_2
  double rho() const { return rho_; }
  /// sum_i max_j w_ij
  double w_mx() const { return w_mx_; }

 private:
  Mat w_;
  double rho_;
  double w_mx_;
};

GossipMatrix metropolis_hastings(const Graph& g);

/// Spectral norm of W - J by power iteration on (W-J)^T (W-J).
double mixing_spectral_norm(const Mat& w);
double w_mx(const Mat& w);

struct BoostedMixing {
  GossipMatrix matrix;
  int rounds;
};

/// Replaces W by W^K with the smallest K such that rho(W^K) <= rho_target.
BoostedMixing boost_mixing(const GossipMatrix& w, double rho_target);

}  // namespace sonata
