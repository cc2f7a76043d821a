#include "sonata/graph.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "sonata/error.hpp"

namespace sonata {

namespace {

constexpr int kMaxConnectAttempts = 1000;
constexpr double kStochasticTol = 1e-10;
constexpr double kPowerTol = 1e-12;
constexpr int kPowerMaxIters = 10000;

}  // namespace

Graph::Graph(int m) : m_(m) {
  if (m < 1) throw Error(Errc::BadHyper, "graph needs at least one agent");
  adj_.assign(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0);
  degree_.assign(static_cast<std::size_t>(m), 0);
}

void Graph::add_edge(int i, int j) {
  if (i < 0 || j < 0 || i >= m_ || j >= m_)
    throw Error(Errc::BadHyper, "edge endpoint out of range");
  if (i == j) throw Error(Errc::BadHyper, "self-loop on agent " + std::to_string(i));
  auto& a = adj_[static_cast<std::size_t>(i) * m_ + j];
  if (a) return;
  a = 1;
  adj_[static_cast<std::size_t>(j) * m_ + i] = 1;
  ++degree_[static_cast<std::size_t>(i)];
  ++degree_[static_cast<std::size_t>(j)];
  ++edge_count_;
}

bool Graph::has_edge(int i, int j) const {
  return adj_[static_cast<std::size_t>(i) * m_ + j] != 0;
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(edge_count_);
  for (int i = 0; i < m_; ++i)
    for (int j = i + 1; j < m_; ++j)
      if (has_edge(i, j)) out.emplace_back(i, j);
  return out;
}

bool Graph::connected() const {
  std::vector<char> seen(static_cast<std::size_t>(m_), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w = 0; w < m_; ++w) {
      if (!seen[static_cast<std::size_t>(w)] && has_edge(v, w)) {
        seen[static_cast<std::size_t>(w)] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == m_;
}

Graph complete_graph(int m) {
  Graph g(m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) g.add_edge(i, j);
  return g;
}

Graph path_graph(int m) {
  Graph g(m);
  for (int i = 0; i + 1 < m; ++i) g.add_edge(i, i + 1);
  return g;
}

Graph erdos_renyi(int m, double p, std::uint64_t seed) {
  if (m < 1) throw Error(Errc::BadHyper, "m must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::BadHyper, "p must lie in [0,1]");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  for (int attempt = 0; attempt < kMaxConnectAttempts; ++attempt) {
    Graph g(m);
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        if (coin(rng)) g.add_edge(i, j);
    if (g.connected()) return g;
  }
  throw Error(Errc::NotConnected, "no connected G(" + std::to_string(m) + ", " +
                                      std::to_string(p) + ") sample in " +
                                      std::to_string(kMaxConnectAttempts) + " draws");
}

GossipMatrix::GossipMatrix(Mat weights) : w_(std::move(weights)) {
  if (w_.rows() != w_.cols() || w_.rows() == 0)
    throw Error(Errc::InvalidGossip, "mixing matrix must be square and nonempty");
  if ((w_.array() < 0.0).any()) throw Error(Errc::InvalidGossip, "negative weight");
  const double row_dev = (w_.rowwise().sum().array() - 1.0).abs().maxCoeff();
  const double col_dev = (w_.colwise().sum().array() - 1.0).abs().maxCoeff();
  if (row_dev > kStochasticTol || col_dev > kStochasticTol)
    throw Error(Errc::InvalidGossip, "matrix is not doubly stochastic");
  rho_ = mixing_spectral_norm(w_);
  w_mx_ = sonata::w_mx(w_);
}

GossipMatrix metropolis_hastings(const Graph& g) {
  if (!g.connected()) throw Error(Errc::NotConnected, "Metropolis-Hastings needs a connected graph");
  const int m = g.size();
  Mat w = Mat::Zero(m, m);
  for (auto [i, j] : g.edges()) {
    const double wij = 1.0 / (1.0 + std::max(g.degree(i), g.degree(j)));
    w(i, j) = wij;
    w(j, i) = wij;
  }
  for (int i = 0; i < m; ++i) {
    double off = 0.0;
    for (int j = 0; j < m; ++j)
      if (j != i) off += w(i, j);
    w(i, i) = 1.0 - off;
  }
  return GossipMatrix(std::move(w));
}

double mixing_spectral_norm(const Mat& w) {
  const auto m = w.rows();
  Mat a = w.array() - 1.0 / static_cast<double>(m);
  if (a.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  const Mat b = a.transpose() * a;

  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  Vec v(m);
  for (Eigen::Index i = 0; i < m; ++i) v(i) = normal(rng);
  v.normalize();

  double est = 0.0;
  for (int it = 0; it < kPowerMaxIters; ++it) {
    Vec bv = b * v;
    const double next = v.dot(bv);
    const double norm = bv.norm();
    if (norm == 0.0) return 0.0;
    v = bv / norm;
    const bool done = std::abs(next - est) <= kPowerTol * std::max(next, 1e-300);
    est = next;
    if (done) break;
  }
  return std::min(1.0, std::sqrt(std::max(est, 0.0)));
}

double w_mx(const Mat& w) {
  return w.rowwise().maxCoeff().sum();
}

BoostedMixing boost_mixing(const GossipMatrix& w, double rho_target) {
  if (!(rho_target > 0.0 && rho_target < 1.0))
    throw Error(Errc::BadHyper, "rho_target must lie in (0,1)");
  const double rho = w.rho();
  if (rho >= 1.0) throw Error(Errc::DegenerateMixing, "rho(W) >= 1; graph not connected?");
  if (rho <= rho_target) return {w, 1};

  // ceil() on a ratio that is an integer up to rounding can overshoot by one;
  // start just below and let the exact check below decide.
  int k = std::max(1, static_cast<int>(std::ceil(std::log(rho_target) / std::log(rho) - 1e-9)));
  Mat power = w.weights();
  for (int i = 1; i < k; ++i) power = power * w.weights();
  while (mixing_spectral_norm(power) > rho_target) {
    power = power * w.weights();
    ++k;
  }
  return {GossipMatrix(std::move(power)), k};
}

}  // namespace sonata
