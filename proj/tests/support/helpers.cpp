#include "helpers.hpp"

#include <Eigen/Eigenvalues>

namespace testsupport {

sonata::Problem quadratic_problem(const std::vector<Mat>& h, const std::vector<Vec>& b,
                                  sonata::ProxOp prox) {
  sonata::Problem p;
  p.name = "quadratic";
  p.m = static_cast<int>(h.size());
  p.d = static_cast<int>(h.front().rows());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const Mat hi = h[i];
    const Vec bi = b[i];
    p.f.push_back([hi, bi](const Vec& x) { return 0.5 * x.dot(hi * x) - bi.dot(x); });
    p.grad.push_back([hi, bi](const Vec& x) -> Vec { return hi * x - bi; });
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(hi), Eigen::EigenvaluesOnly);
    p.L.push_back(es.eigenvalues().cwiseAbs().maxCoeff());
  }
  p.prox = std::move(prox);
  return p;
}

Mat random_symmetric(std::mt19937_64& rng, int d, double lo, double hi) {
  const Eigen::MatrixXd g = random_mat(rng, d, d);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  std::uniform_real_distribution<double> u(lo, hi);
  Vec ev(d);
  for (int k = 0; k < d; ++k) ev(k) = u(rng);
  return q * ev.asDiagonal() * q.transpose();
}

Vec random_vec(std::mt19937_64& rng, int d, double scale) {
  std::normal_distribution<double> n(0.0, scale);
  Vec v(d);
  for (int k = 0; k < d; ++k) v(k) = n(rng);
  return v;
}

Mat random_mat(std::mt19937_64& rng, int rows, int cols, double scale) {
  std::normal_distribution<double> n(0.0, scale);
  Mat a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a(i, j) = n(rng);
  return a;
}

Mat dense_perp(const Mat& x) {
  const auto m = x.rows();
  const Mat proj = Mat::Identity(m, m) - Mat::Constant(m, m, 1.0 / static_cast<double>(m));
  return proj * x;
}

double dense_rho(const Mat& w) {
  const auto m = w.rows();
  const Eigen::MatrixXd a = w - Mat::Constant(m, m, 1.0 / static_cast<double>(m));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
  Vec g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Vec xp = x;
    Vec xm = x;
    xp(k) += h;
    xm(k) -= h;
    g(k) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

}  // namespace testsupport
