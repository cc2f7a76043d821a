#include "sonata/problems.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "sonata/error.hpp"
#include "sonata/matrix_io.hpp"

namespace sonata {

namespace {

Mat gaussian(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Mat out(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out(i, j) = n01(rng);
  return out;
}

Vec gaussian_vec(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Vec out(n);
  for (int k = 0; k < n; ++k) out(k) = n01(rng);
  return out;
}

void check_shape(int m, int n, int d) {
  if (m < 1 || n < 1 || d < 1) throw Error(Errc::BadHyper, "m, n, d must be positive");
}

// Ground truth with the smallest-magnitude fraction of entries set to zero.
Vec sparse_truth(std::mt19937_64& rng, int d, double sparsity) {
  if (!(sparsity >= 0.0 && sparsity <= 1.0)) throw Error(Errc::BadHyper, "sparsity must lie in [0,1]");
  Vec x = gaussian_vec(rng, d);
  std::vector<int> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&x](int a, int b) { return std::abs(x(a)) < std::abs(x(b)); });
  const auto zeros = static_cast<std::size_t>(std::llround(sparsity * d));
  for (std::size_t k = 0; k < zeros; ++k) x(order[k]) = 0.0;
  return x;
}

DataBundle regression_data(const std::string& name, int m, int n, int d, double sparsity,
                           double noise_sd, std::uint64_t seed) {
  check_shape(m, n, d);
  if (!(noise_sd >= 0.0)) throw Error(Errc::BadHyper, "noise_sd must be nonnegative");
  std::mt19937_64 rng(seed);
  DataBundle data;
  data.problem = name;
  data.m = m;
  data.n = n;
  data.d = d;
  data.seed = seed;
  data.noise_sd = noise_sd;
  data.x_true = sparse_truth(rng, d, sparsity);
  for (int i = 0; i < m; ++i) {
    Mat a = gaussian(rng, n, d);
    for (int r = 0; r < n; ++r) {
      const double nr = a.row(r).norm();
      if (nr > 0.0) a.row(r) /= nr;
    }
    Vec y = a * data.x_true + noise_sd * gaussian_vec(rng, n);
    data.design.push_back(std::move(a));
    data.targets.push_back(std::move(y));
  }
  return data;
}

struct Quadratic {
  Mat h;  // (1/m) sum A_i^T A_i
  Vec b;  // (1/m) sum A_i^T y_i
  double c = 0.0;
};

Quadratic average_quadratic(const DataBundle& data) {
  Quadratic q;
  q.h = Mat::Zero(data.d, data.d);
  q.b = Vec::Zero(data.d);
  for (int i = 0; i < data.m; ++i) {
    const Mat& a = data.design[static_cast<std::size_t>(i)];
    const Vec& y = data.targets[static_cast<std::size_t>(i)];
    q.h.noalias() += a.transpose() * a;
    q.b.noalias() += a.transpose() * y;
    q.c += 0.5 * y.squaredNorm();
  }
  q.h /= data.m;
  q.b /= data.m;
  q.c /= data.m;
  return q;
}

// Per-agent least-squares oracles 0.5 ||A_i x - y_i||^2.
void attach_least_squares(Problem& prob, const std::shared_ptr<const DataBundle>& data) {
  for (int i = 0; i < data->m; ++i) {
    const auto k = static_cast<std::size_t>(i);
    prob.f.push_back([data, k](const Vec& x) {
      return 0.5 * (data->design[k] * x - data->targets[k]).squaredNorm();
    });
    prob.grad.push_back([data, k](const Vec& x) -> Vec {
      return data->design[k].transpose() * (data->design[k] * x - data->targets[k]);
    });
    const double s = spectral_norm(data->design[k]);
    prob.L.push_back(s * s);
  }
}

double scad_sum(const Vec& x, double lambda, double a, ScadDenominator den) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) s += scad_p(x(k), lambda, a, den);
  return s;
}

Vec scad_grad(const Vec& x, double lambda, double a, ScadDenominator den) {
  Vec g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) g(k) = scad_p_prime(x(k), lambda, a, den);
  return g;
}

double log1pexp(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double sign0(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

}  // namespace

double spectral_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  const Eigen::MatrixXd dense = a;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense);
  return svd.singularValues()(0);
}

double Problem::f_global(const Vec& x) const {
  if (global_f) return global_f(x);
  double s = 0.0;
  for (const auto& fi : f) s += fi(x);
  return s / m;
}

Vec Problem::grad_global(const Vec& x) const {
  if (global_grad) return global_grad(x);
  Vec g = Vec::Zero(d);
  for (const auto& gi : grad) g += gi(x);
  return g / m;
}

double Problem::L_avg() const {
  return std::accumulate(L.begin(), L.end(), 0.0) / static_cast<double>(L.size());
}

double Problem::L_max() const { return *std::max_element(L.begin(), L.end()); }

double scad_p(double x, double lambda, double a, ScadDenominator den) {
  const double t = std::abs(x);
  if (t <= lambda) return 0.0;
  const double denom = den == ScadDenominator::squared ? 2.0 * (a * a - 1.0) : 2.0 * (a - 1.0);
  if (t <= a * lambda) return (t - lambda) * (t - lambda) / denom;
  return lambda * t - (a + 1.0) * lambda * lambda / 2.0;
}

double scad_p_prime(double x, double lambda, double a, ScadDenominator den) {
  const double t = std::abs(x);
  if (t <= lambda) return 0.0;
  const double denom = den == ScadDenominator::squared ? (a * a - 1.0) : (a - 1.0);
  if (t <= a * lambda) return std::copysign((t - lambda) / denom, x);
  return std::copysign(lambda, x);
}

Problem make_lasso(const LassoParams& p) {
  if (!(p.lambda > 0.0)) throw Error(Errc::BadHyper, "lambda must be positive");
  auto data = std::make_shared<const DataBundle>(
      regression_data("lasso", p.m, p.n, p.d, p.sparsity, p.noise_sd, p.seed));
  Problem prob;
  prob.name = "lasso";
  prob.m = p.m;
  prob.d = p.d;
  attach_least_squares(prob, data);
  prob.prox = l1_prox(p.lambda);
  prob.kl = KlMeta{0.5, std::nullopt};
  prob.data = data;
  auto q = std::make_shared<const Quadratic>(average_quadratic(*data));
  prob.global_f = [q](const Vec& x) { return 0.5 * x.dot(q->h * x) - q->b.dot(x) + q->c; };
  prob.global_grad = [q](const Vec& x) -> Vec { return q->h * x - q->b; };
  return prob;
}

Problem make_scad(const ScadParams& p) {
  if (!(p.a > 1.0)) throw Error(Errc::BadHyper, "SCAD requires a > 1");
  if (!(p.lambda > 0.0)) throw Error(Errc::BadHyper, "lambda must be positive");
  auto data = std::make_shared<const DataBundle>(
      regression_data("scad", p.m, p.n, p.d, p.sparsity, p.noise_sd, p.seed));
  const double lambda = p.lambda;
  const double a = p.a;
  const ScadDenominator den = p.denominator;
  // Curvature of p on the middle branch; with the squared denominator p' jumps
  // at a*lambda, so this is a branch bound, not a global Lipschitz constant.
  const double curv = den == ScadDenominator::squared ? 1.0 / (a * a - 1.0) : 1.0 / (a - 1.0);

  Problem prob;
  prob.name = "scad";
  prob.m = p.m;
  prob.d = p.d;
  for (int i = 0; i < p.m; ++i) {
    const auto k = static_cast<std::size_t>(i);
    prob.f.push_back([data, k, lambda, a, den](const Vec& x) {
      return 0.5 * (data->design[k] * x - data->targets[k]).squaredNorm() -
             scad_sum(x, lambda, a, den);
    });
    prob.grad.push_back([data, k, lambda, a, den](const Vec& x) -> Vec {
      return data->design[k].transpose() * (data->design[k] * x - data->targets[k]) -
             scad_grad(x, lambda, a, den);
    });
    const double s = spectral_norm(data->design[k]);
    prob.L.push_back(s * s + curv);
  }
  prob.prox = l1_prox(lambda);
  prob.kl = KlMeta{0.5, std::nullopt};
  prob.nonconvex = true;
  prob.data = data;
  auto q = std::make_shared<const Quadratic>(average_quadratic(*data));
  prob.global_f = [q, lambda, a, den](const Vec& x) {
    return 0.5 * x.dot(q->h * x) - q->b.dot(x) + q->c - scad_sum(x, lambda, a, den);
  };
  prob.global_grad = [q, lambda, a, den](const Vec& x) -> Vec {
    return q->h * x - q->b - scad_grad(x, lambda, a, den);
  };
  return prob;
}

Problem make_pca(const PcaParams& p) {
  check_shape(p.m, p.n, p.d);
  std::mt19937_64 rng(p.seed);
  const Eigen::MatrixXd g = gaussian(rng, p.d, p.d);
  const Eigen::MatrixXd u = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vec sqrt_lam(p.d);
  for (int k = 0; k < p.d; ++k) sqrt_lam(k) = std::sqrt(unif(rng));
  // Rows a^T = z^T Lambda^{1/2} U^T, so a ~ N(0, U Lambda U^T).
  const Eigen::MatrixXd mix = sqrt_lam.asDiagonal() * u.transpose();

  auto data = std::make_shared<DataBundle>();
  data->problem = "pca";
  data->m = p.m;
  data->n = p.n;
  data->d = p.d;
  data->seed = p.seed;
  auto covs = std::make_shared<std::vector<Mat>>();
  Mat cbar = Mat::Zero(p.d, p.d);
  for (int i = 0; i < p.m; ++i) {
    Mat a = gaussian(rng, p.n, p.d) * mix;
    Mat c = (a.transpose() * a) / static_cast<double>(p.n);
    cbar += c;
    covs->push_back(std::move(c));
    data->design.push_back(std::move(a));
  }
  cbar /= p.m;

  Problem prob;
  prob.name = "pca";
  prob.m = p.m;
  prob.d = p.d;
  for (int i = 0; i < p.m; ++i) {
    const auto k = static_cast<std::size_t>(i);
    prob.f.push_back([covs, k](const Vec& x) { return -x.dot((*covs)[k] * x); });
    prob.grad.push_back([covs, k](const Vec& x) -> Vec { return -2.0 * ((*covs)[k] * x); });
    prob.L.push_back(2.0 * spectral_norm((*covs)[k]));
  }
  prob.prox = unit_ball_prox();
  prob.kl = KlMeta{0.5, std::nullopt};
  prob.nonconvex = true;
  prob.data = data;
  auto cb = std::make_shared<const Mat>(std::move(cbar));
  prob.global_f = [cb](const Vec& x) { return -x.dot(*cb * x); };
  prob.global_grad = [cb](const Vec& x) -> Vec { return -2.0 * (*cb * x); };
  return prob;
}

Problem make_logistic(const LogisticParams& p) {
  check_shape(p.m, p.n, p.d);
  std::mt19937_64 rng(p.seed);
  auto data = std::make_shared<DataBundle>();
  data->problem = "logistic";
  data->m = p.m;
  data->n = p.n;
  data->d = p.d;
  data->seed = p.seed;
  data->x_true = gaussian_vec(rng, p.d);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < p.m; ++i) {
    Mat phi = gaussian(rng, p.n, p.d);
    // Label +1 with probability sigmoid(phi^T x_true); b = -label * phi.
    for (int j = 0; j < p.n; ++j) {
      const double label = unif(rng) < sigmoid(phi.row(j).dot(data->x_true)) ? 1.0 : -1.0;
      phi.row(j) *= -label;
    }
    data->design.push_back(std::move(phi));
  }

  Problem prob;
  prob.name = "logistic";
  prob.m = p.m;
  prob.d = p.d;
  const double n = p.n;
  for (int i = 0; i < p.m; ++i) {
    const auto k = static_cast<std::size_t>(i);
    prob.f.push_back([data, k, n](const Vec& x) {
      const Vec t = data->design[k] * x;
      double s = 0.0;
      for (Eigen::Index j = 0; j < t.size(); ++j) s += log1pexp(t(j));
      return s / n;
    });
    prob.grad.push_back([data, k, n](const Vec& x) -> Vec {
      Vec t = data->design[k] * x;
      for (Eigen::Index j = 0; j < t.size(); ++j) t(j) = sigmoid(t(j));
      return data->design[k].transpose() * t / n;
    });
    const double s = spectral_norm(data->design[k]);
    prob.L.push_back(s * s / (4.0 * n));
  }
  prob.prox = zero_prox();
  prob.data = data;
  return prob;
}

Problem make_phase_retrieval(const PhaseRetrievalParams& p) {
  check_shape(p.m, p.n, p.d);
  if (!(p.noise_sd >= 0.0)) throw Error(Errc::BadHyper, "noise_sd must be nonnegative");
  std::mt19937_64 rng(p.seed);
  auto data = std::make_shared<DataBundle>();
  data->problem = "phase_retrieval";
  data->m = p.m;
  data->n = p.n;
  data->d = p.d;
  data->seed = p.seed;
  data->noise_sd = p.noise_sd;
  data->x_true = gaussian_vec(rng, p.d);
  for (int i = 0; i < p.m; ++i) {
    Mat a = gaussian(rng, p.n, p.d);
    Vec y = (a * data->x_true).cwiseAbs() + p.noise_sd * gaussian_vec(rng, p.n);
    data->design.push_back(std::move(a));
    data->targets.push_back(std::move(y));
  }

  Problem prob;
  prob.name = "phase_retrieval";
  prob.m = p.m;
  prob.d = p.d;
  const double n = p.n;
  for (int i = 0; i < p.m; ++i) {
    const auto k = static_cast<std::size_t>(i);
    prob.f.push_back([data, k, n](const Vec& x) {
      return 0.5 * ((data->design[k] * x).cwiseAbs() - data->targets[k]).squaredNorm() / n;
    });
    prob.grad.push_back([data, k, n](const Vec& x) -> Vec {
      Vec t = data->design[k] * x;
      for (Eigen::Index j = 0; j < t.size(); ++j)
        t(j) = (std::abs(t(j)) - data->targets[k](j)) * sign0(t(j));
      return data->design[k].transpose() * t / n;
    });
    // Curvature within one sign cell; the gradient jumps across cells.
    const double s = spectral_norm(data->design[k]);
    prob.L.push_back(s * s / n);
  }
  prob.prox = zero_prox();
  prob.nonconvex = true;
  prob.data = data;
  return prob;
}

Problem make_synthetic_kl(double theta, int m, std::uint64_t seed) {
  if (!(theta > 0.0 && theta < 1.0)) throw Error(Errc::BadHyper, "theta must lie in (0,1)");
  if (theta < 0.5) throw Error(Errc::NotSmooth, "theta < 1/2 gives a power below 2");
  if (m < 1) throw Error(Errc::BadHyper, "m must be positive");
  const double q = 1.0 / (1.0 - theta);
  Problem prob;
  prob.name = "synthetic_kl";
  prob.m = m;
  prob.d = 1;
  for (int i = 0; i < m; ++i) {
    prob.f.push_back([q](const Vec& x) { return std::pow(std::abs(x(0)), q) / q; });
    prob.grad.push_back([q](const Vec& x) -> Vec {
      Vec g(1);
      g(0) = std::copysign(std::pow(std::abs(x(0)), q - 1.0), x(0));
      return g;
    });
    // (q-1)|x|^(q-2) on |x| <= 1.
    prob.L.push_back(q - 1.0);
  }
  prob.prox = zero_prox();
  prob.kl = KlMeta{theta, std::pow(q, theta)};
  prob.known_minimizer = Vec::Zero(1);
  auto data = std::make_shared<DataBundle>();
  data->problem = "synthetic_kl";
  data->m = m;
  data->d = 1;
  data->seed = seed;
  prob.data = data;
  return prob;
}

void write_bundle(std::ostream& os, const DataBundle& data) {
  const bool has_targets = !data.targets.empty();
  const bool has_truth = data.x_true.size() > 0;
  os << "problem=" << data.problem << " m=" << data.m << " n=" << data.n << " d=" << data.d
     << " seed=" << data.seed << " noise_sd=" << io::format_real(data.noise_sd)
     << " has_targets=" << (has_targets ? 1 : 0) << " has_truth=" << (has_truth ? 1 : 0) << '\n';
  for (std::size_t i = 0; i < data.design.size(); ++i) {
    io::write_matrix(os, data.design[i]);
    if (has_targets) io::write_row(os, data.targets[i]);
  }
  if (has_truth) io::write_row(os, data.x_true);
}

DataBundle read_bundle(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw Error(Errc::Io, "missing bundle header");
  DataBundle data;
  int has_targets = 0;
  int has_truth = 0;
  std::istringstream hs(header);
  std::string tok;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw Error(Errc::Io, "malformed header token '" + tok + "'");
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    try {
      if (key == "problem") data.problem = val;
      else if (key == "m") data.m = std::stoi(val);
      else if (key == "n") data.n = std::stoi(val);
      else if (key == "d") data.d = std::stoi(val);
      else if (key == "seed") data.seed = std::stoull(val);
      else if (key == "noise_sd") data.noise_sd = std::stod(val);
      else if (key == "has_targets") has_targets = std::stoi(val);
      else if (key == "has_truth") has_truth = std::stoi(val);
      else throw Error(Errc::Io, "unknown header key '" + key + "'");
    } catch (const std::logic_error&) {
      throw Error(Errc::Io, "bad value for header key '" + key + "'");
    }
  }
  if (data.m < 0 || data.n < 0 || data.d < 0) throw Error(Errc::Io, "negative shape in header");
  for (int i = 0; i < data.m; ++i) {
    if (data.n > 0) data.design.push_back(io::read_matrix(is, data.n, data.d));
    if (has_targets != 0) data.targets.push_back(io::read_row(is, data.n));
  }
  if (has_truth != 0) data.x_true = io::read_row(is, data.d);
  return data;
}

}  // namespace sonata
