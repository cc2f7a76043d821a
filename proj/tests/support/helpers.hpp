#pragma once

#include <random>
#include <vector>

#include "sonata/problems.hpp"
#include "sonata/types.hpp"

namespace testsupport {

using sonata::Mat;
using sonata::Vec;

/// f_i(x) = 0.5 x^T H_i x - b_i^T x with L_i = ||H_i||_2.
sonata::Problem quadratic_problem(const std::vector<Mat>& h, const std::vector<Vec>& b,
                                  sonata::ProxOp prox);

/// Random symmetric matrix with eigenvalues drawn from [lo, hi].
Mat random_symmetric(std::mt19937_64& rng, int d, double lo, double hi);

Vec random_vec(std::mt19937_64& rng, int d, double scale = 1.0);
Mat random_mat(std::mt19937_64& rng, int rows, int cols, double scale = 1.0);

/// (I - 11^T/m) X with the projector built explicitly.
Mat dense_perp(const Mat& x);

/// max |eig(W - 11^T/m)| for symmetric W.
double dense_rho(const Mat& w);

/// Central finite-difference gradient.
Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h);

}  // namespace testsupport
