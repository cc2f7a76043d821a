#pragma once

#include <iosfwd>

#include "sonata/problems.hpp"

namespace sonata {

struct ReferenceSolution {
  Vec x_star;
  double u_star = 0.0;
  double residual = 0.0;  // ||x+ - x|| / alpha at exit
  int iterations = 0;
};

/// x+ = prox_{alpha r}(x - alpha grad f(x)) until ||x+ - x|| / alpha <= tol.
/// Throws NotConverged after max_iters steps.
ReferenceSolution centralized_prox_grad(const Problem& problem, const Vec& x0, double alpha,
                                        double tol, int max_iters);

/// ||x - prox_{alpha r}(x - alpha grad f(x))|| / alpha
double prox_grad_residual(const Problem& problem, const Vec& x, double alpha);

/// d = 1 only: grid minimizer of u over [lo, hi], refined by bisection on the
/// prox-gradient map when it changes sign across the neighbouring grid cells.
double brute_force_stationary_1d(const Problem& problem, double lo, double hi, double grid);

void write_reference(std::ostream& os, const ReferenceSolution& ref);

}  // namespace sonata
