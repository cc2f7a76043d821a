#pragma once

#include <cstdint>

#include "sonata/types.hpp"

namespace sonata {

struct RunConfig {
  double alpha = 0.0;
  double gamma = 0.0;
  double xi = 0.0;
  int max_iters = 10000;
  /// Stop once T <= stop_tol (or ||D|| <= stop_tol with use_dnorm_stop).
  double stop_tol = 1e-10;
  bool use_dnorm_stop = false;
  /// NoProgress when T sets no new minimum for this many iterations.
  int patience = 10000;
  /// Gossip rounds already folded into W; reporting only.
  int gossip_rounds = 1;
  std::uint64_t seed = 1;
  /// Initial rows are drawn uniformly from the ball of this radius.
  double init_radius = 1.0;
};

struct IterateState {
  Mat X;
  Mat Y;
  Mat grad_cache;  // grad F(X)
  int nu = 0;
};

}  // namespace sonata
