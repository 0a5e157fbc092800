#pragma once

#include <cstddef>
#include <cstdint>

#include "gooed/kde.hpp"
#include "gooed/mcmc.hpp"
#include "gooed/types.hpp"

namespace gooed {

/// Settings for the nested Monte Carlo expected-utility estimator.
struct NmcConfig {
  std::size_t n_out = 1000;
  std::size_t n_in = 1000;
  StretchConfig mcmc;
  BandwidthPolicy bandwidth = BandwidthPolicy::adaptive();
  std::uint64_t seed = 0;
  bool loo_inner = false;  // leave-one-out inner evaluation instead of
                           // self-evaluation of the posterior-predictive KDE
  int threads = 1;
};

struct EigEstimate {
  double u = 0.0;                     // term_inner_mean - term_prior_pred_mean
  double term_inner_mean = 0.0;
  double term_prior_pred_mean = 0.0;
  std::size_t n_out = 0;
  std::size_t n_in = 0;
  Vector d;
  double bandwidth = 0.0;             // resolved posterior-predictive bandwidth
  double wall_time_s = 0.0;
  double mcmc_time_s = 0.0;           // chain burn-in + sampling, all iterations
  double mcmc_sampling_time_s = 0.0;  // post-burn-in stepping only
  double kde_time_s = 0.0;            // bandwidth CV + fits + density evaluations
};

/// Prior-predictive sample set, its KDE, and the cached log p(z^(i)) values.
/// Built once per study: the term is independent of the design, so the same
/// cache serves every d. For n_z > 1 the z samples are standardized per
/// coordinate before fitting (one isotropic bandwidth is otherwise
/// meaningless across heterogeneous QoI scales) and the log densities carry
/// the exact Jacobian correction back to original units.
struct PriorPredictiveCache {
  std::vector<Vector> theta_samples;
  std::vector<Vector> z_samples;   // original units
  KdeModel kde;                    // fit on standardized samples
  Vector log_pz;                   // original-units log densities
  double bandwidth = 0.0;          // standardized units when n_z > 1
  Vector z_mean, z_scale;          // standardization (identity when n_z == 1)
  Vector z_min, z_max;             // per-coordinate sample range
  double log_jacobian = 0.0;       // -sum log z_scale

  Vector standardize(const Vector& z) const;
};

PriorPredictiveCache prior_predictive_setup(const Problem& p, std::size_t n_out,
                                            const BandwidthPolicy& policy,
                                            RngStream& rng);

/// The nested Monte Carlo estimator: for each outer draw (theta~prior,
/// y~likelihood), MCMC posterior sampling initialized at the data-generating
/// theta yields n_in posterior-predictive samples whose KDE log density is
/// averaged; the d-independent prior-predictive term comes from the cache.
/// Outer iterations run in parallel on cfg.threads workers with per-index
/// derived rng streams and a fixed reduction order, so results are bitwise
/// independent of the worker count. A failed outer iteration is retried
/// once with a fresh stream; a second failure aborts the estimate.
EigEstimate expected_utility_nmc(const Problem& p, const Vector& d, const NmcConfig& cfg,
                                 const PriorPredictiveCache& cache);

enum class GridTarget {
  kParameter,    // EIG on theta
  kQoiIdentity,  // EIG on z where the prediction model is the identity
};

/// Quadrature-based reference estimator for n_theta <= 2: the posterior is
/// normalized on a tensor midpoint grid per simulated observation and the
/// KL divergence from the prior is integrated on the same grid.
/// grid_nodes is the per-axis node count (2000 for 1D, 200 for 2D are the
/// reference defaults).
double expected_utility_grid(const Problem& p, const Vector& d,
                             std::size_t grid_nodes, std::size_t n_out,
                             RngStream& rng, GridTarget target);

struct InfoGain {
  double ig_theta = 0.0;
  double ig_z = 0.0;
};

/// Single-realization information gains: simulate one y at theta_true, then
/// KL(posterior || prior) for theta by grid quadrature and for z by KDE of
/// the posterior-predictive against the cached prior-predictive on a padded
/// 2001-node z grid.
InfoGain info_gain_realization(const Problem& p, const Vector& d,
                               const Vector& theta_true, RngStream& rng,
                               const NmcConfig& cfg,
                               const PriorPredictiveCache& cache);

}  // namespace gooed
