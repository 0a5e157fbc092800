#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "gooed/types.hpp"

namespace gooed {

/// Matern kernel with smoothness fixed at nu = 5/2, closed form
/// (1 + sqrt(5) r / l + 5 r^2 / (3 l^2)) exp(-sqrt(5) r / l).
double matern52(double r, double l);

/// Gaussian-process surrogate over noisy expected-utility evaluations.
/// Observations are centered before fitting (zero-mean GP afterwards);
/// the kernel has unit signal variance and fixed length scale.
class GpModel {
 public:
  /// lambda is the observation-noise variance added to the kernel diagonal
  /// (floored at 1e-12; escalated by 10x up to 3 times on a Cholesky
  /// failure before giving up).
  static GpModel fit(const std::vector<Vector>& X, const Vector& U, double length_scale,
                     double lambda);

  /// Posterior (mean, sd) at a query design.
  std::pair<double, double> posterior(const Vector& d) const;

  double log_marginal_likelihood() const;
  const std::vector<Vector>& points() const;
  const Vector& values() const;
  double length_scale() const;

  GpModel();
  GpModel(GpModel&&) noexcept;
  GpModel& operator=(GpModel&&) noexcept;
  ~GpModel();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

double ucb(const GpModel& m, const Vector& d, double kappa);

/// Box-constrained multistart local ascent of the UCB acquisition with
/// central-difference gradients; starts are `restarts` uniform draws plus
/// the best training point. Always returns a feasible point.
Vector maximize_acquisition(const GpModel& m, const Bounds& bounds, std::size_t restarts,
                            double kappa, RngStream& rng);

struct BoConfig {
  Bounds bounds;
  std::size_t n_init = 3;
  std::size_t max_iter = 60;
  double kappa = 2.56;          // 99.5% upper confidence bound
  std::size_t restarts = 8;
  std::uint64_t seed = 0;
  double eps_improve = 1e-3;    // nats; see `patience`
  std::size_t patience = 10;    // stop after this many non-improving iterations
  double lambda = -1.0;         // <0 => max(1e-6, 1e-4 * Var(U))
  double length_scale = 1.0;
  std::size_t retune_every = 0;  // >0 => re-tune length scale by marginal
                                 // likelihood every so many iterations
};

struct BoHistoryEntry {
  std::size_t iter = 0;
  Vector d;
  double u = 0.0;
  double incumbent_u = 0.0;
  double acquisition_value = 0.0;  // NaN for the random initial points
};

struct BoResult {
  Vector d_star;
  double u_star = 0.0;
  std::vector<BoHistoryEntry> history;
};

/// Evaluate n_init random designs, then iterate fit -> acquire -> evaluate
/// until max_iter acquisitions or `patience` consecutive iterations without
/// an eps_improve gain on the incumbent. Objective failures (exceptions or
/// non-finite values) are recorded in the history and skipped; the GP is
/// never updated with non-finite values.
BoResult bo_optimize(const std::function<double(const Vector&)>& objective,
                     const BoConfig& cfg);

}  // namespace gooed
