#pragma once

#include <cstddef>
#include <vector>

#include "gooed/types.hpp"

namespace gooed {

/// Isotropic Gaussian kernel density estimate with scalar bandwidth b
/// (the kernel standard deviation, in z units). Exact duplicate samples
/// are collapsed into weighted kernels; the density is unchanged but
/// evaluation cost drops sharply for heavily duplicated MCMC output.
class KdeModel {
 public:
  static KdeModel fit(const std::vector<Vector>& samples, double b);

  /// Same model from row-major flat storage (n rows of n_z doubles); the
  /// nested estimator keeps its sample sets flat to bound memory.
  static KdeModel fit_flat(const std::vector<double>& flat, std::size_t n_z, double b);

  /// Log mixture density via log-sum-exp; stays finite for distances up to
  /// hundreds of bandwidths and returns -inf only on true underflow.
  double log_density(const Vector& z) const;
  double log_density_at(const double* z) const;

  /// Log density at fitted sample `original_index` with that sample's own
  /// kernel removed (leave-one-out evaluation).
  double loo_log_density(std::size_t original_index) const;

  double bandwidth() const { return b_; }
  std::size_t dim() const { return n_z_; }
  std::size_t size() const { return n_total_; }
  std::size_t unique_size() const { return points_.size(); }
  const std::vector<Vector>& unique_points() const { return points_; }

 private:
  std::vector<Vector> points_;       // unique sample values
  std::vector<double> weights_;      // multiplicity per unique value
  std::vector<std::size_t> cluster_of_;  // original index -> unique index
  double b_ = 0.0;
  std::size_t n_z_ = 0;
  std::size_t n_total_ = 0;

  double log_density_impl(const double* z, std::size_t skip_cluster,
                          double skip_weight, double denom) const;
};

/// Bandwidth selection policy: a fixed value, or 5-fold-style cross
/// validation on the first n_warm sample sets with the mean of the
/// selected values frozen afterwards.
struct BandwidthPolicy {
  enum class Kind { kFixed, kAdaptive };
  Kind kind = Kind::kAdaptive;
  double b = 0.0;             // kFixed only
  std::vector<double> grid;   // kAdaptive; empty => per-set default grid
  std::size_t cv_folds = 5;
  std::size_t n_warm = 10;

  static BandwidthPolicy fixed(double b);
  static BandwidthPolicy adaptive(std::size_t folds = 5, std::vector<double> grid = {},
                                  std::size_t n_warm = 10);
};

/// 25 log-spaced candidates spanning [1e-3 R, R], where R is the median of
/// the per-coordinate sample ranges (R falls back to 1 for degenerate
/// all-identical sets).
std::vector<double> default_bandwidth_grid(const std::vector<Vector>& samples);

/// Returns the grid bandwidth maximizing the mean held-out log likelihood
/// over a random folds-partition; ties break toward the larger bandwidth.
double cv_select_bandwidth(const std::vector<Vector>& samples,
                           const std::vector<double>& grid, std::size_t folds,
                           RngStream& rng);

/// Fixed -> b. Adaptive -> arithmetic mean of the CV selections over the
/// first n_warm warm sample sets.
double resolve_bandwidth(const BandwidthPolicy& policy,
                         const std::vector<std::vector<Vector>>& warm_sample_sets,
                         RngStream& rng);

}  // namespace gooed
