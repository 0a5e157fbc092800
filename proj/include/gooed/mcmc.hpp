#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "gooed/types.hpp"

namespace gooed {

using LogPostFn = std::function<double(const Vector&)>;

/// Settings for the affine-invariant stretch-move ensemble sampler.
struct StretchConfig {
  std::size_t n_walkers = 0;   // 0 => max(2 * n_theta, 10), rounded up to even
  double a = 2.0;              // stretch scale, must be > 1
  std::size_t n_steps = 1000;  // default step budget for standalone chains
  std::size_t burn_in = 50;
  double init_jitter_sd = -1.0;  // <0 => 1e-4 * prior coordinate scale
};

/// Inverse-CDF transform of the stretch-move scale density p(gamma)
/// proportional to 1/sqrt(gamma) on [1/a, a]: gamma = ((a-1)u + 1)^2 / a.
double sample_gamma_from_u(double a, double u);
double sample_gamma(double a, RngStream& rng);

/// Analytic CDF of the stretch scale on [1/a, a], for distribution tests.
double stretch_gamma_cdf(double a, double gamma);

/// Walker ensemble with cached unnormalized log posteriors. One step()
/// updates every walker once using the two-subset scheme: the first half
/// proposes with partners from the second half, then vice versa against
/// the already-updated first half.
class Ensemble {
 public:
  Ensemble(std::vector<Vector> positions, const LogPostFn& log_post);

  void step(const LogPostFn& log_post, double a, std::size_t n_theta, RngStream& rng);

  const std::vector<Vector>& positions() const { return positions_; }
  const Vector& log_posts() const { return log_posts_; }
  std::size_t n_walkers() const { return positions_.size(); }
  std::size_t steps_taken() const { return steps_; }

  /// accepted / proposed; error if no step has been taken yet.
  double acceptance_rate() const;

 private:
  std::vector<Vector> positions_;
  Vector log_posts_;
  std::size_t accepted_ = 0;
  std::size_t proposed_ = 0;
  std::size_t steps_ = 0;
};

struct ChainDiagnostics {
  double acceptance_rate = 0.0;
  std::size_t steps_post_burn_in = 0;
  std::size_t n_walkers = 0;
  double burn_in_seconds = 0.0;
  double sampling_seconds = 0.0;  // post-burn-in stepping + pooling
};

/// Runs a chain initialized at init_center plus Gaussian jitter (reflected
/// into the prior's support when one is given), discards `burn_in` steps,
/// then steps until ceil(n_samples / n_walkers) whole-ensemble snapshots
/// are pooled and returns the last n_samples pooled positions.
std::vector<Vector> run_chain(const StretchConfig& cfg, const LogPostFn& log_post,
                              const Vector& init_center, const PriorSpec* support,
                              std::size_t n_samples, RngStream& rng,
                              ChainDiagnostics* diag = nullptr);

/// Effective walker count for a config: explicit value, or the default
/// max(2 * n_theta, 10) rounded up to even.
std::size_t resolve_n_walkers(const StretchConfig& cfg, std::size_t n_theta);

}  // namespace gooed
