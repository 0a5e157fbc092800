#include "gooed/mcmc.hpp"

#include <cassert>
#include <chrono>
#include <cmath>
#include <limits>

namespace gooed {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

double sample_gamma_from_u(double a, double u) {
  const double r = (a - 1.0) * u + 1.0;
  return r * r / a;
}

double sample_gamma(double a, RngStream& rng) {
  if (!(a > 1.0)) throw ConfigError("sample_gamma: requires a > 1");
  return sample_gamma_from_u(a, rng.uniform());
}

double stretch_gamma_cdf(double a, double gamma) {
  const double lo = 1.0 / std::sqrt(a);
  const double hi = std::sqrt(a);
  if (gamma <= lo * lo) return 0.0;
  if (gamma >= hi * hi) return 1.0;
  return (std::sqrt(gamma) - lo) / (hi - lo);
}

Ensemble::Ensemble(std::vector<Vector> positions, const LogPostFn& log_post)
    : positions_(std::move(positions)) {
  if (positions_.size() < 4 || positions_.size() % 2 != 0)
    throw EstimationError("ensemble: walker count must be even and >= 4");
  log_posts_.resize(positions_.size());
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    log_posts_[i] = log_post(positions_[i]);
    if (!std::isfinite(log_posts_[i]))
      throw EstimationError("ensemble: walker initialized at non-finite log posterior");
  }
}

void Ensemble::step(const LogPostFn& log_post, double a, std::size_t n_theta,
                    RngStream& rng) {
  const std::size_t n = positions_.size();
  const std::size_t half = n / 2;
  const double gamma_exponent = static_cast<double>(n_theta) - 1.0;
  Vector proposal(n_theta);

  const auto update_subset = [&](std::size_t begin, std::size_t end,
                                 std::size_t other_begin, std::size_t other_count) {
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t j = other_begin + rng.uniform_index(other_count);
      const double gamma = sample_gamma(a, rng);
      const Vector& xi = positions_[i];
      const Vector& xj = positions_[j];
      for (std::size_t k = 0; k < n_theta; ++k)
        proposal[k] = xj[k] + gamma * (xi[k] - xj[k]);
      const double lp = log_post(proposal);
      ++proposed_;
      const double u = rng.uniform();
      if (std::isfinite(lp)) {
        const double log_alpha = gamma_exponent * std::log(gamma) + lp - log_posts_[i];
        if (std::log(u) < log_alpha) {
          positions_[i] = proposal;
          log_posts_[i] = lp;
          ++accepted_;
        }
      }
      // Non-finite proposals count as rejections, never failures.
    }
  };

  update_subset(0, half, half, n - half);
  update_subset(half, n, 0, half);
  ++steps_;

#ifndef NDEBUG
  // Cached log posterior must always match recomputation.
  const std::size_t check = steps_ % n;
  const double lp = log_post(positions_[check]);
  assert(std::fabs(lp - log_posts_[check]) <=
         1e-10 * std::max(1.0, std::fabs(log_posts_[check])));
#endif
}

double Ensemble::acceptance_rate() const {
  if (proposed_ == 0)
    throw EstimationError("acceptance_rate: no steps taken yet");
  return static_cast<double>(accepted_) / static_cast<double>(proposed_);
}

std::size_t resolve_n_walkers(const StretchConfig& cfg, std::size_t n_theta) {
  std::size_t n = cfg.n_walkers;
  if (n == 0) n = std::max<std::size_t>(2 * n_theta, 10);
  if (n % 2 != 0) ++n;
  if (n < std::max<std::size_t>(4, 2 * n_theta))
    throw ConfigError("stretch sampler: n_walkers must be >= max(4, 2*n_theta)");
  return n;
}

std::vector<Vector> run_chain(const StretchConfig& cfg, const LogPostFn& log_post,
                              const Vector& init_center, const PriorSpec* support,
                              std::size_t n_samples, RngStream& rng,
                              ChainDiagnostics* diag) {
  if (!(cfg.a > 1.0)) throw ConfigError("stretch sampler: requires a > 1");
  const std::size_t n_theta = init_center.size();
  const std::size_t n_walkers = resolve_n_walkers(cfg, n_theta);

  if (support && !support->in_support(init_center))
    throw EstimationError("run_chain: init_center outside prior support");
  if (!std::isfinite(log_post(init_center)))
    throw EstimationError("run_chain: init_center has non-finite log posterior");

  Vector jitter(n_theta, cfg.init_jitter_sd);
  if (cfg.init_jitter_sd < 0.0) {
    if (!support)
      throw ConfigError("run_chain: init_jitter_sd must be set when no prior is given");
    jitter = support->coordinate_scale();
    for (double& j : jitter) j *= 1e-4;
  }

  std::vector<Vector> positions(n_walkers);
  for (std::size_t w = 0; w < n_walkers; ++w) {
    Vector x = init_center;
    bool ok = false;
    for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
      for (std::size_t k = 0; k < n_theta; ++k)
        x[k] = init_center[k] + jitter[k] * rng.normal();
      if (support) support->reflect_into_support(x);
      ok = std::isfinite(log_post(x));
    }
    if (!ok) throw EstimationError("run_chain: failed to jitter a walker to finite density");
    positions[w] = std::move(x);
  }

  Ensemble ensemble(std::move(positions), log_post);

  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t s = 0; s < cfg.burn_in; ++s) ensemble.step(log_post, cfg.a, n_theta, rng);
  const double burn_seconds = seconds_since(t0);

  const std::size_t snapshots =
      std::max<std::size_t>(1, (n_samples + n_walkers - 1) / n_walkers);
  std::vector<Vector> pool;
  pool.reserve(snapshots * n_walkers);
  const auto t1 = std::chrono::steady_clock::now();
  for (std::size_t s = 0; s < snapshots; ++s) {
    ensemble.step(log_post, cfg.a, n_theta, rng);
    for (const Vector& x : ensemble.positions()) pool.push_back(x);
  }
  const double sampling_seconds = seconds_since(t1);

  if (diag) {
    diag->acceptance_rate = ensemble.acceptance_rate();
    diag->steps_post_burn_in = snapshots;
    diag->n_walkers = n_walkers;
    diag->burn_in_seconds = burn_seconds;
    diag->sampling_seconds = sampling_seconds;
  }

  return {pool.end() - static_cast<std::ptrdiff_t>(n_samples), pool.end()};
}

}  // namespace gooed
