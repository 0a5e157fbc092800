#include "gooed/eig.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "gooed/parallel.hpp"

namespace gooed {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Stream-derivation tags; one namespace per consumer keeps parallel
// substreams independent of each other and of execution order.
constexpr std::uint64_t kTagOuterIteration = 0x0ed0001;
constexpr std::uint64_t kTagWarmCv = 0x0ed0002;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double mean_of(const Vector& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Midpoint tensor grid over the prior's effective support (the box itself,
// or mean +- 8 sd for Gaussian priors).
struct ThetaGrid {
  std::vector<Vector> nodes;
  Vector log_prior;
  double cell_volume = 0.0;
};

ThetaGrid build_theta_grid(const PriorSpec& prior, std::size_t nodes_per_axis) {
  const std::size_t dim = prior.dim();
  Vector lo(dim), hi(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    if (prior.kind == PriorKind::kUniformBox) {
      lo[k] = prior.a[k];
      hi[k] = prior.b[k];
    } else {
      lo[k] = prior.a[k] - 8.0 * prior.b[k];
      hi[k] = prior.a[k] + 8.0 * prior.b[k];
    }
  }
  ThetaGrid g;
  g.cell_volume = 1.0;
  std::vector<Vector> axes(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    const double step = (hi[k] - lo[k]) / static_cast<double>(nodes_per_axis);
    g.cell_volume *= step;
    axes[k].resize(nodes_per_axis);
    for (std::size_t m = 0; m < nodes_per_axis; ++m)
      axes[k][m] = lo[k] + (static_cast<double>(m) + 0.5) * step;
  }
  std::size_t total = 1;
  for (std::size_t k = 0; k < dim; ++k) total *= nodes_per_axis;
  g.nodes.reserve(total);
  g.log_prior.reserve(total);
  Vector theta(dim);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    for (std::size_t k = 0; k < dim; ++k) {
      theta[k] = axes[k][rem % nodes_per_axis];
      rem /= nodes_per_axis;
    }
    g.nodes.push_back(theta);
    g.log_prior.push_back(prior.log_density(theta));
  }
  return g;
}

// KL(posterior || prior) for one observation, with the posterior normalized
// on the grid by the midpoint rule. g_values holds G(theta_m, d) per node.
double grid_posterior_kl(const ThetaGrid& grid, const std::vector<Vector>& g_values,
                         const Vector& y, const Vector& noise_sd) {
  const std::size_t m_count = grid.nodes.size();
  thread_local Vector log_w;
  log_w.assign(m_count, kNegInf);
  double max_lw = kNegInf;
  Vector residual(y.size());
  for (std::size_t m = 0; m < m_count; ++m) {
    for (std::size_t j = 0; j < y.size(); ++j) residual[j] = y[j] - g_values[m][j];
    log_w[m] = grid.log_prior[m] + gaussian_log_density(residual, noise_sd);
    if (log_w[m] > max_lw) max_lw = log_w[m];
  }
  double z_acc = 0.0;
  for (double lw : log_w) z_acc += std::exp(lw - max_lw);
  const double log_z = max_lw + std::log(z_acc) + std::log(grid.cell_volume);

  double kl = 0.0;
  for (std::size_t m = 0; m < m_count; ++m) {
    const double lq = log_w[m] - log_z;
    const double q = std::exp(lq);
    if (q > 0.0) kl += q * (lq - grid.log_prior[m]);
  }
  return kl * grid.cell_volume;
}

}  // namespace

Vector PriorPredictiveCache::standardize(const Vector& z) const {
  Vector out(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) out[j] = (z[j] - z_mean[j]) / z_scale[j];
  return out;
}

PriorPredictiveCache prior_predictive_setup(const Problem& p, std::size_t n_out,
                                            const BandwidthPolicy& policy,
                                            RngStream& rng) {
  if (n_out < 2) throw ConfigError("prior_predictive_setup: n_out must be >= 2");
  PriorPredictiveCache cache;
  cache.theta_samples = sample_prior(p.prior, n_out, rng);
  cache.z_samples.reserve(n_out);
  for (const Vector& theta : cache.theta_samples)
    cache.z_samples.push_back(predict_qoi(p, theta, rng));

  cache.z_mean.assign(p.n_z, 0.0);
  cache.z_scale.assign(p.n_z, 1.0);
  if (p.n_z > 1) {
    for (std::size_t j = 0; j < p.n_z; ++j) {
      double m = 0.0;
      for (const Vector& z : cache.z_samples) m += z[j];
      m /= static_cast<double>(n_out);
      double var = 0.0;
      for (const Vector& z : cache.z_samples) var += (z[j] - m) * (z[j] - m);
      var /= static_cast<double>(n_out - 1);
      cache.z_mean[j] = m;
      cache.z_scale[j] = var > 0.0 ? std::sqrt(var) : 1.0;
    }
  }
  cache.log_jacobian = 0.0;
  for (double s : cache.z_scale) cache.log_jacobian -= std::log(s);

  cache.z_min.assign(p.n_z, std::numeric_limits<double>::infinity());
  cache.z_max.assign(p.n_z, -std::numeric_limits<double>::infinity());
  for (const Vector& z : cache.z_samples)
    for (std::size_t j = 0; j < p.n_z; ++j) {
      cache.z_min[j] = std::min(cache.z_min[j], z[j]);
      cache.z_max[j] = std::max(cache.z_max[j], z[j]);
    }

  std::vector<Vector> z_std;
  z_std.reserve(n_out);
  for (const Vector& z : cache.z_samples) z_std.push_back(cache.standardize(z));

  cache.bandwidth = resolve_bandwidth(policy, {z_std}, rng);
  cache.kde = KdeModel::fit(z_std, cache.bandwidth);

  cache.log_pz.resize(n_out);
  for (std::size_t i = 0; i < n_out; ++i)
    cache.log_pz[i] = cache.kde.log_density(z_std[i]) + cache.log_jacobian;
  return cache;
}

EigEstimate expected_utility_nmc(const Problem& p, const Vector& d, const NmcConfig& cfg,
                                 const PriorPredictiveCache& cache) {
  const auto t_start = std::chrono::steady_clock::now();
  if (d.size() != p.n_d) throw ConfigError("expected_utility_nmc: design dimension mismatch");
  if (cfg.n_out < 1 || cfg.n_in < 2)
    throw ConfigError("expected_utility_nmc: requires n_out >= 1, n_in >= 2");
  if (cfg.n_out != cache.theta_samples.size())
    throw ConfigError("expected_utility_nmc: cache built with a different n_out");

  struct IterData {
    std::vector<double> z_flat;  // standardized, row-major n_in x n_z
    double chain_seconds = 0.0;
    double sampling_seconds = 0.0;
  };
  std::vector<IterData> iters(cfg.n_out);

  const auto sample_iteration = [&](std::size_t i) {
    for (int retry = 0;; ++retry) {
      try {
        RngStream rng = RngStream::derive(cfg.seed, kTagOuterIteration,
                                          i * 2 + static_cast<std::size_t>(retry));
        const Vector theta_true = p.prior.sample(rng);
        const Vector y = simulate_observation(p, theta_true, d, rng);
        const LogPostFn log_post = [&](const Vector& theta) -> double {
          const double lp = p.prior.log_density(theta);
          if (!std::isfinite(lp)) return kNegInf;
          try {
            return lp + log_likelihood(p, y, theta, d);
          } catch (const ModelEvalError&) {
            return kNegInf;  // blown-up forward model => auto-rejected proposal
          }
        };
        ChainDiagnostics diag;
        const std::vector<Vector> posterior =
            run_chain(cfg.mcmc, log_post, theta_true, &p.prior, cfg.n_in, rng, &diag);
        IterData data;
        data.chain_seconds = diag.burn_in_seconds + diag.sampling_seconds;
        data.sampling_seconds = diag.sampling_seconds;
        data.z_flat.reserve(cfg.n_in * p.n_z);
        for (const Vector& theta : posterior) {
          const Vector z = predict_qoi(p, theta, rng);
          for (std::size_t j = 0; j < p.n_z; ++j)
            data.z_flat.push_back((z[j] - cache.z_mean[j]) / cache.z_scale[j]);
        }
        iters[i] = std::move(data);
        return;
      } catch (const Error& e) {
        if (retry >= 1)
          throw EstimationError("outer iteration " + std::to_string(i) +
                                " failed twice: " + e.what());
      }
    }
  };
  parallel_for(cfg.n_out, cfg.threads, sample_iteration);

  // Bandwidth: fixed value, or mean CV selection over the first warm
  // iterations, frozen for this design.
  double kde_seconds = 0.0;
  double bandwidth = 0.0;
  if (cfg.bandwidth.kind == BandwidthPolicy::Kind::kFixed) {
    bandwidth = cfg.bandwidth.b;
  } else {
    const auto t_cv = std::chrono::steady_clock::now();
    const std::size_t warm = std::min<std::size_t>(cfg.bandwidth.n_warm, cfg.n_out);
    double acc = 0.0;
    for (std::size_t i = 0; i < warm; ++i) {
      std::vector<Vector> rows(cfg.n_in, Vector(p.n_z));
      for (std::size_t r = 0; r < cfg.n_in; ++r)
        for (std::size_t j = 0; j < p.n_z; ++j)
          rows[r][j] = iters[i].z_flat[r * p.n_z + j];
      const std::vector<double>& grid =
          cfg.bandwidth.grid.empty() ? default_bandwidth_grid(rows) : cfg.bandwidth.grid;
      RngStream cv_rng = RngStream::derive(cfg.seed, kTagWarmCv, i);
      acc += cv_select_bandwidth(rows, grid, cfg.bandwidth.cv_folds, cv_rng);
    }
    bandwidth = acc / static_cast<double>(warm);
    kde_seconds += seconds_since(t_cv);
  }

  Vector inner_terms(cfg.n_out, 0.0);
  Vector kde_iter_seconds(cfg.n_out, 0.0);
  const auto inner_evaluation = [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    const KdeModel kde = KdeModel::fit_flat(iters[i].z_flat, p.n_z, bandwidth);
    double acc = 0.0;
    for (std::size_t r = 0; r < cfg.n_in; ++r) {
      const double ld = cfg.loo_inner
                            ? kde.loo_log_density(r)
                            : kde.log_density_at(iters[i].z_flat.data() + r * p.n_z);
      acc += ld;
    }
    inner_terms[i] =
        acc / static_cast<double>(cfg.n_in) + cache.log_jacobian;
    if (!std::isfinite(inner_terms[i]))
      throw EstimationError("expected_utility_nmc: non-finite inner term at iteration " +
                            std::to_string(i));
    kde_iter_seconds[i] = seconds_since(t0);
  };
  parallel_for(cfg.n_out, cfg.threads, inner_evaluation);

  EigEstimate est;
  est.term_inner_mean = mean_of(inner_terms);
  est.term_prior_pred_mean = mean_of(cache.log_pz);
  est.u = est.term_inner_mean - est.term_prior_pred_mean;
  est.n_out = cfg.n_out;
  est.n_in = cfg.n_in;
  est.d = d;
  est.bandwidth = bandwidth;
  for (const IterData& it : iters) {
    est.mcmc_time_s += it.chain_seconds;
    est.mcmc_sampling_time_s += it.sampling_seconds;
  }
  est.kde_time_s = kde_seconds + std::accumulate(kde_iter_seconds.begin(),
                                                 kde_iter_seconds.end(), 0.0);
  est.wall_time_s = seconds_since(t_start);
  return est;
}

double expected_utility_grid(const Problem& p, const Vector& d,
                             std::size_t grid_nodes, std::size_t n_out,
                             RngStream& rng, GridTarget target) {
  if (p.n_theta > 2)
    throw ConfigError("expected_utility_grid: only n_theta <= 2 is supported");
  if (target == GridTarget::kQoiIdentity && !p.predict_is_identity)
    throw ConfigError("expected_utility_grid: qoi-identity target requires identity H");
  if (d.size() != p.n_d) throw ConfigError("expected_utility_grid: design mismatch");

  const ThetaGrid grid = build_theta_grid(p.prior, grid_nodes);
  std::vector<Vector> g_values(grid.nodes.size());
  for (std::size_t m = 0; m < grid.nodes.size(); ++m)
    g_values[m] = p.observe(grid.nodes[m], d);

  double acc = 0.0;
  for (std::size_t i = 0; i < n_out; ++i) {
    const Vector theta_true = p.prior.sample(rng);
    const Vector y = simulate_observation(p, theta_true, d, rng);
    acc += grid_posterior_kl(grid, g_values, y, p.noise.sd);
  }
  return acc / static_cast<double>(n_out);
}

InfoGain info_gain_realization(const Problem& p, const Vector& d,
                               const Vector& theta_true, RngStream& rng,
                               const NmcConfig& cfg,
                               const PriorPredictiveCache& cache) {
  if (p.n_z != 1)
    throw ConfigError("info_gain_realization: z-grid quadrature requires n_z == 1");
  const Vector y = simulate_observation(p, theta_true, d, rng);

  InfoGain out;
  if (p.n_theta <= 2) {
    const std::size_t nodes = p.n_theta == 1 ? 2000 : 200;
    const ThetaGrid grid = build_theta_grid(p.prior, nodes);
    std::vector<Vector> g_values(grid.nodes.size());
    for (std::size_t m = 0; m < grid.nodes.size(); ++m)
      g_values[m] = p.observe(grid.nodes[m], d);
    out.ig_theta = grid_posterior_kl(grid, g_values, y, p.noise.sd);
  } else {
    throw ConfigError("info_gain_realization: grid path requires n_theta <= 2");
  }

  const LogPostFn log_post = [&](const Vector& theta) -> double {
    const double lp = p.prior.log_density(theta);
    if (!std::isfinite(lp)) return kNegInf;
    try {
      return lp + log_likelihood(p, y, theta, d);
    } catch (const ModelEvalError&) {
      return kNegInf;
    }
  };
  const std::vector<Vector> posterior =
      run_chain(cfg.mcmc, log_post, theta_true, &p.prior, cfg.n_in, rng);
  std::vector<Vector> z_samples;
  z_samples.reserve(posterior.size());
  for (const Vector& theta : posterior) z_samples.push_back(predict_qoi(p, theta, rng));

  const double b_post = resolve_bandwidth(cfg.bandwidth, {z_samples}, rng);
  const KdeModel kde_post = KdeModel::fit(z_samples, b_post);

  // 2001 uniform nodes over the prior-predictive range padded by three
  // bandwidths, midpoint quadrature of the posterior-vs-prior KL.
  const double pad = 3.0 * std::max(b_post, cache.bandwidth * cache.z_scale[0]);
  const double lo = cache.z_min[0] - pad;
  const double hi = cache.z_max[0] + pad;
  constexpr std::size_t kNodes = 2001;
  const double step = (hi - lo) / static_cast<double>(kNodes);
  double kl = 0.0;
  Vector zq(1);
  for (std::size_t m = 0; m < kNodes; ++m) {
    zq[0] = lo + (static_cast<double>(m) + 0.5) * step;
    const double lp_post = kde_post.log_density(zq);
    const double q = std::exp(lp_post);
    if (q <= 0.0) continue;
    const double lp_prior =
        cache.kde.log_density(cache.standardize(zq)) + cache.log_jacobian;
    kl += q * (lp_post - lp_prior);
  }
  out.ig_z = kl * step;
  return out;
}

}  // namespace gooed
