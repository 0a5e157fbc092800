#include "gooed/bo.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gooed {

namespace {

constexpr std::uint64_t kTagBoInit = 0x0b0001;
constexpr std::uint64_t kTagBoAcquire = 0x0b0002;

constexpr double kQuietNan = std::numeric_limits<double>::quiet_NaN();

double distance(const Vector& a, const Vector& b) {
  double q = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) q += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(q);
}

}  // namespace

double matern52(double r, double l) {
  const double s = std::sqrt(5.0) * r / l;
  return (1.0 + s + s * s / 3.0) * std::exp(-s);
}

struct GpModel::Impl {
  std::vector<Vector> X;
  Vector U;
  double length_scale = 1.0;
  double lambda = 0.0;
  double u_mean = 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt;
  Eigen::VectorXd alpha;  // (K + lambda I)^-1 (U - u_mean)
};

GpModel::GpModel() = default;
GpModel::GpModel(GpModel&&) noexcept = default;
GpModel& GpModel::operator=(GpModel&&) noexcept = default;
GpModel::~GpModel() = default;

GpModel GpModel::fit(const std::vector<Vector>& X, const Vector& U, double length_scale,
                     double lambda) {
  if (X.empty() || X.size() != U.size())
    throw NumericError("gp fit: need k >= 1 matching points and values");
  if (!(length_scale > 0.0)) throw NumericError("gp fit: length scale must be > 0");

  const auto k = static_cast<Eigen::Index>(X.size());
  Eigen::MatrixXd K(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = matern52(distance(X[i], X[j]), length_scale);
      K(i, j) = v;
      K(j, i) = v;
    }

  GpModel m;
  m.impl_ = std::make_unique<Impl>();
  m.impl_->X = X;
  m.impl_->U = U;
  m.impl_->length_scale = length_scale;
  m.impl_->u_mean = std::accumulate(U.begin(), U.end(), 0.0) / static_cast<double>(U.size());

  double lam = std::max(lambda, 1e-12);
  for (int attempt = 0;; ++attempt) {
    Eigen::MatrixXd Kl = K;
    Kl.diagonal().array() += lam;
    m.impl_->llt.compute(Kl);
    if (m.impl_->llt.info() == Eigen::Success) break;
    if (attempt >= 3) throw NumericError("gp fit: Cholesky failed after lambda escalation");
    lam = std::max(lam, 1e-8) * 10.0;
  }
  m.impl_->lambda = lam;

  Eigen::VectorXd uc(k);
  for (Eigen::Index i = 0; i < k; ++i) uc(i) = U[i] - m.impl_->u_mean;
  m.impl_->alpha = m.impl_->llt.solve(uc);
  return m;
}

std::pair<double, double> GpModel::posterior(const Vector& d) const {
  const Impl& s = *impl_;
  const auto k = static_cast<Eigen::Index>(s.X.size());
  Eigen::VectorXd kv(k);
  for (Eigen::Index i = 0; i < k; ++i)
    kv(i) = matern52(distance(s.X[i], d), s.length_scale);
  const double mean = s.u_mean + kv.dot(s.alpha);
  const Eigen::VectorXd v = s.llt.matrixL().solve(kv);
  const double var = std::max(0.0, 1.0 - v.squaredNorm());
  return {mean, std::sqrt(var)};
}

double GpModel::log_marginal_likelihood() const {
  const Impl& s = *impl_;
  const auto k = static_cast<Eigen::Index>(s.X.size());
  Eigen::VectorXd uc(k);
  for (Eigen::Index i = 0; i < k; ++i) uc(i) = s.U[i] - s.u_mean;
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < k; ++i)
    log_det += std::log(s.llt.matrixL()(i, i));
  return -0.5 * uc.dot(s.alpha) - log_det -
         0.5 * static_cast<double>(k) * kLogTwoPi;
}

const std::vector<Vector>& GpModel::points() const { return impl_->X; }
const Vector& GpModel::values() const { return impl_->U; }
double GpModel::length_scale() const { return impl_->length_scale; }

double ucb(const GpModel& m, const Vector& d, double kappa) {
  const auto [mean, sd] = m.posterior(d);
  return mean + kappa * sd;
}

namespace {

Vector project_onto(const Bounds& bounds, Vector x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = std::min(bounds[i].hi, std::max(bounds[i].lo, x[i]));
  return x;
}

// Projected gradient ascent with backtracking; coarse accuracy is fine for
// an acquisition subproblem.
Vector local_ascent(const GpModel& m, const Bounds& bounds, double kappa, Vector x) {
  const std::size_t dim = bounds.size();
  double min_range = std::numeric_limits<double>::infinity();
  for (const Interval& iv : bounds) min_range = std::min(min_range, iv.hi - iv.lo);

  double f = ucb(m, x, kappa);
  double step = 0.1 * min_range;
  Vector grad(dim);
  for (int iter = 0; iter < 80; ++iter) {
    const double h = 1e-6 * min_range;
    for (std::size_t i = 0; i < dim; ++i) {
      Vector xp = x;
      Vector xm = x;
      xp[i] = std::min(bounds[i].hi, x[i] + h);
      xm[i] = std::max(bounds[i].lo, x[i] - h);
      const double denom = xp[i] - xm[i];
      grad[i] = denom > 0.0 ? (ucb(m, xp, kappa) - ucb(m, xm, kappa)) / denom : 0.0;
    }
    double norm = 0.0;
    for (double g : grad) norm += g * g;
    norm = std::sqrt(norm);
    if (norm < 1e-12) break;

    bool improved = false;
    while (step > 1e-10 * min_range) {
      Vector cand = x;
      for (std::size_t i = 0; i < dim; ++i) cand[i] += step * grad[i] / norm;
      cand = project_onto(bounds, cand);
      const double fc = ucb(m, cand, kappa);
      if (fc > f) {
        x = std::move(cand);
        f = fc;
        step *= 1.3;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  return x;
}

}  // namespace

Vector maximize_acquisition(const GpModel& m, const Bounds& bounds, std::size_t restarts,
                            double kappa, RngStream& rng) {
  if (restarts < 1) throw ConfigError("maximize_acquisition: restarts must be >= 1");
  std::vector<Vector> starts;
  starts.reserve(restarts + 1);
  for (std::size_t r = 0; r < restarts; ++r) {
    Vector x(bounds.size());
    for (std::size_t i = 0; i < bounds.size(); ++i)
      x[i] = rng.uniform(bounds[i].lo, bounds[i].hi);
    starts.push_back(std::move(x));
  }
  // Seed one start at the incumbent training point.
  const Vector& values = m.values();
  std::size_t best_idx = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best_idx]) best_idx = i;
  starts.push_back(project_onto(bounds, m.points()[best_idx]));

  Vector best;
  double best_value = -std::numeric_limits<double>::infinity();
  for (const Vector& s : starts) {
    const Vector x = local_ascent(m, bounds, kappa, s);
    const double v = ucb(m, x, kappa);
    if (v > best_value) {
      best_value = v;
      best = x;
    }
  }
  return best;
}

BoResult bo_optimize(const std::function<double(const Vector&)>& objective,
                     const BoConfig& cfg) {
  if (cfg.bounds.empty()) throw ConfigError("bo_optimize: empty bounds");
  if (cfg.n_init < 1 || !(cfg.kappa > 0.0))
    throw ConfigError("bo_optimize: requires n_init >= 1 and kappa > 0");

  BoResult result;
  std::vector<Vector> X;
  Vector U;
  double incumbent = -std::numeric_limits<double>::infinity();

  const auto record = [&](std::size_t iter, const Vector& d, double u, double acq) {
    if (std::isfinite(u) && u > incumbent) {
      incumbent = u;
      result.d_star = d;
      result.u_star = u;
    }
    result.history.push_back({iter, d, u, incumbent, acq});
    if (std::isfinite(u)) {
      X.push_back(d);
      U.push_back(u);
    }
  };

  const auto evaluate = [&](const Vector& d) -> double {
    try {
      const double u = objective(d);
      return std::isfinite(u) ? u : kQuietNan;
    } catch (const Error&) {
      return kQuietNan;
    }
  };

  RngStream init_rng = RngStream::derive(cfg.seed, kTagBoInit);
  std::size_t iter = 0;
  for (std::size_t i = 0; i < cfg.n_init; ++i, ++iter) {
    Vector d(cfg.bounds.size());
    for (std::size_t k = 0; k < d.size(); ++k)
      d[k] = init_rng.uniform(cfg.bounds[k].lo, cfg.bounds[k].hi);
    record(iter, d, evaluate(d), kQuietNan);
  }

  double length_scale = cfg.length_scale;
  std::size_t since_improvement = 0;
  for (std::size_t it = 0; it < cfg.max_iter; ++it, ++iter) {
    if (X.empty()) break;  // every initial evaluation failed

    double lambda = cfg.lambda;
    if (lambda < 0.0) {
      const double mean = std::accumulate(U.begin(), U.end(), 0.0) /
                          static_cast<double>(U.size());
      double var = 0.0;
      for (double u : U) var += (u - mean) * (u - mean);
      var /= static_cast<double>(std::max<std::size_t>(1, U.size() - 1));
      lambda = std::max(1e-6, 1e-4 * var);
    }

    if (cfg.retune_every > 0 && it > 0 && it % cfg.retune_every == 0 && X.size() >= 4) {
      double best_l = length_scale;
      double best_lml = -std::numeric_limits<double>::infinity();
      for (int g = 0; g < 13; ++g) {
        const double l = std::exp(std::log(0.1) +
                                  (std::log(3.0) - std::log(0.1)) * g / 12.0);
        const double lml = GpModel::fit(X, U, l, lambda).log_marginal_likelihood();
        if (lml > best_lml) {
          best_lml = lml;
          best_l = l;
        }
      }
      length_scale = best_l;
    }

    const GpModel gp = GpModel::fit(X, U, length_scale, lambda);
    RngStream acq_rng = RngStream::derive(cfg.seed, kTagBoAcquire, it);
    const Vector d_next =
        maximize_acquisition(gp, cfg.bounds, cfg.restarts, cfg.kappa, acq_rng);
    const double acq = ucb(gp, d_next, cfg.kappa);

    const double before = incumbent;
    record(iter, d_next, evaluate(d_next), acq);
    if (incumbent > before + cfg.eps_improve) {
      since_improvement = 0;
    } else if (++since_improvement >= cfg.patience) {
      break;
    }
  }

  if (!std::isfinite(incumbent))
    throw EstimationError("bo_optimize: every objective evaluation failed");
  return result;
}

}  // namespace gooed
