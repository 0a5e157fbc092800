#include "gooed/types.hpp"

#include <cmath>
#include <sstream>

namespace gooed {

namespace {

std::string format_point(const Vector& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ")";
  return os.str();
}

}  // namespace

PriorSpec PriorSpec::uniform_box(Vector lo, Vector hi) {
  if (lo.empty() || lo.size() != hi.size())
    throw ConfigError("uniform_box: dimension mismatch");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i])) throw ConfigError("uniform_box: requires lo < hi");
  PriorSpec s;
  s.kind = PriorKind::kUniformBox;
  s.a = std::move(lo);
  s.b = std::move(hi);
  return s;
}

PriorSpec PriorSpec::gaussian_diag(Vector mean, Vector sd) {
  if (mean.empty() || mean.size() != sd.size())
    throw ConfigError("gaussian_diag: dimension mismatch");
  for (double s : sd)
    if (!(s > 0.0)) throw ConfigError("gaussian_diag: requires sd > 0");
  PriorSpec s;
  s.kind = PriorKind::kGaussianDiag;
  s.a = std::move(mean);
  s.b = std::move(sd);
  return s;
}

double PriorSpec::log_density(const Vector& theta) const {
  if (theta.size() != dim()) throw ConfigError("prior log_density: dimension mismatch");
  double lp = 0.0;
  if (kind == PriorKind::kUniformBox) {
    for (std::size_t i = 0; i < theta.size(); ++i) {
      if (theta[i] < a[i] || theta[i] > b[i])
        return -std::numeric_limits<double>::infinity();
      lp -= std::log(b[i] - a[i]);
    }
  } else {
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const double r = (theta[i] - a[i]) / b[i];
      lp += -0.5 * kLogTwoPi - std::log(b[i]) - 0.5 * r * r;
    }
  }
  return lp;
}

Vector PriorSpec::sample(RngStream& rng) const {
  Vector theta(dim());
  if (kind == PriorKind::kUniformBox) {
    for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = rng.uniform(a[i], b[i]);
  } else {
    for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = a[i] + b[i] * rng.normal();
  }
  return theta;
}

bool PriorSpec::in_support(const Vector& theta) const {
  if (kind != PriorKind::kUniformBox) return true;
  for (std::size_t i = 0; i < theta.size(); ++i)
    if (theta[i] < a[i] || theta[i] > b[i]) return false;
  return true;
}

void PriorSpec::reflect_into_support(Vector& theta) const {
  if (kind != PriorKind::kUniformBox) return;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double w = b[i] - a[i];
    double t = theta[i];
    if (t < a[i]) t = a[i] + (a[i] - t);
    if (t > b[i]) t = b[i] - (t - b[i]);
    // A huge jitter can overshoot a single reflection; clamp as backstop.
    if (t < a[i] || t > b[i]) t = std::min(b[i], std::max(a[i], t));
    theta[i] = t;
    (void)w;
  }
}

Vector PriorSpec::coordinate_scale() const {
  Vector s(dim());
  for (std::size_t i = 0; i < s.size(); ++i)
    s[i] = kind == PriorKind::kUniformBox ? b[i] - a[i] : b[i];
  return s;
}

std::vector<Vector> sample_prior(const PriorSpec& prior, std::size_t n, RngStream& rng) {
  if (n < 1) throw ConfigError("sample_prior: n must be >= 1");
  std::vector<Vector> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(prior.sample(rng));
  return out;
}

Vector simulate_observation(const Problem& p, const Vector& theta, const Vector& d,
                            RngStream& rng) {
  Vector y = p.observe(theta, d);
  if (y.size() != p.n_y) throw ModelEvalError("observe: output dimension mismatch");
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i]))
      throw ModelEvalError("observe: non-finite G at theta=" + format_point(theta) +
                           " d=" + format_point(d));
    y[i] += p.noise.sd[i] * rng.normal();
  }
  return y;
}

double gaussian_log_density(const Vector& residual, const Vector& sd) {
  double lp = 0.0;
  for (std::size_t i = 0; i < residual.size(); ++i) {
    const double r = residual[i] / sd[i];
    lp += -0.5 * kLogTwoPi - std::log(sd[i]) - 0.5 * r * r;
  }
  return lp;
}

double log_likelihood(const Problem& p, const Vector& y, const Vector& theta,
                      const Vector& d) {
  const Vector g = p.observe(theta, d);
  if (g.size() != p.n_y || y.size() != p.n_y)
    throw ModelEvalError("log_likelihood: dimension mismatch");
  Vector residual(p.n_y);
  for (std::size_t i = 0; i < p.n_y; ++i) {
    residual[i] = y[i] - g[i];
    if (!std::isfinite(residual[i]))
      throw ModelEvalError("log_likelihood: non-finite residual at theta=" +
                           format_point(theta) + " d=" + format_point(d));
  }
  return gaussian_log_density(residual, p.noise.sd);
}

Vector predict_qoi(const Problem& p, const Vector& theta, RngStream& rng) {
  Vector z = p.predict_mean(theta);
  if (z.size() != p.n_z) throw ModelEvalError("predict: output dimension mismatch");
  if (p.prediction_noise_sd) {
    for (std::size_t i = 0; i < z.size(); ++i)
      z[i] += (*p.prediction_noise_sd)[i] * rng.normal();
  }
  for (double v : z)
    if (!std::isfinite(v))
      throw ModelEvalError("predict: non-finite H at theta=" + format_point(theta));
  return z;
}

}  // namespace gooed
