#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gooed/common.hpp"
#include "gooed/rng.hpp"

namespace gooed {

using Vector = std::vector<double>;

inline constexpr double kLogTwoPi = 1.8378770664093454836;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};
using Bounds = std::vector<Interval>;

enum class PriorKind { kUniformBox, kGaussianDiag };

/// Prior over the model parameters. Uniform box priors cover every problem
/// in the benchmark registry; the diagonal Gaussian exists for the
/// linear-Gaussian validation oracle.
struct PriorSpec {
  PriorKind kind = PriorKind::kUniformBox;
  Vector a;  // UniformBox: lower bounds.  GaussianDiag: means.
  Vector b;  // UniformBox: upper bounds.  GaussianDiag: standard deviations.

  static PriorSpec uniform_box(Vector lo, Vector hi);
  static PriorSpec gaussian_diag(Vector mean, Vector sd);

  std::size_t dim() const { return a.size(); }
  double log_density(const Vector& theta) const;
  Vector sample(RngStream& rng) const;
  bool in_support(const Vector& theta) const;
  /// Reflects out-of-support coordinates back into a box prior's support;
  /// no-op for Gaussian priors (unbounded support).
  void reflect_into_support(Vector& theta) const;
  /// Per-coordinate scale (box width or sd), used to size walker jitter.
  Vector coordinate_scale() const;
};

/// Additive diagonal Gaussian observation noise, sd per y coordinate.
struct NoiseModel {
  Vector sd;
};

/// A GO-OED problem: observation model y = G(theta, d) + eps, prediction
/// model z = H(theta) (+ optional additive Gaussian eta), prior and noise.
/// `observe` and `predict_mean` must be pure functions of their inputs.
struct Problem {
  std::string name;
  std::size_t n_theta = 0;
  std::size_t n_y = 0;
  std::size_t n_z = 0;
  std::size_t n_d = 0;
  PriorSpec prior;
  NoiseModel noise;
  Bounds design_bounds;
  std::function<Vector(const Vector& theta, const Vector& d)> observe;
  std::function<Vector(const Vector& theta)> predict_mean;
  std::optional<Vector> prediction_noise_sd;  // absent => deterministic H
  bool predict_is_identity = false;
};

std::vector<Vector> sample_prior(const PriorSpec& prior, std::size_t n, RngStream& rng);

/// y = G(theta, d) + eps with eps drawn from the problem's noise model.
Vector simulate_observation(const Problem& p, const Vector& theta, const Vector& d,
                            RngStream& rng);

/// Sum over coordinates of the Gaussian log density of y - G(theta, d).
double log_likelihood(const Problem& p, const Vector& y, const Vector& theta,
                      const Vector& d);

/// Gaussian log density of a raw residual vector; shared by the grid
/// estimators which precompute G on a parameter grid.
double gaussian_log_density(const Vector& residual, const Vector& sd);

/// z = H(theta) + eta (eta only when the problem declares prediction noise).
Vector predict_qoi(const Problem& p, const Vector& theta, RngStream& rng);

}  // namespace gooed
