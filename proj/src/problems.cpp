#include "gooed/problems.hpp"

#include <cmath>

namespace gooed {

namespace {

constexpr double kDefaultNoiseSd = 1e-2;   // N(0, 1e-4) observation error
constexpr double kLinGaussNoiseSd = 0.1;

double obs_1d(double theta, double d) {
  return theta * theta * theta * d * d + theta * std::exp(-std::fabs(0.2 - d));
}

// Piecewise prediction model T2; boundary ties go to the branch whose
// inequality is non-strict (0.15 <= theta <= 0.7 maps to the plateau).
double pred_t2(double theta) {
  if (theta >= 0.15 && theta <= 0.7) return 5.0;
  if (theta >= 0.0 && theta < 0.15) return -100.0 * theta + 25.0;
  return 50.0 * theta + 25.0;
}

double pred_t3(double theta) {
  constexpr double mu = 0.3;
  constexpr double sigma = 0.2;
  const double r = (theta - mu) / sigma;
  return std::exp(-0.5 * r * r) / (std::sqrt(2.0 * M_PI) * sigma);
}

double pred_t1(double theta) {
  return std::sin(theta) + theta * std::exp(theta + std::fabs(0.5 - theta));
}

double pred_easom(double t1, double t2) {
  const double e1 = t1 - 0.4;
  const double e2 = t2 - 0.6;
  return std::cos(t1) * std::cos(t2) * std::exp(-e1 * e1 + e2 * e2);
}

double pred_rosenbrock(double t1, double t2) {
  const double a = 1.0 - t1;
  const double b = t2 - t1 * t1;
  return a * a + 5.0 * b * b;
}

Bounds unit_box(std::size_t n) {
  return Bounds(n, Interval{0.0, 1.0});
}

Problem base_1d(const std::string& name) {
  Problem p;
  p.name = name;
  p.n_theta = p.n_y = p.n_z = p.n_d = 1;
  p.prior = PriorSpec::uniform_box({0.0}, {1.0});
  p.noise.sd = {kDefaultNoiseSd};
  p.design_bounds = unit_box(1);
  p.observe = [](const Vector& theta, const Vector& d) {
    return Vector{obs_1d(theta[0], d[0])};
  };
  return p;
}

Problem base_2theta_1d(const std::string& name) {
  Problem p;
  p.name = name;
  p.n_theta = 2;
  p.n_y = p.n_z = p.n_d = 1;
  p.prior = PriorSpec::uniform_box({0.0, 0.0}, {1.0, 1.0});
  p.noise.sd = {kDefaultNoiseSd};
  p.design_bounds = unit_box(1);
  p.observe = [](const Vector& theta, const Vector& d) {
    const double y = theta[0] * theta[0] * theta[0] * d[0] * d[0] +
                     theta[1] * std::exp(-std::fabs(0.2 - d[0]));
    return Vector{y};
  };
  return p;
}

Problem base_2theta_2d(const std::string& name) {
  Problem p;
  p.name = name;
  p.n_theta = 2;
  p.n_y = 2;
  p.n_z = 1;
  p.n_d = 2;
  p.prior = PriorSpec::uniform_box({0.0, 0.0}, {1.0, 1.0});
  p.noise.sd = {kDefaultNoiseSd, kDefaultNoiseSd};
  p.design_bounds = unit_box(2);
  p.observe = [](const Vector& theta, const Vector& d) {
    const double e = std::exp(-std::fabs(0.2 - d[1]));
    const double d1sq = d[0] * d[0];
    return Vector{theta[0] * theta[0] * theta[0] * d1sq + theta[1] * e,
                  theta[1] * theta[1] * theta[1] * d1sq + theta[0] * e};
  };
  return p;
}

Problem make_ndim(int n) {
  if (n < 1) throw ConfigError("ndim problem requires params N >= 1");
  const auto nn = static_cast<std::size_t>(n);
  Problem p;
  p.name = "ndim";
  p.n_theta = p.n_y = p.n_d = nn;
  p.n_z = 1;
  p.prior = PriorSpec::uniform_box(Vector(nn, 0.0), Vector(nn, 1.0));
  p.noise.sd = Vector(nn, kDefaultNoiseSd);
  p.design_bounds = unit_box(nn);
  p.observe = [nn](const Vector& theta, const Vector& d) {
    Vector y(nn);
    for (std::size_t i = 0; i < nn; ++i) {
      double v = theta[i] * theta[i] * theta[i] * d[i] * d[i];
      for (std::size_t j = 0; j < nn; ++j) {
        if (j == i) continue;
        v += theta[j] * std::exp(-std::fabs(0.2 - d[j]));
      }
      y[i] = v;
    }
    return y;
  };
  p.predict_mean = [nn](const Vector& theta) {
    double z = 0.0;
    for (std::size_t i = 0; i < nn; ++i) {
      const double a = 1.0 - theta[i];
      z += a * a;
      for (std::size_t j = 0; j < nn; ++j) {
        if (j == i) continue;
        const double b = theta[j] - theta[i] * theta[i];
        z += 5.0 * b * b;
      }
    }
    return Vector{z};
  };
  return p;
}

Problem make_lingauss() {
  Problem p;
  p.name = "lingauss";
  p.n_theta = p.n_y = p.n_z = p.n_d = 1;
  p.prior = PriorSpec::gaussian_diag({0.0}, {1.0});
  p.noise.sd = {kLinGaussNoiseSd};
  p.design_bounds = unit_box(1);
  p.observe = [](const Vector& theta, const Vector& d) {
    return Vector{d[0] * theta[0]};
  };
  p.predict_mean = [](const Vector& theta) { return theta; };
  p.predict_is_identity = true;
  return p;
}

}  // namespace

Problem builtin_problem(const std::string& name, std::optional<int> params) {
  if (name == "bm") {
    Problem p = base_1d(name);
    p.predict_mean = [](const Vector& theta) { return theta; };
    p.predict_is_identity = true;
    return p;
  }
  if (name == "t1") {
    Problem p = base_1d(name);
    p.predict_mean = [](const Vector& theta) { return Vector{pred_t1(theta[0])}; };
    return p;
  }
  if (name == "t2") {
    Problem p = base_1d(name);
    p.predict_mean = [](const Vector& theta) { return Vector{pred_t2(theta[0])}; };
    return p;
  }
  if (name == "t3") {
    Problem p = base_1d(name);
    p.predict_mean = [](const Vector& theta) { return Vector{pred_t3(theta[0])}; };
    return p;
  }
  if (name == "easom1d") {
    Problem p = base_2theta_1d(name);
    p.predict_mean = [](const Vector& t) { return Vector{pred_easom(t[0], t[1])}; };
    return p;
  }
  if (name == "rosenbrock1d") {
    Problem p = base_2theta_1d(name);
    p.predict_mean = [](const Vector& t) { return Vector{pred_rosenbrock(t[0], t[1])}; };
    return p;
  }
  if (name == "easom2d") {
    Problem p = base_2theta_2d(name);
    p.predict_mean = [](const Vector& t) { return Vector{pred_easom(t[0], t[1])}; };
    return p;
  }
  if (name == "rosenbrock2d") {
    Problem p = base_2theta_2d(name);
    p.predict_mean = [](const Vector& t) { return Vector{pred_rosenbrock(t[0], t[1])}; };
    return p;
  }
  if (name == "ndim") return make_ndim(params.value_or(2));
  if (name == "lingauss") return make_lingauss();
  throw ConfigError("unknown problem name: " + name);
}

std::vector<std::string> builtin_problem_names() {
  return {"bm",      "t1",           "t2",      "t3",           "easom1d",
          "rosenbrock1d", "easom2d", "rosenbrock2d", "ndim",    "lingauss"};
}

double lingauss_analytic_eig(double d) {
  const double s = d / kLinGaussNoiseSd;
  return 0.5 * std::log1p(s * s);
}

}  // namespace gooed
