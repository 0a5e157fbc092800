#include <cmath>
#include <map>
#include <mutex>

#include "gooed/parallel.hpp"
#include "gooed/pde.hpp"

namespace gooed::pde {

namespace {

constexpr double kSensorNoiseSd = 0.05;

void check_unit_square(const Vec2& p, const char* what) {
  if (p[0] < 0.0 || p[0] > 1.0 || p[1] < 0.0 || p[1] > 1.0)
    throw ConfigError(std::string(what) + " must lie in [0,1]^2");
}

class TabulatedSurrogate final : public FieldSurrogate {
 public:
  TabulatedSurrogate(std::size_t nodes, const Grid2D& grid, const SolverConfig& cfg,
                     int threads)
      : nodes_(nodes) {
    if (nodes_ < 5) throw ConfigError("tabulate_surrogate: theta grid must be >= 5x5");
    if (cfg.snapshot_times.size() != 2)
      throw ConfigError("tabulate_surrogate: solver config must snapshot t1 and t2");
    fields_t1_.resize(nodes_ * nodes_);
    fields_t2_.resize(nodes_ * nodes_);
    flux_.resize(nodes_ * nodes_);
    parallel_for(nodes_ * nodes_, threads, [&](std::size_t idx) {
      SourceParams src;
      src.theta_x1 = node(idx % nodes_);
      src.theta_x2 = node(idx / nodes_);
      auto snaps = solve(src, grid, cfg);
      flux_[idx] = right_boundary_flux(snaps[1]);
      fields_t1_[idx] = std::move(snaps[0]);
      fields_t2_[idx] = std::move(snaps[1]);
    });
  }

  double concentration(const Vec2& x, int time_index, const Vec2& theta) const override {
    check_unit_square(theta, "surrogate query theta");
    const auto& fields = time_index == 0 ? fields_t1_ : fields_t2_;
    int i0, j0;
    double wx, wy;
    locate(theta[0], i0, wx);
    locate(theta[1], j0, wy);
    const double c00 = sample_concentration(fields[at(i0, j0)], x);
    const double c10 = sample_concentration(fields[at(i0 + 1, j0)], x);
    const double c01 = sample_concentration(fields[at(i0, j0 + 1)], x);
    const double c11 = sample_concentration(fields[at(i0 + 1, j0 + 1)], x);
    return (1.0 - wy) * ((1.0 - wx) * c00 + wx * c10) +
           wy * ((1.0 - wx) * c01 + wx * c11);
  }

  double flux_t2(const Vec2& theta) const override {
    check_unit_square(theta, "surrogate query theta");
    int i0, j0;
    double wx, wy;
    locate(theta[0], i0, wx);
    locate(theta[1], j0, wy);
    return (1.0 - wy) * ((1.0 - wx) * flux_[at(i0, j0)] + wx * flux_[at(i0 + 1, j0)]) +
           wy * ((1.0 - wx) * flux_[at(i0, j0 + 1)] + wx * flux_[at(i0 + 1, j0 + 1)]);
  }

 private:
  double node(std::size_t k) const {
    return static_cast<double>(k) / static_cast<double>(nodes_ - 1);
  }
  std::size_t at(int i, int j) const {
    return static_cast<std::size_t>(j) * nodes_ + static_cast<std::size_t>(i);
  }
  void locate(double coord, int& i0, double& w) const {
    const double g = coord * static_cast<double>(nodes_ - 1);
    i0 = static_cast<int>(std::floor(g));
    if (i0 > static_cast<int>(nodes_) - 2) i0 = static_cast<int>(nodes_) - 2;
    if (i0 < 0) i0 = 0;
    w = std::min(1.0, std::max(0.0, g - static_cast<double>(i0)));
  }

  std::size_t nodes_;
  std::vector<Field> fields_t1_, fields_t2_;
  std::vector<double> flux_;
};

class DirectSurrogate final : public FieldSurrogate {
 public:
  DirectSurrogate(const Grid2D& grid, const SolverConfig& cfg) : grid_(grid), cfg_(cfg) {
    if (cfg.snapshot_times.size() != 2)
      throw ConfigError("direct_surrogate: solver config must snapshot t1 and t2");
  }

  double concentration(const Vec2& x, int time_index, const Vec2& theta) const override {
    check_unit_square(theta, "surrogate query theta");
    const Entry& e = entry(theta);
    return sample_concentration(time_index == 0 ? e.t1 : e.t2, x);
  }

  double flux_t2(const Vec2& theta) const override {
    check_unit_square(theta, "surrogate query theta");
    return entry(theta).flux;
  }

 private:
  struct Entry {
    Field t1, t2;
    double flux = 0.0;
  };

  const Entry& entry(const Vec2& theta) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(theta);
    if (it == cache_.end()) {
      SourceParams src;
      src.theta_x1 = theta[0];
      src.theta_x2 = theta[1];
      auto snaps = solve(src, grid_, cfg_);
      Entry e;
      e.flux = right_boundary_flux(snaps[1]);
      e.t1 = std::move(snaps[0]);
      e.t2 = std::move(snaps[1]);
      it = cache_.emplace(theta, std::move(e)).first;
    }
    return it->second;
  }

  Grid2D grid_;
  SolverConfig cfg_;
  mutable std::mutex mutex_;
  mutable std::map<Vec2, Entry> cache_;
};

}  // namespace

std::shared_ptr<const FieldSurrogate> tabulate_surrogate(std::size_t theta_nodes_per_axis,
                                                         const Grid2D& grid,
                                                         const SolverConfig& cfg,
                                                         int threads) {
  return std::make_shared<TabulatedSurrogate>(theta_nodes_per_axis, grid, cfg, threads);
}

std::shared_ptr<const FieldSurrogate> direct_surrogate(const Grid2D& grid,
                                                       const SolverConfig& cfg) {
  return std::make_shared<DirectSurrogate>(grid, cfg);
}

QoiSpec QoiSpec::concentration(std::vector<Vec2> xi) {
  if (xi.empty()) throw ConfigError("qoi: concentration needs at least one location");
  for (const Vec2& p : xi) check_unit_square(p, "qoi location");
  QoiSpec q;
  q.kind = Kind::kConcentration;
  q.xi = std::move(xi);
  return q;
}

QoiSpec QoiSpec::flux() {
  QoiSpec q;
  q.kind = Kind::kFlux;
  return q;
}

QoiSpec QoiSpec::concentration_plus_flux(std::vector<Vec2> xi) {
  if (xi.empty()) throw ConfigError("qoi: concentration needs at least one location");
  for (const Vec2& p : xi) check_unit_square(p, "qoi location");
  QoiSpec q;
  q.kind = Kind::kConcentrationPlusFlux;
  q.xi = std::move(xi);
  return q;
}

std::size_t QoiSpec::n_z() const {
  switch (kind) {
    case Kind::kConcentration:
      return xi.size();
    case Kind::kFlux:
      return 1;
    case Kind::kConcentrationPlusFlux:
      return xi.size() + 1;
  }
  return 0;
}

Problem build_sensor_problem(std::size_t n_sensors, const QoiSpec& qoi,
                             std::shared_ptr<const FieldSurrogate> surrogate) {
  if (n_sensors < 1 || n_sensors > 3)
    throw ConfigError("sensor problem: n_sensors must be in {1, 2, 3}");
  if (!surrogate) throw ConfigError("sensor problem: missing surrogate");

  Problem p;
  p.name = "sensor" + std::to_string(n_sensors);
  p.n_theta = 2;
  p.n_y = n_sensors;
  p.n_z = qoi.n_z();
  p.n_d = 2 * n_sensors;
  p.prior = PriorSpec::uniform_box({0.0, 0.0}, {1.0, 1.0});
  p.noise.sd = Vector(n_sensors, kSensorNoiseSd);
  p.design_bounds = Bounds(p.n_d, Interval{0.0, 1.0});

  p.observe = [surrogate, n_sensors](const Vector& theta, const Vector& d) {
    const Vec2 th{theta[0], theta[1]};
    Vector y(n_sensors);
    for (std::size_t k = 0; k < n_sensors; ++k)
      y[k] = surrogate->concentration({d[2 * k], d[2 * k + 1]}, 0, th);
    return y;
  };
  p.predict_mean = [surrogate, qoi](const Vector& theta) {
    const Vec2 th{theta[0], theta[1]};
    Vector z;
    z.reserve(qoi.n_z());
    if (qoi.kind != QoiSpec::Kind::kFlux)
      for (const Vec2& xi : qoi.xi) z.push_back(surrogate->concentration(xi, 1, th));
    if (qoi.kind != QoiSpec::Kind::kConcentration)
      z.push_back(surrogate->flux_t2(th));
    return z;
  };
  return p;
}

}  // namespace gooed::pde
