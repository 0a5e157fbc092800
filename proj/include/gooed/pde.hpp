#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include "gooed/types.hpp"

namespace gooed::pde {

using Vec2 = std::array<double, 2>;

/// Uniform cell-centered grid on the fixed computational domain [-1, 2]^2.
struct Grid2D {
  double dx = 0.0;
  int n = 0;  // cells per axis

  static Grid2D with_dx(double dx);
  double center(int i) const { return -1.0 + (static_cast<double>(i) + 0.5) * dx; }
};

/// Gaussian source of strength s and width h centered at the unknown
/// location theta in [0,1]^2.
struct SourceParams {
  double theta_x1 = 0.5;
  double theta_x2 = 0.5;
  double s = 2.0;
  double h = 0.05;
};

struct SolverConfig {
  double dt = 0.0;
  double t_end = 0.0;
  std::vector<double> snapshot_times;  // sorted, multiples of dt, <= t_end
  double velocity_scale = 50.0;        // u(t) = (scale*t, scale*t)

  static SolverConfig desk_scale();    // dx 0.05 pairing: dt 2.5e-3
  static SolverConfig paper_scale();   // dx 0.01 pairing: dt 5e-4
};

struct Field {
  std::vector<double> c;  // row-major, c[j*n + i] at (x1_i, x2_j)
  int n = 0;
  double dx = 0.0;
  double t = 0.0;

  double& at(int i, int j) { return c[static_cast<std::size_t>(j) * n + i]; }
  double at(int i, int j) const { return c[static_cast<std::size_t>(j) * n + i]; }
  /// Discrete total mass, sum(c) * dx^2.
  double total_mass() const;
};

struct SolveStats {
  bool cfl_warning = false;
  double max_cfl = 0.0;
};

/// Fractional-step solver: QUICK convection advanced with second-order
/// Adams-Bashforth (velocity taken at the half-step time), Crank-Nicolson
/// diffusion via direction-split tridiagonal solves, no-flux boundaries,
/// zero initial condition unless `initial` is given. Returns one field per
/// snapshot time. A CFL ratio above 1 records a warning in `stats`;
/// non-finite field values abort with an error.
std::vector<Field> solve(const SourceParams& src, const Grid2D& grid,
                         const SolverConfig& cfg, const Field* initial = nullptr,
                         SolveStats* stats = nullptr);

/// Bilinear interpolation of the four cell centers surrounding x.
double sample_concentration(const Field& f, const Vec2& x);

/// z = integral over x2 in [-1,1] of -dc/dx1 at x1 = 1, second-order
/// center differences and trapezoid quadrature.
double right_boundary_flux(const Field& f);

/// Queries answered by either the tabulated surrogate or direct solves.
class FieldSurrogate {
 public:
  virtual ~FieldSurrogate() = default;
  /// time_index 0 -> observation time t1, 1 -> prediction time t2.
  virtual double concentration(const Vec2& x, int time_index, const Vec2& theta) const = 0;
  virtual double flux_t2(const Vec2& theta) const = 0;
};

/// Precomputes t1/t2 fields and the t2 flux on a uniform theta grid over
/// [0,1]^2; queries bilinearly interpolate in theta (and in x within each
/// stored field). threads <= 0 uses all hardware threads.
std::shared_ptr<const FieldSurrogate> tabulate_surrogate(std::size_t theta_nodes_per_axis,
                                                         const Grid2D& grid,
                                                         const SolverConfig& cfg,
                                                         int threads = 0);

/// Solves the PDE on demand for each requested theta (memoized); intended
/// for surrogate validation, not production sweeps.
std::shared_ptr<const FieldSurrogate> direct_surrogate(const Grid2D& grid,
                                                       const SolverConfig& cfg);

struct QoiSpec {
  enum class Kind { kConcentration, kFlux, kConcentrationPlusFlux };
  Kind kind = Kind::kConcentration;
  std::vector<Vec2> xi;  // prediction locations, each in [0,1]^2

  static QoiSpec concentration(std::vector<Vec2> xi);
  static QoiSpec flux();
  static QoiSpec concentration_plus_flux(std::vector<Vec2> xi);
  std::size_t n_z() const;
};

/// Sensor-placement source-inversion problem: theta is the source location
/// with uniform prior on [0,1]^2, the design holds n_sensors coordinate
/// pairs in [0,1]^2, observations are t1 concentrations at the sensors with
/// sd-0.05 Gaussian noise, and the QoIs are t2 quantities per `qoi`.
Problem build_sensor_problem(std::size_t n_sensors, const QoiSpec& qoi,
                             std::shared_ptr<const FieldSurrogate> surrogate);

}  // namespace gooed::pde
