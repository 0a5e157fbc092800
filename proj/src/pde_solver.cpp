#include <cmath>
#include <cstddef>

#include "gooed/pde.hpp"

namespace gooed::pde {

namespace {

constexpr double kDomainLo = -1.0;
constexpr double kDomainHi = 2.0;
constexpr double kDomainExtent = kDomainHi - kDomainLo;

/// Thomas algorithm for the constant-coefficient Crank-Nicolson rows
/// (1 + 2*beta) on the diagonal, -beta off-diagonal, Neumann ends
/// (1 + beta). Strictly diagonally dominant, no pivoting needed.
/// `stride` walks the solution through a row (stride 1) or column
/// (stride n) of the field in place.
void solve_cn_line(double* x, int n, int stride, double beta, double* scratch_c,
                   double* scratch_d) {
  const double lower = -beta;
  const double upper = -beta;
  double diag0 = 1.0 + beta;  // Neumann end
  scratch_c[0] = upper / diag0;
  scratch_d[0] = x[0] / diag0;
  for (int i = 1; i < n; ++i) {
    const double diag = (i == n - 1) ? 1.0 + beta : 1.0 + 2.0 * beta;
    const double m = diag - lower * scratch_c[i - 1];
    scratch_c[i] = upper / m;
    scratch_d[i] = (x[static_cast<std::ptrdiff_t>(i) * stride] - lower * scratch_d[i - 1]) / m;
  }
  x[static_cast<std::ptrdiff_t>(n - 1) * stride] = scratch_d[n - 1];
  for (int i = n - 2; i >= 0; --i)
    x[static_cast<std::ptrdiff_t>(i) * stride] =
        scratch_d[i] - scratch_c[i] * x[static_cast<std::ptrdiff_t>(i + 1) * stride];
}

/// QUICK face value for flow from `up2, up1 | face | down`; falls back to
/// the mirrored-ghost second-order upwind value (= the upstream cell) when
/// the far-upstream node would be a ghost cell.
inline double quick_face(double c_up2, double c_up1, double c_down, bool up2_is_ghost) {
  if (up2_is_ghost) return c_up1;
  return 0.75 * c_up1 + 0.375 * c_down - 0.125 * c_up2;
}

/// Conservative convective term -d(u c)/dx1 - d(v c)/dx2 with uniform
/// velocity (u, u) and zero total flux through the domain boundary faces.
void convective_term(const Field& f, double u, std::vector<double>& out) {
  const int n = f.n;
  const double inv_dx = 1.0 / f.dx;
  out.assign(f.c.size(), 0.0);
  if (u == 0.0) return;

  // x1 direction: interior faces between cells (i-1, i) per row.
  for (int j = 0; j < n; ++j) {
    double flux_left = 0.0;  // boundary face: no flux
    for (int i = 1; i <= n; ++i) {
      double flux_right = 0.0;
      if (i < n) {
        double face;
        if (u > 0.0)
          face = quick_face(i >= 2 ? f.at(i - 2, j) : 0.0, f.at(i - 1, j), f.at(i, j),
                            i < 2);
        else
          face = quick_face(i + 1 < n ? f.at(i + 1, j) : 0.0, f.at(i, j), f.at(i - 1, j),
                            i + 1 >= n);
        flux_right = u * face;
      }
      out[static_cast<std::size_t>(j) * n + (i - 1)] -= (flux_right - flux_left) * inv_dx;
      flux_left = flux_right;
    }
  }

  // x2 direction, by columns.
  for (int i = 0; i < n; ++i) {
    double flux_below = 0.0;
    for (int j = 1; j <= n; ++j) {
      double flux_above = 0.0;
      if (j < n) {
        double face;
        if (u > 0.0)
          face = quick_face(j >= 2 ? f.at(i, j - 2) : 0.0, f.at(i, j - 1), f.at(i, j),
                            j < 2);
        else
          face = quick_face(j + 1 < n ? f.at(i, j + 1) : 0.0, f.at(i, j), f.at(i, j - 1),
                            j + 1 >= n);
        flux_above = u * face;
      }
      out[static_cast<std::size_t>(j - 1) * n + i] -= (flux_above - flux_below) * inv_dx;
      flux_below = flux_above;
    }
  }
}

/// (I + beta * Lap_axis) with Neumann mirror ghosts, written into `out`.
void apply_explicit_diffusion(const Field& f, double beta, bool along_x1,
                              std::vector<double>& out) {
  const int n = f.n;
  out.resize(f.c.size());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double lap;
      if (along_x1) {
        const double left = i > 0 ? f.at(i - 1, j) : f.at(i, j);
        const double right = i < n - 1 ? f.at(i + 1, j) : f.at(i, j);
        lap = left - 2.0 * f.at(i, j) + right;
      } else {
        const double below = j > 0 ? f.at(i, j - 1) : f.at(i, j);
        const double above = j < n - 1 ? f.at(i, j + 1) : f.at(i, j);
        lap = below - 2.0 * f.at(i, j) + above;
      }
      out[static_cast<std::size_t>(j) * n + i] = f.at(i, j) + beta * lap;
    }
}

}  // namespace

Grid2D Grid2D::with_dx(double dx) {
  if (!(dx > 0.0)) throw ConfigError("grid: dx must be > 0");
  const double cells = kDomainExtent / dx;
  const int n = static_cast<int>(std::lround(cells));
  if (std::fabs(cells - static_cast<double>(n)) > 1e-9 * cells || n < 4)
    throw ConfigError("grid: dx must divide the domain extent exactly");
  Grid2D g;
  g.dx = dx;
  g.n = n;
  return g;
}

SolverConfig SolverConfig::desk_scale() {
  SolverConfig c;
  c.dt = 2.5e-3;
  c.t_end = 0.2;
  c.snapshot_times = {0.05, 0.2};
  return c;
}

SolverConfig SolverConfig::paper_scale() {
  SolverConfig c;
  c.dt = 5e-4;
  c.t_end = 0.2;
  c.snapshot_times = {0.05, 0.2};
  return c;
}

double Field::total_mass() const {
  double acc = 0.0;
  for (double v : c) acc += v;
  return acc * dx * dx;
}

std::vector<Field> solve(const SourceParams& src, const Grid2D& grid,
                         const SolverConfig& cfg, const Field* initial,
                         SolveStats* stats) {
  if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0))
    throw ConfigError("solver: dt and t_end must be > 0");
  if (!(src.h > 0.0)) throw ConfigError("solver: source width must be > 0");
  const auto steps = static_cast<std::size_t>(std::lround(cfg.t_end / cfg.dt));
  if (std::fabs(static_cast<double>(steps) * cfg.dt - cfg.t_end) > 1e-9 * cfg.t_end)
    throw ConfigError("solver: t_end must be a multiple of dt");
  std::vector<std::size_t> snapshot_steps;
  for (double t : cfg.snapshot_times) {
    const auto s = static_cast<std::size_t>(std::lround(t / cfg.dt));
    if (std::fabs(static_cast<double>(s) * cfg.dt - t) > 1e-9 * std::max(t, cfg.dt) ||
        s == 0 || s > steps)
      throw ConfigError("solver: snapshot times must be positive multiples of dt <= t_end");
    if (!snapshot_steps.empty() && s <= snapshot_steps.back())
      throw ConfigError("solver: snapshot times must be strictly increasing");
    snapshot_steps.push_back(s);
  }

  const int n = grid.n;
  Field field;
  field.n = n;
  field.dx = grid.dx;
  field.t = 0.0;
  if (initial) {
    if (initial->n != n) throw ConfigError("solver: initial field grid mismatch");
    field.c = initial->c;
  } else {
    field.c.assign(static_cast<std::size_t>(n) * n, 0.0);
  }

  // Stationary source sampled at cell centers.
  std::vector<double> source(static_cast<std::size_t>(n) * n, 0.0);
  if (src.s != 0.0) {
    const double amp = src.s / (2.0 * M_PI * src.h * src.h);
    const double inv2h2 = 1.0 / (2.0 * src.h * src.h);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double ddx = grid.center(i) - src.theta_x1;
        const double ddy = grid.center(j) - src.theta_x2;
        source[static_cast<std::size_t>(j) * n + i] =
            amp * std::exp(-(ddx * ddx + ddy * ddy) * inv2h2);
      }
  }

  const double beta = cfg.dt / (2.0 * grid.dx * grid.dx);
  std::vector<double> conv(field.c.size(), 0.0);
  std::vector<double> conv_prev;
  std::vector<double> work(field.c.size(), 0.0);
  std::vector<double> scratch_c(n), scratch_d(n);
  std::vector<Field> snapshots;
  snapshots.reserve(snapshot_steps.size());
  std::size_t next_snapshot = 0;

  for (std::size_t step = 0; step < steps; ++step) {
    const double t_half = (static_cast<double>(step) + 0.5) * cfg.dt;
    const double u = cfg.velocity_scale * t_half;

    const double cfl = std::fabs(u) * cfg.dt / grid.dx;
    if (stats) {
      stats->max_cfl = std::max(stats->max_cfl, cfl);
      if (cfl > 1.0) stats->cfl_warning = true;
    }

    convective_term(field, u, conv);
    if (conv_prev.empty()) {
      // AB2 needs history; bootstrap the first step with forward Euler.
      for (std::size_t k = 0; k < field.c.size(); ++k)
        field.c[k] += cfg.dt * (conv[k] + source[k]);
    } else {
      for (std::size_t k = 0; k < field.c.size(); ++k)
        field.c[k] += cfg.dt * (1.5 * conv[k] - 0.5 * conv_prev[k] + source[k]);
    }
    conv_prev = conv;

    // Direction-split Crank-Nicolson diffusion:
    //   (I - beta Lx) c' = (I + beta Ly) c,  (I - beta Ly) c'' = (I + beta Lx) c'.
    apply_explicit_diffusion(field, beta, /*along_x1=*/false, work);
    field.c.swap(work);
    for (int j = 0; j < n; ++j)
      solve_cn_line(field.c.data() + static_cast<std::size_t>(j) * n, n, 1, beta,
                    scratch_c.data(), scratch_d.data());

    apply_explicit_diffusion(field, beta, /*along_x1=*/true, work);
    field.c.swap(work);
    for (int i = 0; i < n; ++i)
      solve_cn_line(field.c.data() + i, n, n, beta, scratch_c.data(), scratch_d.data());

    field.t = static_cast<double>(step + 1) * cfg.dt;
    if (next_snapshot < snapshot_steps.size() && step + 1 == snapshot_steps[next_snapshot]) {
      for (double v : field.c)
        if (!std::isfinite(v)) throw ModelEvalError("solver: non-finite field value");
      snapshots.push_back(field);
      ++next_snapshot;
    }
  }
  return snapshots;
}

double sample_concentration(const Field& f, const Vec2& x) {
  if (x[0] < kDomainLo || x[0] > kDomainHi || x[1] < kDomainLo || x[1] > kDomainHi)
    throw ConfigError("sample_concentration: point outside the domain");
  const int n = f.n;
  const auto locate = [&](double coord, int& i0, double& w) {
    const double g = (coord - kDomainLo) / f.dx - 0.5;
    i0 = static_cast<int>(std::floor(g));
    if (i0 < 0) i0 = 0;
    if (i0 > n - 2) i0 = n - 2;
    w = std::min(1.0, std::max(0.0, g - static_cast<double>(i0)));
  };
  int i0, j0;
  double wx, wy;
  locate(x[0], i0, wx);
  locate(x[1], j0, wy);
  const double c00 = f.at(i0, j0), c10 = f.at(i0 + 1, j0);
  const double c01 = f.at(i0, j0 + 1), c11 = f.at(i0 + 1, j0 + 1);
  return (1.0 - wy) * ((1.0 - wx) * c00 + wx * c10) + wy * ((1.0 - wx) * c01 + wx * c11);
}

double right_boundary_flux(const Field& f) {
  const int n = f.n;
  // Locate x1 = 1 relative to the cell centers; on our grids it falls on a
  // face, straddled by two centers.
  const double g = (1.0 - kDomainLo) / f.dx - 0.5;
  const int ic = static_cast<int>(std::lround(g));
  const bool on_center = std::fabs(g - static_cast<double>(ic)) < 0.25;

  const auto grad_row = [&](int j) {
    if (on_center) return (f.at(ic + 1, j) - f.at(ic - 1, j)) / (2.0 * f.dx);
    return (f.at(static_cast<int>(std::ceil(g)), j) -
            f.at(static_cast<int>(std::floor(g)), j)) /
           f.dx;
  };

  // Integrand nodes: x2 = -1 (domain edge; the Neumann condition makes the
  // integrand flat there, so the first row value is second-order), the cell
  // centers inside (-1, 1), and x2 = 1 interpolated between the straddling
  // rows.
  std::vector<double> x2{-1.0};
  std::vector<double> integrand{-grad_row(0)};
  for (int j = 0; j < n; ++j) {
    const double y = f.center(j);
    if (y <= -1.0 || y >= 1.0) continue;
    x2.push_back(y);
    integrand.push_back(-grad_row(j));
  }
  const double gy = (1.0 - kDomainLo) / f.dx - 0.5;
  const int j_lo = static_cast<int>(std::floor(gy));
  const double wy = gy - static_cast<double>(j_lo);
  x2.push_back(1.0);
  integrand.push_back(-((1.0 - wy) * grad_row(j_lo) + wy * grad_row(j_lo + 1)));

  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < x2.size(); ++k)
    acc += 0.5 * (integrand[k] + integrand[k + 1]) * (x2[k + 1] - x2[k]);
  return acc;
}

}  // namespace gooed::pde
