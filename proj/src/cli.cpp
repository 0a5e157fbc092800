#include "gooed/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>

#include <CLI11.hpp>

#include "gooed/bo.hpp"
#include "gooed/eig.hpp"
#include "gooed/pde.hpp"
#include "gooed/problems.hpp"

namespace gooed::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kTagCache = 0xc11e0001;
constexpr std::uint64_t kTagDesign = 0xc11e0002;
constexpr std::uint64_t kTagBoEval = 0xc11e0003;
constexpr std::uint64_t kTagGridRef = 0xc11e0004;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct DesignGridSpec {
  struct Axis {
    double lo = 0.0, hi = 1.0;
    std::size_t points = 2;
  };
  std::vector<Axis> axes;

  std::size_t total() const {
    std::size_t t = 1;
    for (const Axis& a : axes) t *= a.points;
    return t;
  }
  Vector point(std::size_t index) const {
    Vector d(axes.size());
    std::size_t rem = index;
    for (std::size_t k = 0; k < axes.size(); ++k) {
      const Axis& a = axes[k];
      const std::size_t m = rem % a.points;
      rem /= a.points;
      d[k] = a.points == 1
                 ? a.lo
                 : a.lo + (a.hi - a.lo) * static_cast<double>(m) /
                       static_cast<double>(a.points - 1);
    }
    return d;
  }
};

struct Study {
  json config;          // effective config (seed applied)
  std::uint64_t seed = 0;
  std::uint64_t hash = 0;
  Problem problem;
  std::shared_ptr<const pde::FieldSurrogate> surrogate;  // sensor problems
  std::string estimator_kind = "nmc";
  NmcConfig nmc;
  std::size_t grid_nodes = 0;     // grid-theta estimator, per axis
  std::size_t grid_n_out = 4000;  // grid-theta outer samples
  std::optional<DesignGridSpec> sweep;
  std::optional<BoConfig> bo;
  std::optional<pde::Vec2> snapshot_theta;
  pde::Grid2D pde_grid;
  pde::SolverConfig pde_cfg;
  int threads = 1;
  bool emit_plot_script = false;
};

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

BandwidthPolicy parse_bandwidth(const json& j) {
  if (j.is_null()) return BandwidthPolicy::adaptive();
  const std::string kind = get_or<std::string>(j, "kind", "adaptive");
  if (kind == "fixed") {
    if (!j.contains("b")) throw ConfigError("bandwidth: fixed policy needs \"b\"");
    return BandwidthPolicy::fixed(j.at("b").get<double>());
  }
  if (kind != "adaptive") throw ConfigError("bandwidth: unknown kind " + kind);
  std::vector<double> grid;
  if (j.contains("grid")) grid = j.at("grid").get<std::vector<double>>();
  return BandwidthPolicy::adaptive(get_or<std::size_t>(j, "folds", 5), std::move(grid),
                                   get_or<std::size_t>(j, "n_warm", 10));
}

pde::QoiSpec parse_qoi(const json& j) {
  const std::string kind = get_or<std::string>(j, "kind", "concentration");
  std::vector<pde::Vec2> xi;
  if (j.contains("xi"))
    for (const auto& p : j.at("xi"))
      xi.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  if (kind == "concentration") return pde::QoiSpec::concentration(std::move(xi));
  if (kind == "flux") return pde::QoiSpec::flux();
  if (kind == "concentration_plus_flux")
    return pde::QoiSpec::concentration_plus_flux(std::move(xi));
  throw ConfigError("qoi: unknown kind " + kind);
}

Study build_study(const CliOptions& opts) {
  std::ifstream in(opts.config_path);
  if (!in) throw ConfigError("cannot open config file: " + opts.config_path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }

  Study s;
  if (opts.seed)
    s.seed = *opts.seed;
  else if (cfg.contains("seed"))
    s.seed = cfg.at("seed").get<std::uint64_t>();
  else
    throw ConfigError("a seed is mandatory: set \"seed\" in the config or pass --seed");
  cfg["seed"] = s.seed;
  cfg["paper_resolution"] = opts.paper_resolution;
  s.config = cfg;
  s.hash = config_hash(cfg);
  s.threads = opts.threads;
  s.emit_plot_script = opts.emit_plot_script;

  if (!cfg.contains("problem")) throw ConfigError("config needs a \"problem\" section");
  const json& pj = cfg.at("problem");
  const std::string name = pj.at("name").get<std::string>();
  if (name == "sensor") {
    const double dx = opts.paper_resolution ? 0.01 : 0.05;
    s.pde_grid = pde::Grid2D::with_dx(dx);
    s.pde_cfg = opts.paper_resolution ? pde::SolverConfig::paper_scale()
                                      : pde::SolverConfig::desk_scale();
    const auto theta_nodes =
        get_or<std::size_t>(pj.contains("surrogate") ? pj.at("surrogate") : json::object(),
                            "theta_nodes", 17);
    s.surrogate = pde::tabulate_surrogate(theta_nodes, s.pde_grid, s.pde_cfg, opts.threads);
    const auto n_sensors = get_or<std::size_t>(pj, "n_sensors", 1);
    s.problem = pde::build_sensor_problem(
        n_sensors, parse_qoi(pj.contains("qoi") ? pj.at("qoi") : json::object()),
        s.surrogate);
  } else {
    std::optional<int> params;
    if (pj.contains("n")) params = pj.at("n").get<int>();
    s.problem = builtin_problem(name, params);
  }

  const json ej = cfg.contains("estimator") ? cfg.at("estimator") : json::object();
  s.estimator_kind = get_or<std::string>(ej, "kind", "nmc");
  if (s.estimator_kind != "nmc" && s.estimator_kind != "grid-theta")
    throw ConfigError("estimator: unknown kind " + s.estimator_kind);
  s.nmc.n_out = get_or<std::size_t>(ej, "n_out", 1000);
  s.nmc.n_in = get_or<std::size_t>(ej, "n_in", 1000);
  s.nmc.loo_inner = get_or<bool>(ej, "loo", false);
  s.nmc.threads = opts.threads;
  if (ej.contains("mcmc")) {
    const json& mj = ej.at("mcmc");
    s.nmc.mcmc.n_walkers = get_or<std::size_t>(mj, "n_walkers", 0);
    s.nmc.mcmc.a = get_or<double>(mj, "a", 2.0);
    s.nmc.mcmc.n_steps = get_or<std::size_t>(mj, "n_steps", 1000);
    s.nmc.mcmc.burn_in = get_or<std::size_t>(mj, "burn_in", 50);
    s.nmc.mcmc.init_jitter_sd = get_or<double>(mj, "init_jitter_sd", -1.0);
  }
  s.nmc.bandwidth =
      parse_bandwidth(ej.contains("bandwidth") ? ej.at("bandwidth") : json());
  s.grid_nodes = get_or<std::size_t>(ej, "grid_nodes",
                                     s.problem.n_theta == 1 ? 2000 : 200);
  s.grid_n_out = get_or<std::size_t>(ej, "grid_n_out", 4000);

  const bool has_sweep = cfg.contains("sweep");
  const bool has_bo = cfg.contains("bo");
  if (opts.command == "sweep" || opts.command == "validate") {
    if (!has_sweep) throw ConfigError(opts.command + " requires a \"sweep\" section");
  }
  if (opts.command == "optimize" && !has_bo)
    throw ConfigError("optimize requires a \"bo\" section");
  if (has_sweep && has_bo)
    throw ConfigError("config must contain exactly one of \"sweep\" or \"bo\"");

  if (has_sweep) {
    DesignGridSpec spec;
    for (const auto& axis : cfg.at("sweep").at("grid")) {
      DesignGridSpec::Axis a;
      a.lo = axis.at("lo").get<double>();
      a.hi = axis.at("hi").get<double>();
      a.points = axis.at("points").get<std::size_t>();
      if (a.points < 1 || !(a.lo <= a.hi)) throw ConfigError("sweep: malformed axis");
      spec.axes.push_back(a);
    }
    if (spec.axes.size() != s.problem.n_d)
      throw ConfigError("sweep: grid dimension must match the problem's n_d");
    if (spec.total() > 100000) throw ConfigError("sweep: grid exceeds 1e5 points");
    s.sweep = std::move(spec);
  }
  if (has_bo) {
    const json& bj = cfg.at("bo");
    BoConfig bo;
    bo.bounds = s.problem.design_bounds;
    bo.n_init = get_or<std::size_t>(bj, "n_init", 3);
    bo.max_iter = get_or<std::size_t>(bj, "max_iter", 60);
    bo.kappa = get_or<double>(bj, "kappa", 2.56);
    bo.restarts = get_or<std::size_t>(bj, "restarts", 8);
    bo.eps_improve = get_or<double>(bj, "eps_improve", 1e-3);
    bo.patience = get_or<std::size_t>(bj, "patience", 10);
    bo.retune_every = get_or<std::size_t>(bj, "retune_every", 0);
    bo.seed = mix_seed(s.seed, kTagBoEval, 0xb0);
    s.bo = bo;
  }
  if (cfg.contains("snapshots")) {
    const auto& t = cfg.at("snapshots").at("theta");
    s.snapshot_theta = pde::Vec2{t.at(0).get<double>(), t.at(1).get<double>()};
  }
  return s;
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory: " + dir.string());
  std::ofstream out(dir / name);
  if (!out) throw IoError("cannot write output file: " + (dir / name).string());
  return out;
}

void write_provenance(std::ofstream& out, const Study& s) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(s.hash));
  out << "# gooed " << kVersion << "\n";
  out << "# config_hash=" << buf << "\n";
  out << "# seed=" << s.seed << "\n";
}

void emit_plot_script(const fs::path& dir, const std::string& csv_name,
                      std::size_t n_d) {
  std::ofstream gp(dir / (csv_name + ".gp"));
  gp << "set datafile separator ','\n";
  gp << "set key off\n";
  if (n_d == 1) {
    gp << "set xlabel 'd'\nset ylabel 'U(d)'\n";
    gp << "plot '" << csv_name << "' using 1:2 with linespoints\n";
  } else {
    gp << "set xlabel 'd_0'\nset ylabel 'd_1'\n";
    gp << "set view map\nset palette defined (0 'blue', 1 'red')\n";
    gp << "splot '" << csv_name << "' using 1:2:" << n_d + 1
       << " with points pointtype 7 palette\n";
  }
}

std::vector<double> ranks_with_ties(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
    i = j + 1;
  }
  return rank;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const std::vector<double> ra = ranks_with_ties(a);
  const std::vector<double> rb = ranks_with_ties(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0.0, sa = 0.0, sb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    sa += (ra[i] - ma) * (ra[i] - ma);
    sb += (rb[i] - mb) * (rb[i] - mb);
  }
  return sab / std::sqrt(sa * sb);
}

void write_sweep_header(std::ofstream& out, const Study& s) {
  write_provenance(out, s);
  for (std::size_t k = 0; k < s.problem.n_d; ++k) out << "d_" << k << ",";
  out << "u,term_inner_mean,term_prior_pred_mean,n_out,n_in,bandwidth,wall_time_s\n";
}

struct SweepRow {
  Vector d;
  EigEstimate est;
};

SweepRow estimate_design(const Study& s, const Vector& d, std::size_t index,
                         const PriorPredictiveCache* cache) {
  SweepRow row;
  row.d = d;
  if (s.estimator_kind == "nmc") {
    NmcConfig cfg = s.nmc;
    cfg.seed = mix_seed(s.seed, kTagDesign, index);
    row.est = expected_utility_nmc(s.problem, d, cfg, *cache);
  } else {
    const auto t0 = std::chrono::steady_clock::now();
    RngStream rng = RngStream::derive(s.seed, kTagGridRef, index);
    row.est.u = expected_utility_grid(s.problem, d, s.grid_nodes, s.grid_n_out, rng,
                                      GridTarget::kParameter);
    row.est.term_inner_mean = std::numeric_limits<double>::quiet_NaN();
    row.est.term_prior_pred_mean = std::numeric_limits<double>::quiet_NaN();
    row.est.bandwidth = std::numeric_limits<double>::quiet_NaN();
    row.est.n_out = s.grid_n_out;
    row.est.n_in = 0;
    row.est.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return row;
}

void write_row(std::ofstream& out, const SweepRow& row) {
  for (double c : row.d) out << fmt(c) << ",";
  out << fmt(row.est.u) << "," << fmt(row.est.term_inner_mean) << ","
      << fmt(row.est.term_prior_pred_mean) << "," << row.est.n_out << ","
      << row.est.n_in << "," << fmt(row.est.bandwidth) << ","
      << fmt(row.est.wall_time_s) << "\n";
  out.flush();
}

int cmd_sweep(const Study& s, const fs::path& out_dir) {
  std::ofstream out = open_output(out_dir, "sweep.csv");
  write_sweep_header(out, s);
  std::optional<PriorPredictiveCache> cache;
  if (s.estimator_kind == "nmc") {
    RngStream rng = RngStream::derive(s.seed, kTagCache);
    cache = prior_predictive_setup(s.problem, s.nmc.n_out, s.nmc.bandwidth, rng);
  }
  const DesignGridSpec& grid = *s.sweep;
  for (std::size_t i = 0; i < grid.total(); ++i)
    write_row(out, estimate_design(s, grid.point(i), i, cache ? &*cache : nullptr));
  if (s.emit_plot_script) emit_plot_script(out_dir, "sweep.csv", s.problem.n_d);
  return kExitOk;
}

int cmd_optimize(const Study& s, const fs::path& out_dir) {
  std::ofstream hist = open_output(out_dir, "history.csv");
  write_provenance(hist, s);
  hist << "iter,";
  for (std::size_t k = 0; k < s.problem.n_d; ++k) hist << "d_" << k << ",";
  hist << "u,incumbent_u,acquisition_value\n";

  RngStream cache_rng = RngStream::derive(s.seed, kTagCache);
  const PriorPredictiveCache cache =
      prior_predictive_setup(s.problem, s.nmc.n_out, s.nmc.bandwidth, cache_rng);

  std::size_t eval_counter = 0;
  const auto objective = [&](const Vector& d) {
    NmcConfig cfg = s.nmc;
    cfg.seed = mix_seed(s.seed, kTagBoEval, eval_counter++);
    return expected_utility_nmc(s.problem, d, cfg, cache).u;
  };
  const BoResult result = bo_optimize(objective, *s.bo);

  for (const BoHistoryEntry& h : result.history) {
    hist << h.iter << ",";
    for (double c : h.d) hist << fmt(c) << ",";
    hist << fmt(h.u) << "," << fmt(h.incumbent_u) << "," << fmt(h.acquisition_value)
         << "\n";
    hist.flush();
  }

  std::ofstream res = open_output(out_dir, "result.json");
  json rj;
  rj["d_star"] = result.d_star;
  rj["u_star"] = result.u_star;
  rj["evaluations"] = result.history.size();
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(s.hash));
  rj["config_hash"] = buf;
  rj["seed"] = s.seed;
  rj["version"] = kVersion;
  res << rj.dump(2) << "\n";
  return kExitOk;
}

int cmd_validate(const Study& s, const fs::path& out_dir) {
  if (s.problem.n_theta > 2)
    throw ConfigError("validate: only problems with n_theta <= 2 are supported");
  std::ofstream out = open_output(out_dir, "validate.csv");
  write_provenance(out, s);
  for (std::size_t k = 0; k < s.problem.n_d; ++k) out << "d_" << k << ",";
  out << "u_nmc,u_grid,u_analytic,delta_grid,delta_analytic\n";

  RngStream cache_rng = RngStream::derive(s.seed, kTagCache);
  const PriorPredictiveCache cache =
      prior_predictive_setup(s.problem, s.nmc.n_out, s.nmc.bandwidth, cache_rng);

  const bool analytic = s.problem.name == "lingauss";
  const DesignGridSpec& grid = *s.sweep;
  std::vector<Vector> designs;
  std::vector<double> u_nmc, u_grid;
  double max_abs_delta_analytic = 0.0;
  double mean_delta_grid = 0.0;
  for (std::size_t i = 0; i < grid.total(); ++i) {
    const Vector d = grid.point(i);
    NmcConfig cfg = s.nmc;
    cfg.seed = mix_seed(s.seed, kTagDesign, i);
    const double un = expected_utility_nmc(s.problem, d, cfg, cache).u;
    RngStream grng = RngStream::derive(s.seed, kTagGridRef, i);
    const double ug = expected_utility_grid(s.problem, d, s.grid_nodes, s.grid_n_out,
                                            grng, GridTarget::kParameter);
    double ua = std::numeric_limits<double>::quiet_NaN();
    if (analytic) {
      ua = lingauss_analytic_eig(d[0]);
      max_abs_delta_analytic = std::max(max_abs_delta_analytic, std::fabs(un - ua));
    }
    designs.push_back(d);
    u_nmc.push_back(un);
    u_grid.push_back(ug);
    mean_delta_grid += (un - ug) / static_cast<double>(grid.total());
    for (double c : d) out << fmt(c) << ",";
    out << fmt(un) << "," << fmt(ug) << "," << fmt(ua) << "," << fmt(un - ug) << ","
        << fmt(analytic ? un - ua : std::numeric_limits<double>::quiet_NaN()) << "\n";
    out.flush();
  }

  const double rho = designs.size() >= 3 ? spearman(u_nmc, u_grid) : 1.0;
  const std::size_t am_n = static_cast<std::size_t>(
      std::max_element(u_nmc.begin(), u_nmc.end()) - u_nmc.begin());
  const std::size_t am_g = static_cast<std::size_t>(
      std::max_element(u_grid.begin(), u_grid.end()) - u_grid.begin());
  double argmax_dist = 0.0;
  for (std::size_t k = 0; k < s.problem.n_d; ++k)
    argmax_dist += (designs[am_n][k] - designs[am_g][k]) * (designs[am_n][k] - designs[am_g][k]);
  argmax_dist = std::sqrt(argmax_dist);

  // Acceptance thresholds for the validation gate.
  constexpr double kMinSpearman = 0.9;
  constexpr double kMaxArgmaxDistance = 0.1;
  constexpr double kMaxAnalyticDelta = 0.15;

  bool pass = rho >= kMinSpearman && argmax_dist <= kMaxArgmaxDistance;
  if (analytic) pass = pass && max_abs_delta_analytic <= kMaxAnalyticDelta;

  std::string diagnosis = "ok";
  if (!pass) {
    diagnosis = mean_delta_grid < -0.25
                    ? "EIG underestimated relative to the reference; bandwidth too large"
                    : (mean_delta_grid > 0.25
                           ? "EIG overestimated relative to the reference; bandwidth too small"
                           : "disagreement with the reference");
  }

  json report;
  report["spearman"] = rho;
  report["argmax_distance"] = argmax_dist;
  report["mean_delta_grid"] = mean_delta_grid;
  if (analytic) report["max_abs_delta_analytic"] = max_abs_delta_analytic;
  report["thresholds"] = {{"spearman_min", kMinSpearman},
                          {"argmax_distance_max", kMaxArgmaxDistance},
                          {"analytic_delta_max", kMaxAnalyticDelta}};
  report["status"] = pass ? "pass" : "fail";
  report["diagnosis"] = diagnosis;
  report["seed"] = s.seed;
  std::ofstream rep = open_output(out_dir, "validate_report.json");
  rep << report.dump(2) << "\n";
  std::cout << report.dump(2) << std::endl;
  return pass ? kExitOk : kExitValidationFailure;
}

int cmd_pde_demo(const Study& s, const fs::path& out_dir) {
  if (!s.surrogate)
    throw ConfigError("pde-demo requires problem name \"sensor\"");
  if (s.snapshot_theta) {
    pde::SourceParams src;
    src.theta_x1 = (*s.snapshot_theta)[0];
    src.theta_x2 = (*s.snapshot_theta)[1];
    const auto snaps = pde::solve(src, s.pde_grid, s.pde_cfg);
    for (std::size_t k = 0; k < snaps.size(); ++k) {
      std::ofstream out = open_output(out_dir, "snapshot_" + std::to_string(k) + ".csv");
      json header;
      header["dx"] = snaps[k].dx;
      header["domain"] = {-1.0, 2.0};
      header["t"] = snaps[k].t;
      header["theta"] = {src.theta_x1, src.theta_x2};
      out << "# " << header.dump() << "\n";
      for (int j = 0; j < snaps[k].n; ++j) {
        for (int i = 0; i < snaps[k].n; ++i)
          out << fmt(snaps[k].at(i, j)) << (i + 1 < snaps[k].n ? "," : "");
        out << "\n";
      }
    }
  }
  if (s.sweep) return cmd_sweep(s, out_dir);
  if (s.bo) return cmd_optimize(s, out_dir);
  return kExitOk;
}

}  // namespace

std::uint64_t config_hash(const json& effective) {
  const std::string canonical = effective.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

int run_study(const CliOptions& opts) {
  try {
    const Study s = build_study(opts);
    const fs::path out_dir(opts.out_dir);
    if (opts.command == "sweep") return cmd_sweep(s, out_dir);
    if (opts.command == "optimize") return cmd_optimize(s, out_dir);
    if (opts.command == "validate") return cmd_validate(s, out_dir);
    if (opts.command == "pde-demo") return cmd_pde_demo(s, out_dir);
    throw ConfigError("unknown command: " + opts.command);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return kExitConfigError;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << std::endl;
    return kExitRuntimeError;
  } catch (const Error& e) {
    std::cerr << "runtime error: " << e.what() << std::endl;
    return kExitRuntimeError;
  }
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Goal-oriented Bayesian experimental design toolkit"};
  app.require_subcommand(1);

  CliOptions opts;
  std::uint64_t seed_value = 0;
  bool seed_given = false;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "study config JSON")->required();
    sub->add_option("--out", opts.out_dir, "output directory")->required();
    sub->add_option("--seed", seed_value, "seed override")->each([&](const std::string&) {
      seed_given = true;
    });
    sub->add_option("--threads", opts.threads, "worker thread cap");
    sub->add_flag("--paper-resolution", opts.paper_resolution,
                  "use the fine PDE grid (dx=0.01, dt=5e-4)");
    sub->add_flag("--emit-plot-script", opts.emit_plot_script,
                  "write a gnuplot script next to each CSV");
  };
  for (const char* name : {"sweep", "optimize", "validate", "pde-demo"})
    add_common(app.add_subcommand(name));

  std::vector<const char*> argv;
  argv.push_back("gooed");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }
  opts.command = app.get_subcommands().front()->get_name();
  if (seed_given) opts.seed = seed_value;
  return run_study(opts);
}

}  // namespace gooed::cli
