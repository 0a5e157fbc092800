#include "gooed/kde.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace gooed {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct VectorBytesHash {
  std::size_t operator()(const Vector& v) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (double x : v) {
      std::uint64_t bits;
      std::memcpy(&bits, &x, sizeof(bits));
      h ^= bits;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

struct VectorBytesEq {
  bool operator()(const Vector& a, const Vector& b) const {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
  }
};

}  // namespace

namespace {
using UniqueIndex =
    std::unordered_map<Vector, std::size_t, VectorBytesHash, VectorBytesEq>;
}

KdeModel KdeModel::fit_flat(const std::vector<double>& flat, std::size_t n_z, double b) {
  if (n_z == 0 || flat.empty() || flat.size() % n_z != 0)
    throw NumericError("kde fit: empty or malformed sample set");
  if (!(b > 0.0)) throw NumericError("kde fit: bandwidth must be > 0");
  const std::size_t n = flat.size() / n_z;
  KdeModel m;
  m.b_ = b;
  m.n_z_ = n_z;
  m.n_total_ = n;
  m.cluster_of_.resize(n);

  UniqueIndex index;
  index.reserve(n);
  Vector row(n_z);
  for (std::size_t i = 0; i < n; ++i) {
    const double* src = flat.data() + i * n_z;
    row.assign(src, src + n_z);
    for (double v : row)
      if (!std::isfinite(v)) throw NumericError("kde fit: non-finite sample");
    auto [it, inserted] = index.emplace(row, m.points_.size());
    if (inserted) {
      m.points_.push_back(row);
      m.weights_.push_back(1.0);
    } else {
      m.weights_[it->second] += 1.0;
    }
    m.cluster_of_[i] = it->second;
  }
  return m;
}

KdeModel KdeModel::fit(const std::vector<Vector>& samples, double b) {
  if (samples.empty()) throw NumericError("kde fit: empty sample set");
  const std::size_t n_z = samples.front().size();
  std::vector<double> flat;
  flat.reserve(samples.size() * n_z);
  for (const Vector& s : samples) {
    if (s.size() != n_z) throw NumericError("kde fit: inconsistent sample dimension");
    flat.insert(flat.end(), s.begin(), s.end());
  }
  return fit_flat(flat, n_z, b);
}

double KdeModel::log_density_impl(const double* z, std::size_t skip_cluster,
                                  double skip_weight, double denom) const {
  thread_local std::vector<double> terms;
  terms.assign(points_.size(), kNegInf);
  const double inv2b2 = 1.0 / (2.0 * b_ * b_);
  double max_term = kNegInf;
  for (std::size_t k = 0; k < points_.size(); ++k) {
    double w = weights_[k];
    if (k == skip_cluster) {
      w -= skip_weight;
      if (w <= 0.0) continue;
    }
    const Vector& s = points_[k];
    double q = 0.0;
    for (std::size_t j = 0; j < n_z_; ++j) {
      const double d = z[j] - s[j];
      q += d * d;
    }
    terms[k] = std::log(w) - q * inv2b2;
    if (terms[k] > max_term) max_term = terms[k];
  }
  if (!std::isfinite(max_term)) return kNegInf;
  double acc = 0.0;
  for (double t : terms)
    if (std::isfinite(t)) acc += std::exp(t - max_term);
  return max_term + std::log(acc) - std::log(denom) -
         0.5 * static_cast<double>(n_z_) * (kLogTwoPi + 2.0 * std::log(b_));
}

double KdeModel::log_density_at(const double* z) const {
  return log_density_impl(z, points_.size(), 0.0, static_cast<double>(n_total_));
}

double KdeModel::log_density(const Vector& z) const {
  if (z.size() != n_z_) throw NumericError("kde log_density: dimension mismatch");
  return log_density_at(z.data());
}

double KdeModel::loo_log_density(std::size_t original_index) const {
  if (original_index >= cluster_of_.size())
    throw NumericError("kde loo: index out of range");
  if (n_total_ < 2) throw NumericError("kde loo: needs at least two samples");
  const std::size_t cluster = cluster_of_[original_index];
  return log_density_impl(points_[cluster].data(), cluster, 1.0,
                          static_cast<double>(n_total_ - 1));
}

BandwidthPolicy BandwidthPolicy::fixed(double b) {
  if (!(b > 0.0)) throw ConfigError("bandwidth policy: fixed b must be > 0");
  BandwidthPolicy p;
  p.kind = Kind::kFixed;
  p.b = b;
  return p;
}

BandwidthPolicy BandwidthPolicy::adaptive(std::size_t folds, std::vector<double> grid,
                                          std::size_t n_warm) {
  if (folds < 2) throw ConfigError("bandwidth policy: cv_folds must be >= 2");
  if (n_warm < 1) throw ConfigError("bandwidth policy: n_warm must be >= 1");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] > 0.0 && grid[i] < grid[i + 1]))
      throw ConfigError("bandwidth policy: grid must be positive and increasing");
  BandwidthPolicy p;
  p.kind = Kind::kAdaptive;
  p.cv_folds = folds;
  p.grid = std::move(grid);
  p.n_warm = n_warm;
  return p;
}

std::vector<double> default_bandwidth_grid(const std::vector<Vector>& samples) {
  const std::size_t n_z = samples.front().size();
  Vector ranges(n_z, 0.0);
  for (std::size_t j = 0; j < n_z; ++j) {
    double lo = samples.front()[j], hi = samples.front()[j];
    for (const Vector& s : samples) {
      lo = std::min(lo, s[j]);
      hi = std::max(hi, s[j]);
    }
    ranges[j] = hi - lo;
  }
  std::sort(ranges.begin(), ranges.end());
  double r = n_z % 2 == 1 ? ranges[n_z / 2]
                          : 0.5 * (ranges[n_z / 2 - 1] + ranges[n_z / 2]);
  if (!(r > 0.0)) r = 1.0;  // degenerate all-identical set

  constexpr int kCount = 25;
  std::vector<double> grid(kCount);
  const double lo = std::log(1e-3 * r);
  const double hi = std::log(r);
  for (int i = 0; i < kCount; ++i)
    grid[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / (kCount - 1));
  return grid;
}

double cv_select_bandwidth(const std::vector<Vector>& samples,
                           const std::vector<double>& grid, std::size_t folds,
                           RngStream& rng) {
  const std::size_t n = samples.size();
  if (grid.empty()) throw NumericError("cv bandwidth: empty candidate grid");
  if (folds < 2 || n < folds)
    throw NumericError("cv bandwidth: requires n >= folds >= 2");

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = n - 1; i > 0; --i)
    std::swap(perm[i], perm[rng.uniform_index(i + 1)]);

  double best_b = 0.0;
  double best_score = kNegInf;
  std::vector<Vector> train;
  train.reserve(n);
  for (double b : grid) {
    double total = 0.0;
    bool valid = true;
    for (std::size_t f = 0; f < folds && valid; ++f) {
      train.clear();
      for (std::size_t i = 0; i < n; ++i)
        if (i % folds != f) train.push_back(samples[perm[i]]);
      const KdeModel m = KdeModel::fit(train, b);
      for (std::size_t i = f; i < n; i += folds) {
        const double ll = m.log_density(samples[perm[i]]);
        if (!std::isfinite(ll)) {
          valid = false;
          break;
        }
        total += ll;
      }
    }
    if (!valid) continue;
    const double score = total / static_cast<double>(n);
    if (score >= best_score) {  // ">=" breaks ties toward the larger b
      best_score = score;
      best_b = b;
    }
  }
  if (!(best_b > 0.0))
    throw NumericError("cv bandwidth: no candidate achieved finite held-out likelihood");
  return best_b;
}

double resolve_bandwidth(const BandwidthPolicy& policy,
                         const std::vector<std::vector<Vector>>& warm_sample_sets,
                         RngStream& rng) {
  if (policy.kind == BandwidthPolicy::Kind::kFixed) return policy.b;
  if (warm_sample_sets.empty())
    throw NumericError("resolve_bandwidth: adaptive policy needs at least one warm set");
  const std::size_t count = std::min(policy.n_warm, warm_sample_sets.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const auto& set = warm_sample_sets[i];
    const std::vector<double>& grid =
        policy.grid.empty() ? default_bandwidth_grid(set) : policy.grid;
    acc += cv_select_bandwidth(set, grid, policy.cv_folds, rng);
  }
  return acc / static_cast<double>(count);
}

}  // namespace gooed
