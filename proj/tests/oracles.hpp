#pragma once
// Reference implementations used only by the tests. They share no code with
// the library beyond plain data types: the GP oracle builds the dense
// covariance matrix element by element and inverts it with Gauss-Jordan
// elimination; the path oracle enumerates simple paths depth first.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "terragp/rng.hpp"
#include "terragp/terrain_map.hpp"

namespace oracle {

struct Obs {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

struct ClassHyper {
  double prior_mean = 0.0;
  double sigma_f = 1.0;
  double sigma_d = 1.0;
};

struct DenseGp {
  int width = 0;
  int height = 0;
  double cell_size = 1.0;
  std::vector<int> class_of;  // row-major
  std::vector<ClassHyper> classes;
  double noise_std = 0.0;
  double jitter = 1e-10;
  bool class_mask = true;  // false: every pair uses the class-0 hyperparameters

  int cls(int r, int c) const { return class_of[static_cast<std::size_t>(r * width + c)]; }

  double cov(int r1, int c1, int r2, int c2) const {
    const int a = cls(r1, c1);
    const int b = cls(r2, c2);
    if (class_mask && a != b) return 0.0;
    const ClassHyper& h = classes[static_cast<std::size_t>(class_mask ? a : 0)];
    const double dx = (c1 - c2) * cell_size;
    const double dy = (r1 - r2) * cell_size;
    return h.sigma_f * h.sigma_f * std::exp(-(dx * dx + dy * dy) / (2.0 * h.sigma_d * h.sigma_d));
  }

  double mu(int r, int c) const { return classes[static_cast<std::size_t>(class_mask ? cls(r, c) : 0)].prior_mean; }
};

using Matrix = std::vector<std::vector<long double>>;

/// Inverse by Gauss-Jordan with partial pivoting; nullopt if a pivot vanishes.
inline std::optional<Matrix> invert(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv(n, std::vector<long double>(n, 0.0L));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0L;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    if (a[piv][col] == 0.0L) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const long double p = a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= p;
      inv[col][j] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0.0L) continue;
      const long double f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

inline long double norm1(const Matrix& a) {
  long double best = 0.0L;
  for (std::size_t j = 0; j < a.size(); ++j) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i][j]);
    best = std::max(best, s);
  }
  return best;
}

struct GpResult {
  std::vector<double> mean;
  std::vector<double> variance;
  double added_jitter = 0.0;
};

/// Posterior at every cell. Same escalation contract as the library: try the
/// plain matrix, then add jitter * scale * 10^i (i = 0..3) to the diagonal
/// until the reciprocal 1-norm condition number reaches 1e-10.
inline GpResult dense_posterior(const DenseGp& gp, const std::vector<Obs>& obs) {
  const std::size_t n = obs.size();
  const int cells = gp.width * gp.height;
  GpResult out;
  out.mean.resize(static_cast<std::size_t>(cells));
  out.variance.resize(static_cast<std::size_t>(cells));

  Matrix k(n, std::vector<long double>(n));
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) k[i][j] = gp.cov(obs[i].row, obs[i].col, obs[j].row, obs[j].col);
    k[i][i] += gp.noise_std * gp.noise_std;
    const ClassHyper& h = gp.classes[static_cast<std::size_t>(gp.class_mask ? gp.cls(obs[i].row, obs[i].col) : 0)];
    scale = std::max(scale, h.sigma_f * h.sigma_f);
  }
  if (scale == 0.0) scale = 1.0;

  std::optional<Matrix> kinv;
  for (int attempt = 0; attempt <= 4 && n > 0; ++attempt) {
    const double add = attempt == 0 ? 0.0 : gp.jitter * scale * std::pow(10.0, attempt - 1);
    Matrix a = k;
    for (std::size_t i = 0; i < n; ++i) a[i][i] += add;
    auto inv = invert(a);
    if (inv && 1.0L / (norm1(a) * norm1(*inv)) >= 1e-10L) {
      kinv = std::move(inv);
      out.added_jitter = add;
      break;
    }
  }
  if (n > 0 && !kinv) throw std::runtime_error("oracle: singular covariance");

  std::vector<long double> resid(n);
  for (std::size_t i = 0; i < n; ++i) resid[i] = obs[i].value - gp.mu(obs[i].row, obs[i].col);

  for (int r = 0; r < gp.height; ++r)
    for (int c = 0; c < gp.width; ++c) {
      std::vector<long double> ks(n);
      for (std::size_t i = 0; i < n; ++i) ks[i] = gp.cov(r, c, obs[i].row, obs[i].col);
      long double m = gp.mu(r, c);
      long double v = gp.cov(r, c, r, c);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          m += ks[i] * (*kinv)[i][j] * resid[j];
          v -= ks[i] * (*kinv)[i][j] * ks[j];
        }
      const auto idx = static_cast<std::size_t>(r * gp.width + c);
      out.mean[idx] = static_cast<double>(m);
      out.variance[idx] = std::max(0.0, static_cast<double>(v));
    }
  return out;
}

// ------------------------------------------------------------------ paths

struct PathProblem {
  int width = 0;
  int height = 0;
  double cell_size = 1.0;
  bool diagonal = true;
  std::vector<double> energy;  // row-major, all >= 0
};

/// Minimum cost over all simple paths, each priced as the left-to-right sum
/// of 0.5 * (e_i + e_j) * distance. Branches whose partial cost already
/// exceeds the best complete path are cut (costs are non-negative).
inline double min_simple_path_cost(const PathProblem& p, int start, int goal) {
  if (start == goal) return 0.0;
  const int n = p.width * p.height;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  double best = std::numeric_limits<double>::infinity();
  const double straight = p.cell_size;
  const double diag = p.cell_size * std::sqrt(2.0);

  const auto dfs = [&](auto&& self, int at, double cost) -> void {
    if (cost > best) return;
    if (at == goal) {
      best = std::min(best, cost);
      return;
    }
    const int r = at / p.width;
    const int c = at % p.width;
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        if (!p.diagonal && dr != 0 && dc != 0) continue;
        const int nr = r + dr;
        const int nc = c + dc;
        if (nr < 0 || nr >= p.height || nc < 0 || nc >= p.width) continue;
        const int next = nr * p.width + nc;
        if (seen[static_cast<std::size_t>(next)]) continue;
        const double d = (dr != 0 && dc != 0) ? diag : straight;
        const double step = 0.5 * (p.energy[static_cast<std::size_t>(at)] + p.energy[static_cast<std::size_t>(next)]) * d;
        seen[static_cast<std::size_t>(next)] = 1;
        self(self, next, cost + step);
        seen[static_cast<std::size_t>(next)] = 0;
      }
  };
  seen[static_cast<std::size_t>(start)] = 1;
  dfs(dfs, start, 0.0);
  return best;
}

}  // namespace oracle
