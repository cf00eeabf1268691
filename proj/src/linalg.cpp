#include "conceptsearch/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace conceptsearch {

namespace {

using Vec = std::vector<double>;

double dotv(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double normv(std::span<const double> a) { return std::sqrt(dotv(a, a)); }

void scalev(Vec& a, double f) {
  for (double& x : a) x *= f;
}

// Two passes of classical Gram-Schmidt.
void orthogonalize(Vec& x, const std::vector<Vec>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const Vec& b : basis) {
      const double p = dotv(x, b);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] -= p * b[i];
    }
  }
}

// Unit vector orthogonal to `basis`: the first coordinate axis with a
// substantial residual, else the axis with the largest one. Requires
// basis.size() < dim.
Vec complete_basis(std::size_t dim, const std::vector<Vec>& basis) {
  Vec best;
  double best_norm = 0.0;
  for (std::size_t axis = 0; axis < dim; ++axis) {
    Vec e(dim, 0.0);
    e[axis] = 1.0;
    orthogonalize(e, basis);
    const double n = normv(e);
    if (n > best_norm) {
      best_norm = n;
      best = std::move(e);
      if (n > 0.5) break;
    }
  }
  if (best_norm < 1e-8) throw std::logic_error("cannot extend a complete basis");
  orthogonalize(best, basis);
  scalev(best, 1.0 / normv(best));
  return best;
}

}  // namespace

SvdResult jacobi_svd(const DenseMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m == 0 || n == 0) return {};
  if (m < n) {
    DenseMatrix t(n, m);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < n; ++c) t(c, r) = a(r, c);
    }
    SvdResult res = jacobi_svd(t);
    std::swap(res.left, res.right);
    return res;
  }

  std::vector<Vec> w(n, Vec(m));
  std::vector<Vec> v(n, Vec(n, 0.0));
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 0; r < m; ++r) w[c][r] = a(r, c);
    v[c][c] = 1.0;
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double alpha = dotv(w[i], w[i]);
        const double beta = dotv(w[j], w[j]);
        const double gamma = dotv(w[i], w[j]);
        if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < m; ++k) {
          const double wi = w[i][k];
          const double wj = w[j][k];
          w[i][k] = c * wi - s * wj;
          w[j][k] = s * wi + c * wj;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vi = v[i][k];
          const double vj = v[j][k];
          v[i][k] = c * vi - s * vj;
          v[j][k] = s * vi + c * vj;
        }
      }
    }
    if (!rotated) break;
  }

  Vec sigma(n);
  for (std::size_t c = 0; c < n; ++c) sigma[c] = normv(w[c]);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  SvdResult res;
  const double smax = sigma[order.front()];
  for (std::size_t idx : order) {
    res.singular_values.push_back(sigma[idx]);
    res.right.push_back(v[idx]);
  }
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t idx = order[k];
    if (sigma[idx] > 0.0 && sigma[idx] > smax * 1e-13) {
      Vec u = w[idx];
      scalev(u, 1.0 / sigma[idx]);
      res.left.push_back(std::move(u));
    } else {
      res.left.push_back(complete_basis(m, res.left));
    }
  }
  return res;
}

SvdResult lanczos_svd(std::size_t rows, std::size_t cols, const MatVec& apply,
                      const MatVec& apply_transpose, std::size_t rank, std::size_t steps) {
  if (rows == 0 || cols == 0 || rank == 0) return {};
  if (cols > rows) {
    SvdResult res = lanczos_svd(cols, rows, apply_transpose, apply, rank, steps);
    std::swap(res.left, res.right);
    return res;
  }
  const std::size_t m = rows;
  const std::size_t n = cols;
  rank = std::min(rank, n);
  steps = std::clamp(std::max(steps, rank), std::size_t{1}, n);

  std::vector<Vec> us;
  std::vector<Vec> vs;
  Vec alphas;
  Vec betas;
  double scale = 0.0;
  auto breakdown = [&](double value) { return value <= 1e-13 * scale; };

  Vec v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  vs.push_back(v);
  for (std::size_t j = 0; j < steps; ++j) {
    Vec u(m, 0.0);
    apply(vs[j], u);
    if (j > 0) {
      for (std::size_t i = 0; i < m; ++i) u[i] -= betas[j - 1] * us[j - 1][i];
    }
    orthogonalize(u, us);
    double alpha = normv(u);
    scale = std::max(scale, alpha);
    if (breakdown(alpha)) {
      alpha = 0.0;
      u = complete_basis(m, us);
    } else {
      scalev(u, 1.0 / alpha);
    }
    alphas.push_back(alpha);
    us.push_back(std::move(u));
    if (j + 1 == steps) break;

    Vec next(n, 0.0);
    apply_transpose(us[j], next);
    for (std::size_t i = 0; i < n; ++i) next[i] -= alpha * vs[j][i];
    orthogonalize(next, vs);
    double beta = normv(next);
    scale = std::max(scale, beta);
    if (breakdown(beta)) {
      beta = 0.0;
      next = complete_basis(n, vs);
    } else {
      scalev(next, 1.0 / beta);
    }
    betas.push_back(beta);
    vs.push_back(std::move(next));
  }

  // A V = U B with B upper bidiagonal.
  const std::size_t p = alphas.size();
  DenseMatrix b(p, p);
  for (std::size_t j = 0; j < p; ++j) {
    b(j, j) = alphas[j];
    if (j + 1 < p) b(j, j + 1) = betas[j];
  }
  SvdResult small = jacobi_svd(b);

  SvdResult res;
  for (std::size_t k = 0; k < rank && k < small.singular_values.size(); ++k) {
    Vec left(m, 0.0);
    Vec right(n, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
      const double lu = small.left[k][j];
      const double rv = small.right[k][j];
      for (std::size_t i = 0; i < m; ++i) left[i] += lu * us[j][i];
      for (std::size_t i = 0; i < n; ++i) right[i] += rv * vs[j][i];
    }
    res.left.push_back(std::move(left));
    res.right.push_back(std::move(right));
    res.singular_values.push_back(small.singular_values[k]);
  }
  return res;
}

SvdResult svd(const DenseMatrix& a, std::size_t rank) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  MatVec apply = [&](std::span<const double> x, std::span<double> y) {
    for (std::size_t r = 0; r < m; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < n; ++c) s += a(r, c) * x[c];
      y[r] = s;
    }
  };
  MatVec apply_t = [&](std::span<const double> x, std::span<double> y) {
    for (std::size_t c = 0; c < n; ++c) y[c] = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < n; ++c) y[c] += a(r, c) * x[r];
    }
  };
  return lanczos_svd(m, n, apply, apply_t, rank, std::min(m, n));
}

}  // namespace conceptsearch
