#include "htc/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <string>

#include "htc/error.hpp"
#include "htc/parallel.hpp"

namespace htc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Net outflow per cell, row-major: rho0 / |rho0| - rho1 / |rho1|.
std::vector<double> supply(const GridDistribution& rho0, const GridDistribution& rho1) {
  if (rho0.rows() != rho1.rows() || rho0.cols() != rho1.cols()) {
    fail(ErrorCategory::invalid_argument, "grid shapes differ");
  }
  if (rho0.rows() == 0 || rho0.cols() == 0) fail(ErrorCategory::invalid_argument, "empty grid");
  if (!(rho0.step > 0.0) || rho0.step != rho1.step) {
    fail(ErrorCategory::invalid_argument, "grid steps must be positive and equal");
  }
  for (const auto* rho : {&rho0, &rho1}) {
    if (!rho->mass.allFinite() || rho->mass.minCoeff() < 0.0) {
      fail(ErrorCategory::invalid_argument, "grid mass must be finite and nonnegative");
    }
    if (!(rho->mass.sum() > 0.0)) fail(ErrorCategory::invalid_argument, "grid mass must be positive");
  }
  const double total0 = rho0.mass.sum();
  const double total1 = rho1.mass.sum();
  const std::size_t rows = rho0.rows();
  const std::size_t cols = rho0.cols();
  std::vector<double> b(rows * cols);
  double sum0 = 0.0;
  double sum1 = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double a = rho0.mass(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) / total0;
      const double c = rho1.mass(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) / total1;
      sum0 += a;
      sum1 += c;
      b[i * cols + j] = a - c;
    }
  }
  if (std::abs(sum0 - sum1) > 1e-9) fail(ErrorCategory::invalid_argument, "mass mismatch after normalization");
  return b;
}

// ---------------------------------------------------------------------------
// p = 1: successive shortest paths on the residual grid graph.

class GridFlow {
 public:
  GridFlow(std::size_t rows, std::size_t cols, double cost)
      : rows_(rows), cols_(cols), cost_(cost), flow_(rows * cols * 4, 0.0),
        potential_(rows * cols, 0.0) {}

  WassersteinResult solve(std::vector<double> excess) {
    constexpr double eps = 1e-13;
    const std::size_t n = rows_ * cols_;
    const std::vector<double> b = excess;
    WassersteinResult result;

    std::vector<double> dist(n);
    std::vector<std::size_t> pred_arc(n);
    std::vector<char> settled(n);
    using Item = std::pair<double, std::size_t>;

    for (;;) {
      bool has_source = false;
      bool has_sink = false;
      for (double e : excess) {
        has_source = has_source || e > eps;
        has_sink = has_sink || e < -eps;
      }
      if (!has_source || !has_sink) break;

      std::fill(dist.begin(), dist.end(), kInf);
      std::fill(settled.begin(), settled.end(), 0);
      std::fill(pred_arc.begin(), pred_arc.end(), kNone);
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      for (std::size_t v = 0; v < n; ++v) {
        if (excess[v] > eps) {
          dist[v] = 0.0;
          heap.emplace(0.0, v);
        }
      }

      std::size_t sink = kNone;
      while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (settled[u] || d > dist[u]) continue;
        settled[u] = 1;
        if (excess[u] < -eps) {
          sink = u;
          break;
        }
        for (int dir = 0; dir < 4; ++dir) {
          const std::size_t v = neighbour(u, dir);
          if (v == kNone || settled[v]) continue;
          // Forward arc u -> v, or cancellation of flow on v -> u.
          const double back = flow_[v * 4 + opposite(dir)];
          const double arc_cost = back > eps ? -cost_ : cost_;
          const double reduced = std::max(0.0, arc_cost + potential_[u] - potential_[v]);
          if (dist[u] + reduced < dist[v]) {
            dist[v] = dist[u] + reduced;
            pred_arc[v] = u * 4 + static_cast<std::size_t>(dir);
            heap.emplace(dist[v], v);
          }
        }
      }
      if (sink == kNone) fail(ErrorCategory::degenerate, "transport problem is infeasible");

      const double dt = dist[sink];
      for (std::size_t v = 0; v < n; ++v) potential_[v] += std::min(dist[v], dt);

      double delta = -excess[sink];
      std::size_t v = sink;
      while (pred_arc[v] != kNone) {
        const std::size_t u = pred_arc[v] / 4;
        const int dir = static_cast<int>(pred_arc[v] % 4);
        const double back = flow_[v * 4 + opposite(dir)];
        if (back > eps) delta = std::min(delta, back);
        v = u;
      }
      delta = std::min(delta, excess[v]);

      v = sink;
      while (pred_arc[v] != kNone) {
        const std::size_t u = pred_arc[v] / 4;
        const int dir = static_cast<int>(pred_arc[v] % 4);
        double& back = flow_[v * 4 + opposite(dir)];
        if (back > eps) {
          back -= delta;
          if (back <= eps) back = 0.0;
        } else {
          flow_[u * 4 + static_cast<std::size_t>(dir)] += delta;
        }
        v = u;
      }
      excess[v] -= delta;
      excess[sink] += delta;
      ++result.iterations;
    }

    double primal = 0.0;
    for (double f : flow_) primal += f;
    primal *= cost_;
    double dual = 0.0;
    for (std::size_t v = 0; v < n; ++v) dual -= b[v] * potential_[v];
    result.distance = primal;
    result.lower_bound = dual;
    result.duality_gap = primal - dual;
    return result;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  // 0 right, 1 left, 2 down, 3 up.
  static int opposite(int dir) noexcept { return dir ^ 1; }

  std::size_t neighbour(std::size_t u, int dir) const noexcept {
    const std::size_t i = u / cols_;
    const std::size_t j = u % cols_;
    switch (dir) {
      case 0: return j + 1 < cols_ ? u + 1 : kNone;
      case 1: return j > 0 ? u - 1 : kNone;
      case 2: return i + 1 < rows_ ? u + cols_ : kNone;
      default: return i > 0 ? u - cols_ : kNone;
    }
  }

  std::size_t rows_;
  std::size_t cols_;
  double cost_;
  std::vector<double> flow_;  // per directed arc (cell * 4 + dir)
  std::vector<double> potential_;
};

// ---------------------------------------------------------------------------
// p = 2 (and p = 1 as a cross-check): primal-dual iteration on a unit grid.
// Horizontal flux hx(i,j) crosses the edge between (i,j) and (i,j+1);
// vertical flux vy(i,j) crosses the edge between (i,j) and (i+1,j).

class FluxProblem {
 public:
  FluxProblem(std::size_t rows, std::size_t cols, int p)
      : rows_(rows), cols_(cols), p_(p) {}

  std::size_t cells() const noexcept { return rows_ * cols_; }
  std::size_t hsize() const noexcept { return rows_ * (cols_ - 1); }
  std::size_t vsize() const noexcept { return (rows_ - 1) * cols_; }

  // Net outflow per cell.
  void divergence(const std::vector<double>& hx, const std::vector<double>& vy,
                  std::vector<double>& out) const {
    out.assign(cells(), 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j + 1 < cols_; ++j) {
        const double f = hx[i * (cols_ - 1) + j];
        out[i * cols_ + j] += f;
        out[i * cols_ + j + 1] -= f;
      }
    }
    for (std::size_t i = 0; i + 1 < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        const double f = vy[i * cols_ + j];
        out[i * cols_ + j] += f;
        out[(i + 1) * cols_ + j] -= f;
      }
    }
  }

  // Adjoint of divergence.
  void difference(const std::vector<double>& phi, std::vector<double>& gx,
                  std::vector<double>& gy) const {
    gx.resize(hsize());
    gy.resize(vsize());
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j + 1 < cols_; ++j) {
        gx[i * (cols_ - 1) + j] = phi[i * cols_ + j] - phi[i * cols_ + j + 1];
      }
    }
    for (std::size_t i = 0; i + 1 < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        gy[i * cols_ + j] = phi[i * cols_ + j] - phi[(i + 1) * cols_ + j];
      }
    }
  }

  // Applies fn(h, v) to the flux pair owned by each cell; missing boundary
  // components are passed as nullptr.
  template <typename Fn>
  void for_each_cell(std::vector<double>& hx, std::vector<double>& vy, Fn&& fn) const {
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        double* h = j + 1 < cols_ ? &hx[i * (cols_ - 1) + j] : nullptr;
        double* v = i + 1 < rows_ ? &vy[i * cols_ + j] : nullptr;
        fn(h, v);
      }
    }
  }

  double cell_norm(double a, double b) const noexcept {
    return p_ == 2 ? std::hypot(a, b) : std::abs(a) + std::abs(b);
  }
  double dual_norm(double a, double b) const noexcept {
    return p_ == 2 ? std::hypot(a, b) : std::max(std::abs(a), std::abs(b));
  }

  double primal_cost(std::vector<double> hx, std::vector<double> vy) const {
    double total = 0.0;
    for_each_cell(hx, vy, [&](double* h, double* v) {
      total += cell_norm(h ? *h : 0.0, v ? *v : 0.0);
    });
    return total;
  }

  // prox of t * norm, cell by cell.
  void shrink(std::vector<double>& hx, std::vector<double>& vy, double t) const {
    for_each_cell(hx, vy, [&](double* h, double* v) {
      if (p_ == 2) {
        const double norm = std::hypot(h ? *h : 0.0, v ? *v : 0.0);
        const double scale = norm > t ? 1.0 - t / norm : 0.0;
        if (h) *h *= scale;
        if (v) *v *= scale;
      } else {
        for (double* x : {h, v}) {
          if (x) *x = std::copysign(std::max(0.0, std::abs(*x) - t), *x);
        }
      }
    });
  }

  // Solves div(grad^T z) = rhs (a Neumann grid Laplacian) by conjugate
  // gradients; rhs must sum to zero.
  std::vector<double> solve_laplacian(std::vector<double> rhs) const {
    const std::size_t n = cells();
    double mean = 0.0;
    for (double v : rhs) mean += v;
    mean /= static_cast<double>(n);
    for (double& v : rhs) v -= mean;

    std::vector<double> z(n, 0.0);
    std::vector<double> r = rhs;
    std::vector<double> dir = r;
    std::vector<double> gx;
    std::vector<double> gy;
    std::vector<double> ad;
    double rr = dot(r, r);
    const double stop = 1e-30 * std::max(1.0, rr);
    for (std::size_t it = 0; it < 4 * n + 100 && rr > stop; ++it) {
      difference(dir, gx, gy);
      divergence(gx, gy, ad);
      const double dad = dot(dir, ad);
      if (!(dad > 0.0)) break;
      const double alpha = rr / dad;
      for (std::size_t k = 0; k < n; ++k) {
        z[k] += alpha * dir[k];
        r[k] -= alpha * ad[k];
      }
      const double next = dot(r, r);
      const double beta = next / rr;
      rr = next;
      for (std::size_t k = 0; k < n; ++k) dir[k] = r[k] + beta * dir[k];
    }
    return z;
  }

  static double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  int p_;
};

struct Certificate {
  double primal = 0.0;
  double dual = 0.0;
};

Certificate certify(const FluxProblem& prob, const std::vector<double>& b,
                    const std::vector<double>& hx, const std::vector<double>& vy,
                    const std::vector<double>& phi) {
  std::vector<double> gx;
  std::vector<double> gy;

  // Dual: scale phi into the feasible set max_c |grad^T phi|_q <= 1.
  prob.difference(phi, gx, gy);
  double worst = 0.0;
  prob.for_each_cell(gx, gy, [&](double* h, double* v) {
    worst = std::max(worst, prob.dual_norm(h ? *h : 0.0, v ? *v : 0.0));
  });
  const double scale = worst > 1.0 ? 1.0 / worst : 1.0;
  Certificate c;
  c.dual = scale * FluxProblem::dot(phi, b);

  // Primal: project the flux onto the affine set div f = b.
  std::vector<double> residual;
  prob.divergence(hx, vy, residual);
  for (std::size_t k = 0; k < residual.size(); ++k) residual[k] = b[k] - residual[k];
  const std::vector<double> z = prob.solve_laplacian(std::move(residual));
  prob.difference(z, gx, gy);
  std::vector<double> fx = hx;
  std::vector<double> fy = vy;
  for (std::size_t k = 0; k < fx.size(); ++k) fx[k] += gx[k];
  for (std::size_t k = 0; k < fy.size(); ++k) fy[k] += gy[k];
  c.primal = prob.primal_cost(std::move(fx), std::move(fy));
  return c;
}

WassersteinResult primal_dual(std::size_t rows, std::size_t cols, const std::vector<double>& b,
                              double step, const WassersteinOptions& options) {
  const FluxProblem prob(rows, cols, options.p);
  WassersteinResult result;
  if (rows * cols == 1) return result;

  // tau * sigma * |div|^2 < 1 with |div|^2 <= 8 on a 4-connected grid.
  const double tau = 0.35;
  const double sigma = 0.35;
  constexpr std::size_t check_every = 50;

  std::vector<double> hx(prob.hsize(), 0.0);
  std::vector<double> vy(prob.vsize(), 0.0);
  std::vector<double> phi(prob.cells(), 0.0);
  std::vector<double> gx;
  std::vector<double> gy;
  std::vector<double> div;
  std::vector<double> prev_hx;
  std::vector<double> prev_vy;

  Certificate best{kInf, -kInf};
  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    prev_hx = hx;
    prev_vy = vy;
    prob.difference(phi, gx, gy);
    for (std::size_t k = 0; k < hx.size(); ++k) hx[k] += tau * gx[k];
    for (std::size_t k = 0; k < vy.size(); ++k) vy[k] += tau * gy[k];
    prob.shrink(hx, vy, tau);

    for (std::size_t k = 0; k < hx.size(); ++k) prev_hx[k] = 2.0 * hx[k] - prev_hx[k];
    for (std::size_t k = 0; k < vy.size(); ++k) prev_vy[k] = 2.0 * vy[k] - prev_vy[k];
    prob.divergence(prev_hx, prev_vy, div);
    for (std::size_t k = 0; k < phi.size(); ++k) phi[k] += sigma * (b[k] - div[k]);

    if (it % check_every == 0 || it == options.max_iterations) {
      const Certificate c = certify(prob, b, hx, vy, phi);
      best.primal = std::min(best.primal, c.primal);
      best.dual = std::max(best.dual, c.dual);
      result.iterations = it;
      if (step * (best.primal - best.dual) <= options.tol) break;
    }
  }

  result.distance = step * best.primal;
  result.lower_bound = step * best.dual;
  result.duality_gap = result.distance - result.lower_bound;
  if (result.duality_gap > options.tol) {
    std::ostringstream msg;
    msg.precision(3);
    msg << "p=" << options.p << " transport solver did not converge in " << result.iterations
        << " iterations; duality gap " << result.duality_gap << " > tol " << options.tol;
    fail(ErrorCategory::convergence, msg.str());
  }
  return result;
}

}  // namespace

WassersteinResult wasserstein_grid(const GridDistribution& rho0, const GridDistribution& rho1,
                                   const WassersteinOptions& options) {
  if (options.p != 1 && options.p != 2) {
    fail(ErrorCategory::invalid_argument, "Wasserstein p must be 1 or 2");
  }
  if (!(options.tol > 0.0)) fail(ErrorCategory::invalid_argument, "tolerance must be positive");
  std::vector<double> b = supply(rho0, rho1);
  if (options.p == 1 && !options.force_iterative) {
    GridFlow flow(rho0.rows(), rho0.cols(), rho0.step);
    return flow.solve(std::move(b));
  }
  return primal_dual(rho0.rows(), rho0.cols(), b, rho0.step, options);
}

DistanceMatrix wasserstein_matrix(const std::vector<GridDistribution>& items,
                                  const WassersteinOptions& options) {
  const std::size_t n = items.size();
  DistanceMatrix dm(n);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::vector<double> values(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t k) {
    values[k] = wasserstein_grid(items[pairs[k].first], items[pairs[k].second], options).distance;
  });
  for (std::size_t k = 0; k < pairs.size(); ++k) dm.set(pairs[k].first, pairs[k].second, values[k]);
  return dm;
}

}  // namespace htc
