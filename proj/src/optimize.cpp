#include "curvlab/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvlab/parallel.hpp"
#include "curvlab/rng.hpp"

namespace curvlab {

namespace {

constexpr double kSkip = std::numeric_limits<double>::infinity();

Eigen::MatrixXd tangent_project(const Eigen::MatrixXd& X, const Eigen::MatrixXd& G) {
  const Eigen::MatrixXd XtG = X.transpose() * G;
  return G - X * ((XtG + XtG.transpose()) / 2.0);
}

struct StartOutcome {
  double value = kSkip;
  Eigen::MatrixXd argmin;
  long evals = 0;
};

StartOutcome run_descent(const StiefelObjective& p, Eigen::MatrixXd X, long budget, double grad_tol,
                         int max_iters) {
  StartOutcome out;
  if (budget <= 0) return out;
  double f = p.value(X);
  ++out.evals;
  if (!std::isfinite(f)) return out;
  out.value = f;
  out.argmin = X;

  double step = 1.0;
  for (int iter = 0; iter < max_iters && out.evals < budget; ++iter) {
    const Eigen::MatrixXd G = tangent_project(X, p.gradient(X));
    const double gnorm2 = G.squaredNorm();
    if (gnorm2 <= grad_tol * grad_tol * (1.0 + f * f)) break;

    bool accepted = false;
    double t = step;
    for (int bt = 0; bt < 30 && out.evals < budget; ++bt) {
      const Eigen::MatrixXd Y = orthonormalize(X - t * G);
      const double fy = p.value(Y);
      ++out.evals;
      if (std::isfinite(fy) && fy <= f - 1e-4 * t * gnorm2) {
        X = Y;
        f = fy;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    step = std::min(t * 2.0, 1e3);
    if (f < out.value) {
      out.value = f;
      out.argmin = X;
    }
  }
  return out;
}

}  // namespace

StiefelResult minimize_multistart(const StiefelObjective& p, const MultistartOptions& opt,
                                  const std::vector<Eigen::MatrixXd>& canonical_starts) {
  // shrink the start count when the budget cannot feed every start usefully
  const int affordable = static_cast<int>(std::max<long>(1, opt.budget / 40));
  const int total = std::max<int>(std::min(opt.starts, affordable),
                                  static_cast<int>(canonical_starts.size()));
  const long per_start = std::max<long>(8, opt.budget / std::max(1, total));

  std::vector<StartOutcome> outcomes(static_cast<size_t>(total));
  auto run_one = [&](size_t s) {
    Eigen::MatrixXd X0;
    if (s < canonical_starts.size()) {
      X0 = canonical_starts[s];
    } else {
      Rng rng(derive_seed(opt.seed, 0x5f7a1c3b, s));
      X0 = rng.orthonormal_frame(p.n, p.k);
    }
    outcomes[s] = run_descent(p, std::move(X0), per_start, opt.grad_tol, opt.max_iters);
  };
  if (opt.parallel)
    parallel_for(static_cast<size_t>(total), run_one);
  else
    for (size_t s = 0; s < static_cast<size_t>(total); ++s) run_one(s);

  StiefelResult best;
  best.value = kSkip;
  for (const StartOutcome& o : outcomes) {
    best.evaluations += o.evals;
    if (o.value < best.value) {
      best.value = o.value;
      best.argmin = o.argmin;
    }
  }
  return best;
}

ZoomGridResult minimize_zoom_grid(int dim, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                  const std::function<double(const Eigen::VectorXd&)>& value,
                                  const ZoomGridOptions& opt) {
  struct Cell {
    Eigen::VectorXd center;
    double value;
  };

  ZoomGridResult result;
  result.value = kSkip;

  Eigen::VectorXd half = (hi - lo) / 2.0;
  std::vector<Cell> frontier;

  // level 0: dense product grid of cell centers, coarsened if the cube is
  // too large for the budget
  {
    int m = opt.initial_per_dim;
    auto grid_count = [&](int per_dim) {
      long total = 1;
      for (int d = 0; d < dim; ++d) {
        total *= per_dim;
        if (total > opt.budget) return opt.budget + 1;
      }
      return total;
    };
    while (m > 2 && grid_count(m) > std::max<long>(1, opt.budget / 2)) --m;
    const long total = grid_count(m);
    std::vector<Cell> cells(static_cast<size_t>(total));
    parallel_for(static_cast<size_t>(total), [&](size_t idx) {
      Eigen::VectorXd x(dim);
      size_t rem = idx;
      for (int d = 0; d < dim; ++d) {
        const int q = static_cast<int>(rem % static_cast<size_t>(m));
        rem /= static_cast<size_t>(m);
        x[d] = lo[d] + (hi[d] - lo[d]) * (q + 0.5) / m;
      }
      cells[idx] = {x, value(x)};
    });
    result.evaluations += total;
    frontier = std::move(cells);
    half /= m;
  }

  auto keep_best = [&](std::vector<Cell>& cells) {
    std::stable_sort(cells.begin(), cells.end(),
                     [](const Cell& a, const Cell& b) { return a.value < b.value; });
    if (static_cast<int>(cells.size()) > opt.top_k) cells.resize(static_cast<size_t>(opt.top_k));
  };
  keep_best(frontier);
  if (!frontier.empty() && frontier.front().value < result.value) {
    result.value = frontier.front().value;
    result.argmin = frontier.front().center;
  }

  for (int level = 0; level < opt.levels; ++level) {
    const long children_per_cell = 1L << dim;
    const long level_cost = children_per_cell * static_cast<long>(frontier.size());
    if (result.evaluations + level_cost > opt.budget) break;

    std::vector<Cell> next(static_cast<size_t>(level_cost));
    parallel_for(static_cast<size_t>(level_cost), [&](size_t idx) {
      const size_t cell_idx = idx / static_cast<size_t>(children_per_cell);
      size_t corner = idx % static_cast<size_t>(children_per_cell);
      Eigen::VectorXd x = frontier[cell_idx].center;
      for (int d = 0; d < dim; ++d) {
        x[d] += ((corner & 1) ? 0.5 : -0.5) * half[d];
        corner >>= 1;
      }
      next[idx] = {x, value(x)};
    });
    result.evaluations += level_cost;
    half /= 2.0;
    keep_best(next);
    if (next.empty()) break;
    if (next.front().value < result.value) {
      result.value = next.front().value;
      result.argmin = next.front().center;
    }
    frontier = std::move(next);
  }
  return result;
}

}  // namespace curvlab
