#pragma once

// Test-only reference implementations. Everything here recomputes results
// from first principles (loops, grids, finite differences) and stays
// independent of the library code paths it checks.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "admmnet/admm.hpp"
#include "admmnet/matrix.hpp"

namespace oracle {

using admmnet::Index;
using admmnet::Matrix;

inline double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * unit(rng);
}

inline Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols,
                            double lo = -1.0, double hi = 1.0) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = uniform(rng, lo, hi);
  }
  return m;
}

// Plain triple-loop product.
inline Matrix naive_matmul(const Matrix& a, const Matrix& b) {
  Matrix c = Matrix::Zero(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < b.cols(); ++j) {
      double acc = 0.0;
      for (Index k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      c(i, j) = acc;
    }
  }
  return c;
}

// ---------------------------------------------------------------------
// Slack projection oracles.

struct ProjCandidate {
  double x = 0, y = 0, z = 0, objective = 0;
};

// Lower-cut set {x + y = l, x <= l}: enumerate the two KKT cases (interior
// of the half-line, vertex) and keep the feasible candidate with the
// smaller objective.
inline ProjCandidate kkt_lower(double a, double b, double l) {
  std::vector<ProjCandidate> cands;
  const double x_line = 0.5 * (a - b + l);
  if (x_line <= l) {
    ProjCandidate c;
    c.x = x_line;
    c.y = l - x_line;
    c.objective = (c.x - a) * (c.x - a) + (c.y - b) * (c.y - b);
    cands.push_back(c);
  }
  {
    ProjCandidate c;
    c.x = l;
    c.y = 0.0;
    c.objective = (c.x - a) * (c.x - a) + (c.y - b) * (c.y - b);
    cands.push_back(c);
  }
  ProjCandidate best = cands.front();
  for (const auto& c : cands) {
    if (c.objective < best.objective) best = c;
  }
  return best;
}

// Upper-cut set {x + z = u, x >= u}.
inline ProjCandidate kkt_upper(double a, double c_target, double u) {
  std::vector<ProjCandidate> cands;
  const double x_line = 0.5 * (a - c_target + u);
  if (x_line >= u) {
    ProjCandidate c;
    c.x = x_line;
    c.z = u - x_line;
    c.objective = (c.x - a) * (c.x - a) + (c.z - c_target) * (c.z - c_target);
    cands.push_back(c);
  }
  {
    ProjCandidate c;
    c.x = u;
    c.z = 0.0;
    c.objective = (c.x - a) * (c.x - a) + (c.z - c_target) * (c.z - c_target);
    cands.push_back(c);
  }
  ProjCandidate best = cands.front();
  for (const auto& c : cands) {
    if (c.objective < best.objective) best = c;
  }
  return best;
}

// Dense search along the constraint line x + y = l (x <= l).
inline ProjCandidate grid_lower(double a, double b, double l, double span,
                                double step) {
  ProjCandidate best;
  best.objective = std::numeric_limits<double>::infinity();
  for (double x = l - span; x <= l + 0.5 * step; x += step) {
    const double xx = std::min(x, l);
    const double y = l - xx;
    const double obj = (xx - a) * (xx - a) + (y - b) * (y - b);
    if (obj < best.objective) {
      best.x = xx;
      best.y = y;
      best.objective = obj;
    }
  }
  return best;
}

inline ProjCandidate grid_upper(double a, double c_target, double u,
                                double span, double step) {
  ProjCandidate best;
  best.objective = std::numeric_limits<double>::infinity();
  for (double x = u; x <= u + span; x += step) {
    const double z = u - x;
    const double obj =
        (x - a) * (x - a) + (z - c_target) * (z - c_target);
    if (obj < best.objective) {
      best.x = x;
      best.z = z;
      best.objective = obj;
    }
  }
  return best;
}

inline ProjCandidate grid_interior(double a, double l, double u, double span,
                                   double step) {
  ProjCandidate best;
  best.objective = std::numeric_limits<double>::infinity();
  const double hi = std::isfinite(u) ? u : a + span;
  for (double x = l; x <= hi + 0.5 * step; x += step) {
    const double xx = std::isfinite(u) ? std::min(x, u) : x;
    const double obj = (xx - a) * (xx - a);
    if (obj < best.objective) {
      best.x = xx;
      best.objective = obj;
    }
  }
  return best;
}

inline Matrix random_matrix_batch_inputs(std::mt19937_64& rng, Index m,
                                         Index n) {
  return random_matrix(rng, m, n, 0.0, 1.0);
}

// ---------------------------------------------------------------------
// Inner augmented Lagrangian of one hidden layer, written out term by
// term. `fix` bundles everything held constant during the (X,Y,Z) solve.

struct InnerFix {
  Matrix a;        // S_{i-1} W_i + e b_i
  Matrix lambda;   // Lambda_i
  Matrix x_next;   // updated X_{i+1}
  Matrix lam_next; // updated Lambda_{i+1}
  Matrix w_next;
  Matrix b_next;
  Matrix xc, yc, zc;
  Matrix gx, gy, gz;
  double rho = 0, rho_next = 0, beta = 0;
  bool with_z = true;
};

inline double inner_lagrangian(const InnerFix& f, const Matrix& x,
                               const Matrix& y, const Matrix& z) {
  Matrix s = x + y;
  if (f.with_z) s += z;
  Matrix r_next = f.x_next - s * f.w_next;
  r_next.rowwise() -= f.b_next.row(0);
  const Matrix r_self = x - f.a;
  double v = 0.5 * f.rho_next * r_next.squaredNorm() +
             f.lam_next.cwiseProduct(r_next).sum();
  v += 0.5 * f.rho * r_self.squaredNorm() + f.lambda.cwiseProduct(r_self).sum();
  v += 0.5 * f.beta * (x - f.xc).squaredNorm() +
       f.gx.cwiseProduct(x - f.xc).sum();
  v += 0.5 * f.beta * (y - f.yc).squaredNorm() +
       f.gy.cwiseProduct(y - f.yc).sum();
  if (f.with_z) {
    v += 0.5 * f.beta * (z - f.zc).squaredNorm() +
         f.gz.cwiseProduct(z - f.zc).sum();
  }
  return v;
}

struct InnerGrad {
  Matrix x, y, z;
};

inline InnerGrad inner_lagrangian_grad(const InnerFix& f, const Matrix& x,
                                       const Matrix& y, const Matrix& z) {
  Matrix s = x + y;
  if (f.with_z) s += z;
  Matrix r_next = s * f.w_next - f.x_next;
  r_next.rowwise() += f.b_next.row(0);
  const Matrix q =
      (f.rho_next * r_next - f.lam_next) * f.w_next.transpose();
  InnerGrad g;
  g.x = q + f.rho * (x - f.a) + f.lambda + f.beta * (x - f.xc) + f.gx;
  g.y = q + f.beta * (y - f.yc) + f.gy;
  if (f.with_z) g.z = q + f.beta * (z - f.zc) + f.gz;
  return g;
}

inline Matrix slack_sum(const admmnet::LayerState& st) {
  Matrix s = st.slack.x + st.slack.y;
  if (st.slack.z.size() != 0) s += st.slack.z;
  return s;
}

// Fills the oracle view of one hidden layer's inner Lagrangian from live
// trainer state.
inline InnerFix make_fix(int layer,
                         const std::vector<admmnet::LayerState>& states,
                         const admmnet::NetworkWeights& weights,
                         const Matrix& d, const admmnet::HyperParams& hyper) {
  InnerFix f;
  const Matrix prev = layer == 0 ? d : slack_sum(states[layer - 1]);
  f.a = admmnet::row_broadcast_add(admmnet::matmul(prev, weights.w[layer]),
                                   weights.b[layer]);
  f.lambda = states[layer].lambda;
  f.x_next = states[layer + 1].slack.x;
  f.lam_next = states[layer + 1].lambda;
  f.w_next = weights.w[layer + 1];
  f.b_next = weights.b[layer + 1];
  f.xc = states[layer].aux.x;
  f.yc = states[layer].aux.y;
  f.gx = states[layer].gamma_x;
  f.gy = states[layer].gamma_y;
  f.rho = hyper.rho[layer];
  f.rho_next = hyper.rho[layer + 1];
  f.beta = hyper.beta[layer];
  f.with_z = hyper.cutoffs.has_upper();
  if (f.with_z) {
    f.zc = states[layer].aux.z;
    f.gz = states[layer].gamma_z;
  } else {
    f.zc = Matrix::Zero(f.xc.rows(), f.xc.cols());
    f.gz = f.zc;
  }
  return f;
}

// Central finite difference of a scalar function of one matrix entry.
inline double central_diff(const std::function<double(const Matrix&)>& fn,
                           Matrix point, Index i, Index j, double h) {
  point(i, j) += h;
  const double up = fn(point);
  point(i, j) -= 2.0 * h;
  const double down = fn(point);
  return (up - down) / (2.0 * h);
}

// Scalar-by-scalar Adam recursion.
struct ScalarAdam {
  double m = 0, v = 0;
  long t = 0;
  double update(double g, double step, double b1, double b2, double eps) {
    ++t;
    m = b1 * m + (1 - b1) * g;
    v = b2 * v + (1 - b2) * g * g;
    const double mh = m / (1 - std::pow(b1, t));
    const double vh = v / (1 - std::pow(b2, t));
    return step * mh / (std::sqrt(vh) + eps);
  }
};

}  // namespace oracle
