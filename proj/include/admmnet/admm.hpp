#pragma once

#include <utility>
#include <vector>

#include "admmnet/activation.hpp"
#include "admmnet/dataset.hpp"
#include "admmnet/history.hpp"
#include "admmnet/network.hpp"

namespace admmnet {

// Penalty weights and model choices of the two-level ADMM trainer. rho[i]
// and beta[i] act as layer-oriented learning rates; beta has one entry per
// hidden layer (the top layer carries no indicator block).
struct HyperParams {
  std::vector<double> rho;
  std::vector<double> beta;
  Cutoffs cutoffs;
  double lambda_reg = 0.1;
  double surrogate_c = 0.05;  // curvature of the top-layer quadratic model
  Activation activation = Activation::kRelu;
  // Keep multipliers across outer iterations of the same minibatch instead
  // of zeroing them each time. Off by default.
  bool persist_duals = false;

  // Throws std::invalid_argument listing every violated constraint.
  void validate(int depth) const;
};

// Per-layer ADMM state over one minibatch. Hidden layers carry the full
// slack/aux/multiplier set; the top layer uses only slack.x and lambda.
// Without an upper cutoff the z-related matrices stay empty.
struct LayerState {
  SlackTriple slack;
  SlackTriple aux;
  CutoffMasks masks;
  Matrix lambda;
  Matrix gamma_x, gamma_y, gamma_z;
};

struct DualTriple {
  Matrix x, y, z;
};

// Forward pass that seeds the sweep: slacks and masks from decompose(),
// aux copies of the slacks, all multipliers zero.
std::vector<LayerState> forward_init(const NetworkWeights& weights,
                                     const Batch& batch,
                                     const HyperParams& hyper);

// (rho/2) |R|_F^2 + <lambda, R> with R = x_next - prev_sum*w - e*b.
// Diagnostic/test helper.
double penalty_eval(const Matrix& prev_sum, const Matrix& x_next,
                    const Matrix& w, const Matrix& b, const Matrix& lambda,
                    double rho);

// Exact minimizer of the inner augmented Lagrangian in (X_i, Y_i, Z_i)
// with everything else fixed. Layer i+1 must already hold its updated
// slack.x and lambda; weights are the pre-sweep ones.
SlackTriple solve_xyz_block(int layer, const std::vector<LayerState>& states,
                            const NetworkWeights& weights, const Matrix& d,
                            const HyperParams& hyper);

// Gamma^new = beta * (updated - aux), component-wise.
DualTriple inner_dual_update(const SlackTriple& updated, const SlackTriple& aux,
                             double beta);

// One single-pass inner ADMM round on layer i: block solve, dual step,
// projection of the completed-square targets, then slack <- aux.
void update_xyz_layer(int layer, std::vector<LayerState>& states,
                      const NetworkWeights& weights, const Matrix& d,
                      const HyperParams& hyper);

// Lambda_i = rho_i * (X_i - prev_sum*W_i - e*b_i), with the pre-sweep
// weights and the layer-(i-1) slacks still at their forward values.
Matrix outer_dual_update(int layer, const std::vector<LayerState>& states,
                         const NetworkWeights& weights, const Matrix& d,
                         const HyperParams& hyper);

// Ridge solve for layer i's weights against the updated slack and
// multiplier: (rho*Sa'Sa + lambda*I) theta = Sa'(rho*X + Lambda) with
// Sa = [prev_sum | e]. Returns (W, b).
std::pair<Matrix, Matrix> solve_wb(int layer,
                                   const std::vector<LayerState>& states,
                                   const Matrix& d, const HyperParams& hyper);

// Closed-form top-layer update under the local quadratic model of the
// cross-entropy: X = (c*x_hat - G + rho_N*a - lambda) / (c + rho_N) with
// G = softmax(x_hat) - O.
Matrix solve_xn(const Matrix& x_hat, const Matrix& a, const Matrix& lambda,
                const HyperParams& hyper, const Matrix& o);

struct StepDiagnostics {
  // |X_i - S_{i-1} W_i - e b_i|_F per layer, with committed weights.
  std::vector<double> constraint_residuals;
  double cross_entropy = 0.0;  // per-sample batch cross-entropy
};

struct StepResult {
  NetworkWeights weights;
  StepDiagnostics diag;
};

// One full outer iteration on a minibatch: forward init, backward sweep
// over layers N..1, weight commit after the sweep. carried_duals, when
// given together with hyper.persist_duals, seeds and receives the
// per-layer multipliers of this batch.
StepResult admm_minibatch_step(const NetworkWeights& weights,
                               const Batch& batch, const HyperParams& hyper,
                               std::vector<Matrix>* carried_duals = nullptr,
                               bool want_diagnostics = true);

// Minibatch training over the partitioned dataset with per-epoch history.
TrainResult admm_train(const Dataset& data, const NetworkWeights& init,
                       const HyperParams& hyper,
                       const TrainSchedule& schedule);

}  // namespace admmnet
