#pragma once

#include <vector>

#include "admmnet/activation.hpp"
#include "admmnet/dataset.hpp"
#include "admmnet/history.hpp"
#include "admmnet/network.hpp"

namespace admmnet {

// Layer activations V_0..V_N with V_0 = D, V_i = dcutlu(V_{i-1}W_i + e b_i)
// for hidden layers and an affine top layer.
std::vector<Matrix> forward(const NetworkWeights& weights, const Matrix& d,
                            const Cutoffs& cut, Activation act);

struct Gradients {
  std::vector<Matrix> w;
  std::vector<Matrix> b;
};

// Exact gradients of [softmax cross-entropy summed over the batch
// + sum_i (lambda/2)(|W_i|^2 + |b_i|^2)]. The activation subgradient at
// both cutoff kinks is taken as 0.
Gradients backprop(const NetworkWeights& weights, const Batch& batch,
                   const Cutoffs& cut, Activation act, double lambda_reg);

void sgd_step(NetworkWeights& weights, const Gradients& grads, double lr);

struct AdamParams {
  double step = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  std::vector<Matrix> m_w, v_w, m_b, v_b;
  long step_count = 0;

  static AdamState like(const NetworkWeights& weights);
};

void adam_step(AdamState& state, NetworkWeights& weights,
               const Gradients& grads, const AdamParams& params);

struct BaselineConfig {
  enum class Kind { kSgd, kAdam };
  Kind kind = Kind::kSgd;
  double sgd_lr = 0.3;
  AdamParams adam;
  Cutoffs cutoffs;
  Activation activation = Activation::kRelu;
  double lambda_reg = 0.1;
};

// Per-sample average cross-entropy and top-1 accuracy, computed in row
// chunks to bound the transient memory of the forward pass.
struct EvalResult {
  double ce = 0.0;
  double accuracy = 0.0;
};
EvalResult evaluate(const NetworkWeights& weights, const Batch& batch,
                    const Cutoffs& cut, Activation act, Index chunk = 10000);

// Minibatch training with the same history schema as the ADMM trainer.
// Steps use the batch-averaged gradient (the summed objective scaled by
// 1/m), which keeps the learning rate meaningful across batch sizes.
TrainResult train_baseline(const Dataset& data, const NetworkWeights& init,
                           const BaselineConfig& config,
                           const TrainSchedule& schedule);

}  // namespace admmnet
