#include "admmnet/baseline.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "admmnet/loss.hpp"

namespace admmnet {

std::vector<Matrix> forward(const NetworkWeights& weights, const Matrix& d,
                            const Cutoffs& cut, Activation act) {
  weights.validate();
  cut.validate();
  if (d.cols() != weights.w.front().rows()) {
    throw std::invalid_argument("forward: input has " +
                                std::to_string(d.cols()) + " columns, network expects " +
                                std::to_string(weights.w.front().rows()));
  }
  const int n = weights.depth();
  std::vector<Matrix> v;
  v.reserve(n + 1);
  v.push_back(d);
  for (int i = 0; i < n; ++i) {
    Matrix p = row_broadcast_add(matmul(v.back(), weights.w[i]), weights.b[i]);
    v.push_back(i + 1 < n ? dcutlu(p, cut) : std::move(p));
  }
  return v;
}

Gradients backprop(const NetworkWeights& weights, const Batch& batch,
                   const Cutoffs& cut, Activation act, double lambda_reg) {
  weights.validate();
  cut.validate();
  const int n = weights.depth();
  const Index m = batch.samples();

  // Forward pass keeping pre-activations for the derivative masks.
  std::vector<Matrix> v(n + 1);
  std::vector<Matrix> pre(n);
  v[0] = batch.d;
  for (int i = 0; i < n; ++i) {
    pre[i] = row_broadcast_add(matmul(v[i], weights.w[i]), weights.b[i]);
    v[i + 1] = i + 1 < n ? dcutlu(pre[i], cut) : pre[i];
  }

  Gradients g;
  g.w.resize(n);
  g.b.resize(n);
  Matrix delta = softmax_cross_entropy(v[n], batch.o).grad;
  for (int i = n - 1; i >= 0; --i) {
    g.w[i].noalias() = v[i].transpose() * delta;
    g.w[i] += lambda_reg * weights.w[i];
    g.b[i] = delta.colwise().sum();
    g.b[i] += lambda_reg * weights.b[i];
    if (i > 0) {
      Matrix back;
      back.noalias() = delta * weights.w[i].transpose();
      // DCutLU derivative: 1 strictly inside (l,u), 0 elsewhere including
      // both kinks.
      const auto inside = (pre[i - 1].array() > cut.lower) &&
                          (pre[i - 1].array() < cut.upper);
      delta = (back.array() * inside.cast<double>()).matrix();
    }
  }
  (void)m;
  return g;
}

void sgd_step(NetworkWeights& weights, const Gradients& grads, double lr) {
  for (int i = 0; i < weights.depth(); ++i) {
    weights.w[i] -= lr * grads.w[i];
    weights.b[i] -= lr * grads.b[i];
  }
}

AdamState AdamState::like(const NetworkWeights& weights) {
  AdamState s;
  for (int i = 0; i < weights.depth(); ++i) {
    s.m_w.push_back(Matrix::Zero(weights.w[i].rows(), weights.w[i].cols()));
    s.v_w.push_back(Matrix::Zero(weights.w[i].rows(), weights.w[i].cols()));
    s.m_b.push_back(Matrix::Zero(1, weights.b[i].cols()));
    s.v_b.push_back(Matrix::Zero(1, weights.b[i].cols()));
  }
  return s;
}

namespace {

void adam_update(Matrix& param, Matrix& m, Matrix& v, const Matrix& g,
                 const AdamParams& p, double bc1, double bc2) {
  m = p.beta1 * m + (1.0 - p.beta1) * g;
  v = p.beta2 * v + (1.0 - p.beta2) * g.cwiseProduct(g);
  const Matrix m_hat = m / bc1;
  const Matrix v_hat = v / bc2;
  param.array() -=
      p.step * m_hat.array() / (v_hat.array().sqrt() + p.epsilon);
}

}  // namespace

void adam_step(AdamState& state, NetworkWeights& weights,
               const Gradients& grads, const AdamParams& params) {
  ++state.step_count;
  const double bc1 = 1.0 - std::pow(params.beta1, state.step_count);
  const double bc2 = 1.0 - std::pow(params.beta2, state.step_count);
  for (int i = 0; i < weights.depth(); ++i) {
    adam_update(weights.w[i], state.m_w[i], state.v_w[i], grads.w[i], params,
                bc1, bc2);
    adam_update(weights.b[i], state.m_b[i], state.v_b[i], grads.b[i], params,
                bc1, bc2);
  }
}

EvalResult evaluate(const NetworkWeights& weights, const Batch& batch,
                    const Cutoffs& cut, Activation act, Index chunk) {
  const Index m = batch.samples();
  double ce_sum = 0.0;
  Index correct = 0;
  for (Index start = 0; start < m; start += chunk) {
    const Index size = std::min(chunk, m - start);
    const Matrix d = batch.d.middleRows(start, size);
    const Matrix o = batch.o.middleRows(start, size);
    const Matrix logits = forward(weights, d, cut, act).back();
    ce_sum += softmax_cross_entropy(logits, o).value;
    for (Index q = 0; q < size; ++q) {
      Index pred, truth;
      logits.row(q).maxCoeff(&pred);
      o.row(q).maxCoeff(&truth);
      if (pred == truth) ++correct;
    }
  }
  EvalResult r;
  r.ce = ce_sum / static_cast<double>(m);
  r.accuracy = static_cast<double>(correct) / static_cast<double>(m);
  return r;
}

TrainResult train_baseline(const Dataset& data, const NetworkWeights& init,
                           const BaselineConfig& config,
                           const TrainSchedule& schedule) {
  init.validate();
  config.cutoffs.validate();
  const auto batches =
      partition(data.train, schedule.batch_size, schedule.seed, schedule.shuffle);

  TrainResult result;
  result.weights = init;
  AdamState adam = AdamState::like(init);
  for (int epoch = 0; epoch < schedule.epochs; ++epoch) {
    double secs = 0.0;
    for (const Batch& batch : batches) {
      const auto t0 = std::chrono::steady_clock::now();
      Gradients g = backprop(result.weights, batch, config.cutoffs,
                             config.activation, config.lambda_reg);
      const double inv_m = 1.0 / static_cast<double>(batch.samples());
      for (std::size_t i = 0; i < g.w.size(); ++i) {
        g.w[i] *= inv_m;
        g.b[i] *= inv_m;
      }
      if (config.kind == BaselineConfig::Kind::kSgd) {
        sgd_step(result.weights, g, config.sgd_lr);
      } else {
        adam_step(adam, result.weights, g, config.adam);
      }
      secs += std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            t0)
                  .count();
    }

    EpochStats row;
    row.epoch = epoch;
    const EvalResult train_eval = evaluate(result.weights, data.train,
                                           config.cutoffs, config.activation);
    const EvalResult test_eval = evaluate(result.weights, data.test,
                                          config.cutoffs, config.activation);
    row.train_ce = train_eval.ce;
    row.train_acc = train_eval.accuracy;
    row.test_ce = test_eval.ce;
    row.test_acc = test_eval.accuracy;
    row.secs_per_minibatch = secs / static_cast<double>(batches.size());
    result.history.push_back(row);

    if (schedule.stop_train_ce && row.train_ce <= *schedule.stop_train_ce) break;
    if (schedule.stop_test_acc && row.test_acc >= *schedule.stop_test_acc) break;
  }
  return result;
}

}  // namespace admmnet
