#include "admmnet/admm.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "admmnet/baseline.hpp"
#include "admmnet/loss.hpp"

namespace admmnet {

void HyperParams::validate(int depth) const {
  std::vector<std::string> errors;
  if (static_cast<int>(rho.size()) != depth) {
    errors.push_back("rho must have one entry per layer (" +
                     std::to_string(depth) + "), got " +
                     std::to_string(rho.size()));
  }
  if (static_cast<int>(beta.size()) != depth - 1) {
    errors.push_back("beta must have one entry per hidden layer (" +
                     std::to_string(depth - 1) + "), got " +
                     std::to_string(beta.size()));
  }
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!(rho[i] > 0.0)) {
      errors.push_back("rho[" + std::to_string(i + 1) + "] must be positive");
    }
  }
  for (std::size_t i = 0; i < beta.size(); ++i) {
    if (!(beta[i] > 0.0)) {
      errors.push_back("beta[" + std::to_string(i + 1) + "] must be positive");
    }
  }
  if (!(lambda_reg >= 0.0)) errors.push_back("lambda must be nonnegative");
  if (!(surrogate_c > 0.0)) errors.push_back("surrogate coefficient must be positive");
  if (!std::isfinite(cutoffs.lower) || !(cutoffs.lower < cutoffs.upper)) {
    errors.push_back("cutoffs must satisfy lower < upper with finite lower");
  }
  if (activation == Activation::kRelu &&
      (cutoffs.lower != 0.0 || cutoffs.has_upper())) {
    errors.push_back("relu activation requires cutoffs (0, +inf)");
  }
  if (!errors.empty()) {
    std::ostringstream os;
    os << "hyperparams:";
    for (const std::string& e : errors) os << " " << e << ";";
    throw std::invalid_argument(os.str());
  }
}

namespace {

// Sum X+Y(+Z) of the given layer's slacks; layer -1 is the input block.
Matrix layer_sum(const std::vector<LayerState>& states, const Matrix& d,
                 int layer) {
  if (layer < 0) return d;
  const SlackTriple& s = states[layer].slack;
  Matrix sum = s.x + s.y;
  if (s.z.size() != 0) sum += s.z;
  return sum;
}

Matrix affine(const Matrix& input, const Matrix& w, const Matrix& b) {
  return row_broadcast_add(matmul(input, w), b);
}

void check_hidden_layer(int layer, int depth, const char* op) {
  if (layer < 0 || layer >= depth - 1) {
    throw std::invalid_argument(std::string(op) + ": layer " +
                                std::to_string(layer) +
                                " is not a hidden layer");
  }
}

// Core of solve_xyz_block with the forward affine term A_i precomputed.
SlackTriple solve_xyz_core(int layer, const std::vector<LayerState>& states,
                           const NetworkWeights& weights, const Matrix& a,
                           const HyperParams& hyper) {
  const LayerState& st = states[layer];
  const LayerState& next = states[layer + 1];
  const Matrix& w_next = weights.w[layer + 1];
  const Matrix& b_next = weights.b[layer + 1];
  const double rho = hyper.rho[layer];
  const double rho_next = hyper.rho[layer + 1];
  const double beta = hyper.beta[layer];
  const bool with_z = hyper.cutoffs.has_upper();

  // Coupling with layer i+1 enters every block gradient through the same
  // matrix Q = rho'*(S W' + e b' - X')W'^T - Lambda' W'^T, S = X+Y+Z.
  // Stationarity gives X = (Cx - Q)/(rho+beta), Y = (Cy - Q)/beta,
  // Z = (Cz - Q)/beta; substituting S turns this into one SPD system
  // S (I + kappa*rho' W'W'^T) = C0 + kappa*T.
  Matrix shifted = next.slack.x;
  shifted.rowwise() -= b_next.row(0);
  Matrix t;
  t.noalias() = (rho_next * shifted + next.lambda) * w_next.transpose();

  Matrix cx = rho * a - st.lambda + beta * st.aux.x - st.gamma_x;
  Matrix cy = beta * st.aux.y - st.gamma_y;
  const double kappa = 1.0 / (rho + beta) + (with_z ? 2.0 : 1.0) / beta;

  Matrix c0 = cx / (rho + beta) + cy / beta;
  Matrix cz;
  if (with_z) {
    cz = beta * st.aux.z - st.gamma_z;
    c0 += cz / beta;
  }

  const Index n_i = w_next.rows();
  Matrix system = Matrix::Identity(n_i, n_i);
  system.noalias() += (kappa * rho_next) * (w_next * w_next.transpose());
  Matrix b_rhs = c0 + kappa * t;
  Matrix s = spd_solve(system, b_rhs.transpose()).transpose();

  // Recover Q from the solved system instead of re-multiplying by W'W'^T.
  Matrix q = (b_rhs - s) / kappa - t;

  SlackTriple out;
  out.x = (cx - q) / (rho + beta);
  out.y = (cy - q) / beta;
  if (with_z) out.z = (cz - q) / beta;
  return out;
}

void update_xyz_core(int layer, std::vector<LayerState>& states,
                     const NetworkWeights& weights, const Matrix& a,
                     const HyperParams& hyper) {
  LayerState& st = states[layer];
  const double beta = hyper.beta[layer];
  const bool with_z = hyper.cutoffs.has_upper();

  const SlackTriple cand = solve_xyz_core(layer, states, weights, a, hyper);
  DualTriple gamma = inner_dual_update(cand, st.aux, beta);

  const Matrix target_x = cand.x + gamma.x / beta;
  const Matrix target_y = cand.y + gamma.y / beta;
  Matrix target_z;
  if (with_z) target_z = cand.z + gamma.z / beta;

  st.aux = project_slack(target_x, target_y, target_z, st.masks, hyper.cutoffs);
  st.slack = st.aux;
  st.gamma_x = std::move(gamma.x);
  st.gamma_y = std::move(gamma.y);
  if (with_z) st.gamma_z = std::move(gamma.z);
}

std::pair<Matrix, Matrix> solve_wb_core(const LayerState& st,
                                        const Matrix& prev_sum,
                                        const HyperParams& hyper, int layer) {
  const double rho = hyper.rho[layer];
  const double lambda = hyper.lambda_reg;
  const Index m = prev_sum.rows();
  const Index k = prev_sum.cols();

  Matrix sa(m, k + 1);
  sa.leftCols(k) = prev_sum;
  sa.col(k).setOnes();

  Matrix gram = Matrix::Zero(k + 1, k + 1);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(sa.transpose(), rho);
  gram = gram.selfadjointView<Eigen::Lower>();
  gram.diagonal().array() += lambda;

  Matrix rhs;
  rhs.noalias() = sa.transpose() * (rho * st.slack.x + st.lambda);

  Matrix theta;
  try {
    theta = spd_solve(gram, rhs);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(
        std::string("solve_wb: normal equations not positive definite "
                    "(rank-deficient inputs with lambda = 0): ") +
        e.what());
  }
  return {theta.topRows(k), theta.bottomRows(1)};
}

}  // namespace

std::vector<LayerState> forward_init(const NetworkWeights& weights,
                                     const Batch& batch,
                                     const HyperParams& hyper) {
  weights.validate();
  const int n = weights.depth();
  hyper.validate(n);
  if (batch.d.cols() != weights.w.front().rows()) {
    throw std::invalid_argument("forward_init: input has " +
                                std::to_string(batch.d.cols()) +
                                " columns, network expects " +
                                std::to_string(weights.w.front().rows()));
  }
  const Index m = batch.d.rows();
  const bool with_z = hyper.cutoffs.has_upper();

  std::vector<LayerState> states(n);
  Matrix sum = batch.d;
  for (int i = 0; i + 1 < n; ++i) {
    LayerState& st = states[i];
    const Matrix p = affine(sum, weights.w[i], weights.b[i]);
    auto [slack, masks] = decompose(p, hyper.cutoffs);
    if (!with_z) slack.z = Matrix();  // upper-cutoff logic elided
    st.slack = std::move(slack);
    st.masks = std::move(masks);
    st.aux = st.slack;
    const Index cols = st.slack.x.cols();
    st.lambda = Matrix::Zero(m, cols);
    st.gamma_x = Matrix::Zero(m, cols);
    st.gamma_y = Matrix::Zero(m, cols);
    if (with_z) st.gamma_z = Matrix::Zero(m, cols);
    sum = st.slack.x + st.slack.y;
    if (with_z) sum += st.slack.z;
  }
  states[n - 1].slack.x = affine(sum, weights.w[n - 1], weights.b[n - 1]);
  states[n - 1].lambda = Matrix::Zero(m, states[n - 1].slack.x.cols());
  return states;
}

double penalty_eval(const Matrix& prev_sum, const Matrix& x_next,
                    const Matrix& w, const Matrix& b, const Matrix& lambda,
                    double rho) {
  const Matrix r = x_next - affine(prev_sum, w, b);
  if (r.rows() != lambda.rows() || r.cols() != lambda.cols()) {
    throw std::invalid_argument("penalty_eval: multiplier shape mismatch (" +
                                shape_str(lambda) + " vs residual " +
                                shape_str(r) + ")");
  }
  return 0.5 * rho * r.squaredNorm() + frob_inner(lambda, r);
}

SlackTriple solve_xyz_block(int layer, const std::vector<LayerState>& states,
                            const NetworkWeights& weights, const Matrix& d,
                            const HyperParams& hyper) {
  hyper.validate(weights.depth());
  check_hidden_layer(layer, weights.depth(), "solve_xyz_block");
  const Matrix a =
      affine(layer_sum(states, d, layer - 1), weights.w[layer], weights.b[layer]);
  return solve_xyz_core(layer, states, weights, a, hyper);
}

DualTriple inner_dual_update(const SlackTriple& updated, const SlackTriple& aux,
                             double beta) {
  DualTriple g;
  g.x = beta * (updated.x - aux.x);
  g.y = beta * (updated.y - aux.y);
  if (updated.z.size() != 0) g.z = beta * (updated.z - aux.z);
  return g;
}

void update_xyz_layer(int layer, std::vector<LayerState>& states,
                      const NetworkWeights& weights, const Matrix& d,
                      const HyperParams& hyper) {
  hyper.validate(weights.depth());
  check_hidden_layer(layer, weights.depth(), "update_xyz_layer");
  const Matrix a =
      affine(layer_sum(states, d, layer - 1), weights.w[layer], weights.b[layer]);
  update_xyz_core(layer, states, weights, a, hyper);
}

Matrix outer_dual_update(int layer, const std::vector<LayerState>& states,
                         const NetworkWeights& weights, const Matrix& d,
                         const HyperParams& hyper) {
  hyper.validate(weights.depth());
  const Matrix a =
      affine(layer_sum(states, d, layer - 1), weights.w[layer], weights.b[layer]);
  return hyper.rho[layer] * (states[layer].slack.x - a);
}

std::pair<Matrix, Matrix> solve_wb(int layer,
                                   const std::vector<LayerState>& states,
                                   const Matrix& d, const HyperParams& hyper) {
  hyper.validate(static_cast<int>(states.size()));
  return solve_wb_core(states[layer], layer_sum(states, d, layer - 1), hyper,
                       layer);
}

Matrix solve_xn(const Matrix& x_hat, const Matrix& a, const Matrix& lambda,
                const HyperParams& hyper, const Matrix& o) {
  const double c = hyper.surrogate_c;
  const double rho_n = hyper.rho.back();
  const Matrix g = softmax_cross_entropy(x_hat, o).grad;
  return (c * x_hat - g + rho_n * a - lambda) / (c + rho_n);
}

StepResult admm_minibatch_step(const NetworkWeights& weights,
                               const Batch& batch, const HyperParams& hyper,
                               std::vector<Matrix>* carried_duals,
                               bool want_diagnostics) {
  const int n = weights.depth();
  hyper.validate(n);
  if (batch.o.cols() != weights.w.back().cols()) {
    throw std::invalid_argument("admm_minibatch_step: target has " +
                                std::to_string(batch.o.cols()) +
                                " columns, network emits " +
                                std::to_string(weights.w.back().cols()));
  }

  std::vector<LayerState> states = forward_init(weights, batch, hyper);
  if (hyper.persist_duals && carried_duals &&
      carried_duals->size() == static_cast<std::size_t>(n)) {
    for (int i = 0; i < n; ++i) {
      if ((*carried_duals)[i].rows() == states[i].lambda.rows() &&
          (*carried_duals)[i].cols() == states[i].lambda.cols()) {
        states[i].lambda = (*carried_duals)[i];
      }
    }
  }

  // Backward sweep: new weights are staged and only committed afterwards,
  // so every layer i uses the pre-sweep (W_{i+1}, b_{i+1}).
  NetworkWeights staged = weights;
  for (int layer = n - 1; layer >= 0; --layer) {
    const Matrix prev_sum = layer_sum(states, batch.d, layer - 1);
    const Matrix a = affine(prev_sum, weights.w[layer], weights.b[layer]);
    if (layer == n - 1) {
      states[layer].slack.x =
          solve_xn(states[layer].slack.x, a, states[layer].lambda, hyper,
                   batch.o);
    } else {
      update_xyz_core(layer, states, weights, a, hyper);
    }
    states[layer].lambda = hyper.rho[layer] * (states[layer].slack.x - a);
    auto [w_new, b_new] = solve_wb_core(states[layer], prev_sum, hyper, layer);
    staged.w[layer] = std::move(w_new);
    staged.b[layer] = std::move(b_new);
  }

  StepResult result;
  result.weights = std::move(staged);

  if (hyper.persist_duals && carried_duals) {
    carried_duals->resize(n);
    for (int i = 0; i < n; ++i) (*carried_duals)[i] = states[i].lambda;
  }

  if (want_diagnostics) {
    for (int layer = 0; layer < n; ++layer) {
      const Matrix a = affine(layer_sum(states, batch.d, layer - 1),
                              result.weights.w[layer], result.weights.b[layer]);
      result.diag.constraint_residuals.push_back(
          (states[layer].slack.x - a).norm());
    }
    const Matrix logits =
        forward(result.weights, batch.d, hyper.cutoffs, hyper.activation)
            .back();
    result.diag.cross_entropy = softmax_cross_entropy(logits, batch.o).value /
                                static_cast<double>(batch.samples());
  }
  return result;
}

TrainResult admm_train(const Dataset& data, const NetworkWeights& init,
                       const HyperParams& hyper,
                       const TrainSchedule& schedule) {
  init.validate();
  hyper.validate(init.depth());
  const auto batches =
      partition(data.train, schedule.batch_size, schedule.seed, schedule.shuffle);

  TrainResult result;
  result.weights = init;
  std::vector<std::vector<Matrix>> duals(
      hyper.persist_duals ? batches.size() : 0);

  for (int epoch = 0; epoch < schedule.epochs; ++epoch) {
    double secs = 0.0;
    for (std::size_t k = 0; k < batches.size(); ++k) {
      const auto t0 = std::chrono::steady_clock::now();
      StepResult step = admm_minibatch_step(
          result.weights, batches[k], hyper,
          hyper.persist_duals ? &duals[k] : nullptr, /*want_diagnostics=*/false);
      result.weights = std::move(step.weights);
      secs += std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            t0)
                  .count();
    }

    EpochStats row;
    row.epoch = epoch;
    const EvalResult train_eval = evaluate(result.weights, data.train,
                                           hyper.cutoffs, hyper.activation);
    const EvalResult test_eval = evaluate(result.weights, data.test,
                                          hyper.cutoffs, hyper.activation);
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
