#include "admmnet/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace admmnet {

std::vector<std::string> RunConfig::validate() const {
  std::vector<std::string> errors;
  if (optimizer != "admm" && optimizer != "sgd" && optimizer != "adam") {
    errors.push_back("optimizer must be admm, sgd or adam (got '" + optimizer +
                     "')");
  }
  if (activation != "relu" && activation != "dcutlu") {
    errors.push_back("activation must be relu or dcutlu (got '" + activation +
                     "')");
  }
  if (!std::isfinite(lower)) errors.push_back("lower cutoff must be finite");
  if (!(lower < upper)) errors.push_back("lower cutoff must be below upper");
  if (activation == "relu" &&
      (lower != 0.0 || std::isfinite(upper))) {
    errors.push_back("relu requires cutoffs (0, +inf); use dcutlu for finite bounds");
  }
  if (activation == "dcutlu" && !std::isfinite(upper)) {
    errors.push_back("dcutlu requires a finite upper cutoff");
  }
  if (layers.size() < 2) {
    errors.push_back("layers must list at least input and output sizes");
  }
  for (Index n : layers) {
    if (n <= 0) {
      errors.push_back("layer sizes must be positive");
      break;
    }
  }
  const std::size_t depth = layers.empty() ? 0 : layers.size() - 1;
  if (rho.size() != depth) {
    errors.push_back("rho needs " + std::to_string(depth) + " entries, got " +
                     std::to_string(rho.size()));
  }
  if (beta.size() + 1 != depth && depth > 0) {
    errors.push_back("beta needs " + std::to_string(depth - 1) +
                     " entries, got " + std::to_string(beta.size()));
  }
  for (double r : rho) {
    if (!(r > 0.0)) {
      errors.push_back("rho entries must be positive");
      break;
    }
  }
  for (double b : beta) {
    if (!(b > 0.0)) {
      errors.push_back("beta entries must be positive");
      break;
    }
  }
  if (!(lambda >= 0.0)) errors.push_back("lambda must be nonnegative");
  if (!(surrogate_c > 0.0)) errors.push_back("surrogate-c must be positive");
  if (!(sgd_lr > 0.0)) errors.push_back("sgd learning rate must be positive");
  if (epochs < 0) errors.push_back("epochs must be nonnegative");
  if (batch_size <= 0) errors.push_back("batch size must be positive");
  if (target_test_acc && !(*target_test_acc > 0.0 && *target_test_acc <= 1.0)) {
    errors.push_back("target test accuracy must lie in (0, 1]");
  }
  return errors;
}

Activation RunConfig::activation_kind() const {
  return activation == "relu" ? Activation::kRelu : Activation::kDcutlu;
}

Cutoffs RunConfig::cutoffs() const {
  Cutoffs c;
  c.lower = lower;
  c.upper = upper;
  return c;
}

HyperParams RunConfig::hyper_params() const {
  HyperParams h;
  h.rho = rho;
  h.beta = beta;
  h.cutoffs = cutoffs();
  h.lambda_reg = lambda;
  h.surrogate_c = surrogate_unhalved ? 2.0 * surrogate_c : surrogate_c;
  h.activation = activation_kind();
  h.persist_duals = persist_duals;
  return h;
}

BaselineConfig RunConfig::baseline_config() const {
  BaselineConfig b;
  b.kind = optimizer == "adam" ? BaselineConfig::Kind::kAdam
                               : BaselineConfig::Kind::kSgd;
  b.sgd_lr = sgd_lr;
  b.cutoffs = cutoffs();
  b.activation = activation_kind();
  b.lambda_reg = lambda;
  return b;
}

TrainSchedule RunConfig::schedule() const {
  TrainSchedule s;
  s.epochs = epochs;
  s.batch_size = batch_size;
  s.seed = seed;
  s.shuffle = shuffle;
  s.stop_test_acc = target_test_acc;
  return s;
}

namespace {

void throw_if_invalid(const RunConfig& config) {
  const auto errors = config.validate();
  if (!errors.empty()) {
    std::string joined = "invalid config:";
    for (const std::string& e : errors) joined += " " + e + ";";
    throw std::invalid_argument(joined);
  }
}

}  // namespace

TrainResult run_single(const RunConfig& config, const Dataset& data) {
  throw_if_invalid(config);
  const NetworkWeights init = init_weights(config.layers, config.seed);
  if (config.optimizer == "admm") {
    return admm_train(data, init, config.hyper_params(), config.schedule());
  }
  return train_baseline(data, init, config.baseline_config(),
                        config.schedule());
}

void run_compare(const RunConfig& config, const Dataset& data,
                 const std::vector<std::string>& optimizers,
                 const std::string& out_dir) {
  for (const std::string& opt : optimizers) {
    RunConfig cfg = config;
    cfg.optimizer = opt;
    const TrainResult result = run_single(cfg, data);
    const std::string path = out_dir + "/history_" + opt + ".csv";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_history_csv(out, result.history);
  }
}

std::vector<SweepEntry> run_lr_sweep(const RunConfig& config,
                                     const Dataset& data,
                                     const std::vector<double>& rates,
                                     const std::vector<std::string>& activations,
                                     double ce_threshold, int epoch_cap) {
  for (double r : rates) {
    if (!(r > 0.0)) {
      throw std::invalid_argument("lr sweep: rates must be positive");
    }
  }
  std::vector<SweepEntry> rows;
  for (const std::string& act : activations) {
    for (double rate : rates) {
      RunConfig cfg = config;
      cfg.optimizer = "admm";
      cfg.activation = act;
      if (act == "relu") {
        cfg.lower = 0.0;
        cfg.upper = std::numeric_limits<double>::infinity();
      } else if (!std::isfinite(cfg.upper)) {
        cfg.upper = 1.0;
      }
      cfg.rho.assign(cfg.layers.size() - 1, rate);
      cfg.beta.assign(cfg.layers.size() - 2, rate);
      cfg.epochs = epoch_cap;
      cfg.target_test_acc.reset();
      throw_if_invalid(cfg);

      TrainSchedule sched = cfg.schedule();
      sched.stop_train_ce = ce_threshold;
      const NetworkWeights init = init_weights(cfg.layers, cfg.seed);
      const TrainResult result =
          admm_train(data, init, cfg.hyper_params(), sched);

      SweepEntry row;
      row.rate = rate;
      row.activation = act;
      row.epochs_to_threshold = -1;
      if (!result.history.empty() &&
          result.history.back().train_ce <= ce_threshold) {
        row.epochs_to_threshold = static_cast<int>(result.history.size());
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepEntry>& rows) {
  out << "rate,activation,epochs_to_threshold\n";
  for (const SweepEntry& row : rows) {
    char buf[128];
    if (row.epochs_to_threshold >= 0) {
      std::snprintf(buf, sizeof(buf), "%.10g,%s,%d", row.rate,
                    row.activation.c_str(), row.epochs_to_threshold);
    } else {
      std::snprintf(buf, sizeof(buf), "%.10g,%s,capped", row.rate,
                    row.activation.c_str());
    }
    out << buf << "\n";
  }
}

std::vector<TimingEntry> run_timing(
    const RunConfig& config, const Dataset& data,
    const std::vector<std::pair<std::string, std::string>>& setups,
    int minibatches, int warmup) {
  if (minibatches < 2) {
    throw std::invalid_argument("timing: need at least 2 timed minibatches");
  }
  std::vector<TimingEntry> rows;
  for (const auto& [opt, act] : setups) {
    RunConfig cfg = config;
    cfg.optimizer = opt;
    cfg.activation = act;
    if (act == "relu") {
      cfg.lower = 0.0;
      cfg.upper = std::numeric_limits<double>::infinity();
    } else if (!std::isfinite(cfg.upper)) {
      cfg.upper = 1.0;
    }
    throw_if_invalid(cfg);

    const auto batches =
        partition(data.train, cfg.batch_size, cfg.seed, cfg.shuffle);
    NetworkWeights weights = init_weights(cfg.layers, cfg.seed);
    const HyperParams hyper = cfg.hyper_params();
    const BaselineConfig base = cfg.baseline_config();
    AdamState adam = AdamState::like(weights);

    std::vector<double> times;
    const int total = warmup + minibatches;
    for (int step = 0; step < total; ++step) {
      const Batch& batch = batches[step % batches.size()];
      const auto t0 = std::chrono::steady_clock::now();
      if (opt == "admm") {
        weights = admm_minibatch_step(weights, batch, hyper, nullptr,
                                      /*want_diagnostics=*/false)
                      .weights;
      } else {
        Gradients g = backprop(weights, batch, base.cutoffs, base.activation,
                               base.lambda_reg);
        const double inv_m = 1.0 / static_cast<double>(batch.samples());
        for (std::size_t i = 0; i < g.w.size(); ++i) {
          g.w[i] *= inv_m;
          g.b[i] *= inv_m;
        }
        if (base.kind == BaselineConfig::Kind::kSgd) {
          sgd_step(weights, g, base.sgd_lr);
        } else {
          adam_step(adam, weights, g, base.adam);
        }
      }
      const double dt =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      if (step >= warmup) times.push_back(dt);
    }

    TimingEntry row;
    row.optimizer = opt;
    row.activation = act;
    double mean = 0.0;
    for (double t : times) mean += t;
    mean /= static_cast<double>(times.size());
    double var = 0.0;
    for (double t : times) var += (t - mean) * (t - mean);
    var /= static_cast<double>(times.size() - 1);
    row.mean_secs = mean;
    row.std_secs = std::sqrt(var);
    rows.push_back(row);
  }
  return rows;
}

void write_timing_csv(std::ostream& out, const std::vector<TimingEntry>& rows) {
  out << "optimizer,activation,mean_secs_per_minibatch,std_secs\n";
  for (const TimingEntry& row : rows) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s,%s,%.6f,%.6f", row.optimizer.c_str(),
                  row.activation.c_str(), row.mean_secs, row.std_secs);
    out << buf << "\n";
  }
}

}  // namespace admmnet
