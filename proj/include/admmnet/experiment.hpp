#pragma once

#include <optional>
#include <string>
#include <vector>

#include "admmnet/admm.hpp"
#include "admmnet/baseline.hpp"

namespace admmnet {

// One experiment invocation's worth of configuration; defaults reproduce
// the MNIST comparison setup. Validation is total: validate() reports
// every invalid field at once, before any data is touched.
struct RunConfig {
  std::string optimizer = "admm";  // admm | sgd | adam
  std::string activation = "relu";  // relu | dcutlu
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  std::vector<double> rho = {0.2, 0.1, 0.05};  // layer 1..N
  std::vector<double> beta = {0.2, 0.1};       // layer 1..N-1
  double lambda = 0.1;
  double surrogate_c = 0.05;
  // Interpret the surrogate coefficient as the weight of the un-halved
  // square |X - X_hat|^2 (doubles the effective curvature).
  bool surrogate_unhalved = false;
  double sgd_lr = 0.3;
  int epochs = 100;
  Index batch_size = 3000;
  std::uint64_t seed = 1;
  std::vector<Index> layers = {784, 500, 600, 10};
  std::string data_dir;
  std::string out;
  bool shuffle = false;
  bool persist_duals = false;
  std::optional<double> target_test_acc;

  std::vector<std::string> validate() const;
  Activation activation_kind() const;
  Cutoffs cutoffs() const;
  HyperParams hyper_params() const;
  BaselineConfig baseline_config() const;
  TrainSchedule schedule() const;
};

// Trains one optimizer per config and returns its history.
TrainResult run_single(const RunConfig& config, const Dataset& data);

// Runs every requested optimizer on identical data/seed and writes one
// history CSV per optimizer into out_dir (history_<optimizer>.csv).
void run_compare(const RunConfig& config, const Dataset& data,
                 const std::vector<std::string>& optimizers,
                 const std::string& out_dir);

struct SweepEntry {
  double rate = 0.0;
  std::string activation;
  int epochs_to_threshold = -1;  // -1 means the epoch cap was hit
};

// For each (rate, activation) sets every rho_i = beta_i = rate and trains
// until the average train cross-entropy reaches the threshold or the
// epoch cap. CSV columns: rate,activation,epochs_to_threshold (the cap
// marker is the literal string "capped").
std::vector<SweepEntry> run_lr_sweep(const RunConfig& config,
                                     const Dataset& data,
                                     const std::vector<double>& rates,
                                     const std::vector<std::string>& activations,
                                     double ce_threshold, int epoch_cap);
void write_sweep_csv(std::ostream& out, const std::vector<SweepEntry>& rows);

struct TimingEntry {
  std::string optimizer;
  std::string activation;
  double mean_secs = 0.0;
  double std_secs = 0.0;
};

// Wall-clock per minibatch step over `minibatches` timed steps after
// `warmup` untimed ones, for each (optimizer, activation) pair given.
std::vector<TimingEntry> run_timing(
    const RunConfig& config, const Dataset& data,
    const std::vector<std::pair<std::string, std::string>>& setups,
    int minibatches, int warmup);
void write_timing_csv(std::ostream& out, const std::vector<TimingEntry>& rows);

}  // namespace admmnet
