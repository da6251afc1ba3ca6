#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "admmnet/network.hpp"

namespace admmnet {

struct EpochStats {
  int epoch = 0;
  double train_ce = 0.0;  // per-sample average over the full training set
  double train_acc = 0.0;
  double test_ce = 0.0;
  double test_acc = 0.0;
  double secs_per_minibatch = 0.0;
};

struct TrainSchedule {
  int epochs = 100;
  Index batch_size = 3000;
  std::uint64_t seed = 1;
  bool shuffle = false;
  // Optional early stops, checked after each epoch's evaluation.
  std::optional<double> stop_train_ce;
  std::optional<double> stop_test_acc;
};

struct TrainResult {
  NetworkWeights weights;
  std::vector<EpochStats> history;
};

// Fixed history schema: per-epoch rows followed by one summary row whose
// epoch column reads "summary" and repeats the final epoch's metrics with
// the mean seconds per minibatch over the whole run.
extern const char* const kHistoryCsvHeader;

std::string format_history_row(const EpochStats& row);
void write_history_csv(std::ostream& out, const std::vector<EpochStats>& rows);

}  // namespace admmnet
