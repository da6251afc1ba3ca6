#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "admmnet/experiment.hpp"

namespace {

struct CliOptions {
  admmnet::RunConfig config;
  std::string upper = "inf";
  std::vector<std::string> optimizers = {"admm", "sgd", "adam"};
  std::vector<double> rates = {0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<std::string> sweep_activations = {"relu", "dcutlu"};
  double ce_threshold = 0.05;
  int epoch_cap = 200;
  int timing_minibatches = 20;
  int timing_warmup = 2;
  double target_test_acc = -1.0;
};

void add_common_options(CLI::App* app, CliOptions& opt) {
  auto& cfg = opt.config;
  app->add_option("--optimizer", cfg.optimizer, "admm | sgd | adam");
  app->add_option("--activation", cfg.activation, "relu | dcutlu");
  app->add_option("--lower", cfg.lower, "lower cutoff l");
  app->add_option("--upper", opt.upper, "upper cutoff u (finite value or 'inf')");
  app->add_option("--rho", cfg.rho, "per-layer rho values, layer 1..N")
      ->delimiter(',');
  app->add_option("--beta", cfg.beta, "per-layer beta values, layer 1..N-1")
      ->delimiter(',');
  app->add_option("--lambda", cfg.lambda, "weight decay coefficient");
  app->add_option("--surrogate-c", cfg.surrogate_c,
                  "top-layer quadratic coefficient");
  app->add_flag("--surrogate-unhalved", cfg.surrogate_unhalved,
                "treat surrogate-c as the weight of the un-halved square");
  app->add_option("--sgd-lr", cfg.sgd_lr, "SGD learning rate");
  app->add_option("--epochs", cfg.epochs, "epoch budget");
  app->add_option("--batch-size", cfg.batch_size, "minibatch size");
  app->add_option("--seed", cfg.seed, "seed for init and shuffling");
  app->add_option("--layers", cfg.layers, "layer size chain n_0,...,n_N")
      ->delimiter(',');
  app->add_option("--data-dir", cfg.data_dir, "directory with the IDX files")
      ->envname("ADMMNET_DATA_DIR");
  app->add_option("--out", cfg.out, "output CSV file or directory");
  app->add_flag("--shuffle", cfg.shuffle, "shuffle sample order (seeded)");
  app->add_flag("--persist-duals", cfg.persist_duals,
                "carry multipliers across outer iterations");
  app->add_option("--target-test-acc", opt.target_test_acc,
                  "stop once test accuracy reaches this value");
}

int finalize_config(CliOptions& opt) {
  try {
    opt.config.upper = std::stod(opt.upper);
  } catch (const std::exception&) {
    std::cerr << "config error: cannot parse --upper value '" << opt.upper
              << "'\n";
    return 2;
  }
  if (opt.target_test_acc > 0.0) {
    opt.config.target_test_acc = opt.target_test_acc;
  }
  const auto errors = opt.config.validate();
  if (!errors.empty()) {
    for (const std::string& e : errors) std::cerr << "config error: " << e << "\n";
    return 2;
  }
  if (opt.config.data_dir.empty()) {
    std::cerr << "config error: no data directory (use --data-dir or "
                 "ADMMNET_DATA_DIR)\n";
    return 2;
  }
  return 0;
}

void print_history_tail(const admmnet::TrainResult& result) {
  if (result.history.empty()) return;
  const auto& row = result.history.back();
  std::printf("epoch %d: train_ce %.4f train_acc %.4f test_ce %.4f test_acc %.4f\n",
              row.epoch, row.train_ce, row.train_acc, row.test_ce,
              row.test_acc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ADMM-over-graph network training experiments"};
  app.require_subcommand(1);

  CliOptions opt;
  CLI::App* train = app.add_subcommand("train", "single training run");
  CLI::App* compare =
      app.add_subcommand("compare", "train several optimizers on one setup");
  CLI::App* sweep =
      app.add_subcommand("lr-sweep", "epochs-to-threshold per learning rate");
  CLI::App* timing =
      app.add_subcommand("timing", "seconds per minibatch per optimizer");
  for (CLI::App* sub : {train, compare, sweep, timing}) {
    add_common_options(sub, opt);
  }
  compare->add_option("--optimizers", opt.optimizers, "optimizers to run")
      ->delimiter(',');
  sweep->add_option("--rates", opt.rates, "learning rates to sweep")
      ->delimiter(',');
  sweep->add_option("--sweep-activations", opt.sweep_activations,
                    "activations to sweep")
      ->delimiter(',');
  sweep->add_option("--threshold", opt.ce_threshold,
                    "average cross-entropy threshold");
  sweep->add_option("--epoch-cap", opt.epoch_cap, "epoch cap per sweep entry");
  timing->add_option("--minibatches", opt.timing_minibatches,
                     "timed minibatches per setup");
  timing->add_option("--warmup", opt.timing_warmup, "untimed warmup steps");

  CLI11_PARSE(app, argc, argv);

  if (int rc = finalize_config(opt); rc != 0) return rc;

  try {
    const admmnet::Dataset data = admmnet::load_mnist(opt.config.data_dir);

    if (train->parsed()) {
      const admmnet::TrainResult result = admmnet::run_single(opt.config, data);
      print_history_tail(result);
      if (!opt.config.out.empty()) {
        std::ofstream out(opt.config.out);
        if (!out) throw std::runtime_error("cannot write " + opt.config.out);
        admmnet::write_history_csv(out, result.history);
      }
    } else if (compare->parsed()) {
      const std::string out_dir =
          opt.config.out.empty() ? std::string(".") : opt.config.out;
      admmnet::run_compare(opt.config, data, opt.optimizers, out_dir);
    } else if (sweep->parsed()) {
      const auto rows =
          admmnet::run_lr_sweep(opt.config, data, opt.rates,
                                opt.sweep_activations, opt.ce_threshold,
                                opt.epoch_cap);
      if (opt.config.out.empty()) {
        admmnet::write_sweep_csv(std::cout, rows);
      } else {
        std::ofstream out(opt.config.out);
        if (!out) throw std::runtime_error("cannot write " + opt.config.out);
        admmnet::write_sweep_csv(out, rows);
      }
    } else if (timing->parsed()) {
      const std::vector<std::pair<std::string, std::string>> setups = {
          {"sgd", "relu"}, {"adam", "relu"}, {"admm", "relu"},
          {"admm", "dcutlu"}};
      const auto rows = admmnet::run_timing(opt.config, data, setups,
                                            opt.timing_minibatches,
                                            opt.timing_warmup);
      if (opt.config.out.empty()) {
        admmnet::write_timing_csv(std::cout, rows);
      } else {
        std::ofstream out(opt.config.out);
        if (!out) throw std::runtime_error("cannot write " + opt.config.out);
        admmnet::write_timing_csv(out, rows);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
