#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "admmnet/experiment.hpp"
#include "support/oracles.hpp"

using admmnet::Index;
using admmnet::Matrix;
using admmnet::RunConfig;

namespace {

// Writes a small synthetic dataset in the standard MNIST file layout.
std::string make_fixture_dir(std::mt19937_64& rng, Index train_n, Index test_n,
                             Index pixels, int classes) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("admmnet_exp_fixture_" + std::to_string(rng()));
  std::filesystem::create_directories(dir);
  const auto write_split = [&](const std::string& img, const std::string& lab,
                               Index n) {
    Matrix images(n, pixels);
    std::vector<std::uint8_t> labels(n);
    for (Index q = 0; q < n; ++q) {
      labels[q] = static_cast<std::uint8_t>(q % classes);
      for (Index j = 0; j < pixels; ++j) {
        images(q, j) = static_cast<double>((rng() % 200) + (labels[q] == j % classes ? 55 : 0)) / 255.0;
      }
    }
    admmnet::write_idx_images((dir / img).string(), images, 1, pixels);
    admmnet::write_idx_labels((dir / lab).string(), labels);
  };
  write_split("train-images-idx3-ubyte", "train-labels-idx1-ubyte", train_n);
  write_split("t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte", test_n);
  return dir.string();
}

RunConfig tiny_config(const std::string& data_dir) {
  RunConfig cfg;
  cfg.layers = {8, 6, 4};
  cfg.rho = {0.2, 0.1};
  cfg.beta = {0.2};
  cfg.batch_size = 16;
  cfg.epochs = 2;
  cfg.data_dir = data_dir;
  return cfg;
}

}  // namespace

TEST_CASE("config validation reports every invalid field at once") {
  RunConfig cfg;
  cfg.optimizer = "newton";
  cfg.activation = "sigmoid";
  cfg.lambda = -1.0;
  cfg.surrogate_c = 0.0;
  cfg.batch_size = 0;
  cfg.rho = {0.1};  // wrong length for 3 layers
  const auto errors = cfg.validate();
  CHECK(errors.size() >= 6);
  const std::string joined = [&] {
    std::string s;
    for (const auto& e : errors) s += e + "\n";
    return s;
  }();
  CHECK(joined.find("optimizer") != std::string::npos);
  CHECK(joined.find("activation") != std::string::npos);
  CHECK(joined.find("lambda") != std::string::npos);
  CHECK(joined.find("surrogate-c") != std::string::npos);
  CHECK(joined.find("batch size") != std::string::npos);
  CHECK(joined.find("rho") != std::string::npos);
}

TEST_CASE("relu with a finite upper bound is rejected") {
  RunConfig cfg;
  cfg.upper = 1.0;
  const auto errors = cfg.validate();
  CHECK(!errors.empty());

  RunConfig dcut = cfg;
  dcut.activation = "dcutlu";
  CHECK(dcut.validate().empty());
}

TEST_CASE("default paper configuration validates cleanly") {
  RunConfig cfg;
  CHECK(cfg.validate().empty());
  CHECK(cfg.layers == std::vector<Index>{784, 500, 600, 10});
  CHECK(cfg.rho == std::vector<double>{0.2, 0.1, 0.05});
  CHECK(cfg.beta == std::vector<double>{0.2, 0.1});
  CHECK(cfg.lambda == 0.1);
  CHECK(cfg.surrogate_c == 0.05);
  CHECK(cfg.sgd_lr == 0.3);
  CHECK(cfg.batch_size == 3000);
}

TEST_CASE("surrogate_unhalved doubles the effective curvature") {
  RunConfig cfg;
  CHECK(cfg.hyper_params().surrogate_c == 0.05);
  cfg.surrogate_unhalved = true;
  CHECK(cfg.hyper_params().surrogate_c == 0.1);
}

TEST_CASE("run_single drives all three optimizers on a small dataset") {
  std::mt19937_64 rng(41);
  const std::string dir = make_fixture_dir(rng, 32, 16, 8, 4);
  const admmnet::Dataset data = admmnet::load_mnist(dir);
  for (const std::string opt : {"admm", "sgd", "adam"}) {
    RunConfig cfg = tiny_config(dir);
    cfg.optimizer = opt;
    const auto result = admmnet::run_single(cfg, data);
    CHECK(result.history.size() == 2);
    for (const auto& row : result.history) {
      CHECK(std::isfinite(row.train_ce));
      CHECK(row.train_acc >= 0.0);
      CHECK(row.train_acc <= 1.0);
    }
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("history csv schema is stable") {
  std::vector<admmnet::EpochStats> rows(2);
  rows[0].epoch = 0;
  rows[0].train_ce = 1.25;
  rows[1].epoch = 1;
  rows[1].secs_per_minibatch = 0.5;
  std::ostringstream os;
  admmnet::write_history_csv(os, rows);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "epoch,train_ce,train_acc,test_ce,test_acc,secs_per_minibatch");
  std::getline(is, line);
  CHECK(line.rfind("0,1.25,", 0) == 0);
  std::getline(is, line);
  std::getline(is, line);
  CHECK(line.rfind("summary,", 0) == 0);
}

TEST_CASE("lr sweep records epochs-to-threshold or a cap marker") {
  std::mt19937_64 rng(43);
  const std::string dir = make_fixture_dir(rng, 32, 16, 8, 4);
  const admmnet::Dataset data = admmnet::load_mnist(dir);
  RunConfig cfg = tiny_config(dir);

  // An unreachable threshold must terminate at the cap with a marker.
  auto rows = admmnet::run_lr_sweep(cfg, data, {0.3}, {"relu"}, 1e-12, 2);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].epochs_to_threshold == -1);

  // A trivially satisfied threshold stops after the first epoch.
  rows = admmnet::run_lr_sweep(cfg, data, {0.3}, {"relu", "dcutlu"}, 1e9, 5);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].epochs_to_threshold == 1);
  CHECK(rows[1].epochs_to_threshold == 1);

  std::ostringstream os;
  admmnet::write_sweep_csv(os, rows);
  CHECK(os.str().rfind("rate,activation,epochs_to_threshold\n", 0) == 0);

  CHECK_THROWS_AS(admmnet::run_lr_sweep(cfg, data, {-0.1}, {"relu"}, 0.05, 1),
                  std::invalid_argument);
  std::filesystem::remove_all(dir);
}

TEST_CASE("timing produces finite nonnegative statistics") {
  std::mt19937_64 rng(44);
  const std::string dir = make_fixture_dir(rng, 32, 16, 8, 4);
  const admmnet::Dataset data = admmnet::load_mnist(dir);
  RunConfig cfg = tiny_config(dir);
  const auto rows = admmnet::run_timing(
      cfg, data, {{"sgd", "relu"}, {"admm", "relu"}}, 4, 1);
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    CHECK(std::isfinite(row.mean_secs));
    CHECK(row.mean_secs >= 0.0);
    CHECK(std::isfinite(row.std_secs));
    CHECK(row.std_secs >= 0.0);
  }
  std::ostringstream os;
  admmnet::write_timing_csv(os, rows);
  CHECK(os.str().rfind("optimizer,activation,mean_secs_per_minibatch,std_secs\n",
                       0) == 0);
  std::filesystem::remove_all(dir);
}
