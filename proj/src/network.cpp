#include "admmnet/network.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace admmnet {

std::vector<Index> NetworkWeights::sizes() const {
  std::vector<Index> s;
  if (w.empty()) return s;
  s.push_back(w.front().rows());
  for (const Matrix& wi : w) s.push_back(wi.cols());
  return s;
}

void NetworkWeights::validate() const {
  if (w.size() != b.size()) {
    throw std::invalid_argument("network: weight/bias layer counts differ");
  }
  if (w.empty()) {
    throw std::invalid_argument("network: at least one layer required");
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (b[i].rows() != 1 || b[i].cols() != w[i].cols()) {
      throw std::invalid_argument("network: bias " + std::to_string(i + 1) +
                                  " must be 1x" + std::to_string(w[i].cols()) +
                                  ", got " + shape_str(b[i]));
    }
    if (i + 1 < w.size() && w[i].cols() != w[i + 1].rows()) {
      throw std::invalid_argument(
          "network: layer size chain broken between layers " +
          std::to_string(i + 1) + " and " + std::to_string(i + 2));
    }
  }
}

namespace {

// Portable uniform double in [0, 1): top 53 bits of the engine output.
double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

NetworkWeights init_weights(const std::vector<Index>& sizes,
                            std::uint64_t seed) {
  if (sizes.size() < 2) {
    throw std::invalid_argument("init_weights: need at least input and output sizes");
  }
  for (Index n : sizes) {
    if (n <= 0) throw std::invalid_argument("init_weights: layer sizes must be positive");
  }
  std::mt19937_64 rng(seed);
  NetworkWeights net;
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    const Index fan_in = sizes[i];
    const Index fan_out = sizes[i + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Matrix wi(fan_in, fan_out);
    for (Index r = 0; r < fan_in; ++r) {
      for (Index c = 0; c < fan_out; ++c) {
        wi(r, c) = limit * (2.0 * next_unit(rng) - 1.0);
      }
    }
    net.w.push_back(std::move(wi));
    net.b.push_back(Matrix::Zero(1, fan_out));
  }
  return net;
}

}  // namespace admmnet
