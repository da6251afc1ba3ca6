#pragma once

#include <cstdint>
#include <vector>

#include "admmnet/matrix.hpp"

namespace admmnet {

// Per-layer weight matrices and bias rows for a feedforward network with
// layer size chain n_0 .. n_N: w[i] is n_i x n_{i+1}, b[i] is 1 x n_{i+1}.
struct NetworkWeights {
  std::vector<Matrix> w;
  std::vector<Matrix> b;

  int depth() const { return static_cast<int>(w.size()); }
  std::vector<Index> sizes() const;
  void validate() const;  // chain consistency and bias shapes
};

// Fan-scaled uniform initialization: entries of w[i] drawn from
// U(-sqrt(6/(n_i+n_{i+1})), +sqrt(6/(n_i+n_{i+1}))), biases zero.
// Fully determined by the seed.
NetworkWeights init_weights(const std::vector<Index>& sizes,
                            std::uint64_t seed);

}  // namespace admmnet
