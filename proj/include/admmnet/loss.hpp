#pragma once

#include "admmnet/matrix.hpp"

namespace admmnet {

struct LossGrad {
  double value = 0.0;  // cross-entropy summed over the rows of X
  Matrix grad;         // softmax(X) - O
};

// Softmax cross-entropy against one-hot targets, stabilized by row-max
// subtraction.
LossGrad softmax_cross_entropy(const Matrix& x, const Matrix& o);

}  // namespace admmnet
