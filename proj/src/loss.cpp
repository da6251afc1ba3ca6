#include "admmnet/loss.hpp"

#include <stdexcept>

namespace admmnet {

LossGrad softmax_cross_entropy(const Matrix& x, const Matrix& o) {
  if (x.rows() != o.rows() || x.cols() != o.cols()) {
    throw std::invalid_argument("softmax_cross_entropy: shape mismatch (" +
                                shape_str(x) + " vs " + shape_str(o) + ")");
  }
  const Eigen::VectorXd row_max = x.rowwise().maxCoeff();
  Matrix shifted = x;
  shifted.colwise() -= row_max;
  Matrix probs = shifted.array().exp().matrix();
  const Eigen::VectorXd sums = probs.rowwise().sum();
  probs.array().colwise() /= sums.array();

  LossGrad out;
  out.value = (sums.array().log() + row_max.array()).sum() -
              x.cwiseProduct(o).sum();
  out.grad = probs - o;
  return out;
}

}  // namespace admmnet
