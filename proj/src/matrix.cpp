#include "admmnet/matrix.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace admmnet {

std::string shape_str(const Matrix& a) {
  std::ostringstream os;
  os << a.rows() << "x" << a.cols();
  return os.str();
}

bool all_finite(const Matrix& a) { return a.allFinite(); }

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: inner dimensions disagree (" +
                                shape_str(a) + " * " + shape_str(b) + ")");
  }
  Matrix c(a.rows(), b.cols());
  c.noalias() = a * b;
  return c;
}

namespace {

// Scalar Cholesky, used only to locate the offending pivot after the fast
// factorization reported failure.
Index find_failing_pivot(const Matrix& a) {
  const Index n = a.rows();
  Matrix l = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    const double d = a(j, j) - l.row(j).head(j).squaredNorm();
    if (!(d > 0.0) || !std::isfinite(d)) return j;
    l(j, j) = std::sqrt(d);
    for (Index i = j + 1; i < n; ++i) {
      l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
    }
  }
  return n - 1;
}

}  // namespace

Matrix spd_solve(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("spd_solve: system matrix is not square (" +
                                shape_str(a) + ")");
  }
  if (a.rows() != b.rows()) {
    throw std::invalid_argument("spd_solve: dimension mismatch (" + shape_str(a) +
                                " vs rhs " + shape_str(b) + ")");
  }
  const double scale = 1.0 + a.cwiseAbs().maxCoeff();
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale) {
    std::ostringstream os;
    os << "spd_solve: matrix is not symmetric (max asymmetry " << asym << ")";
    throw std::invalid_argument(os.str());
  }
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    std::ostringstream os;
    os << "spd_solve: matrix is not positive definite (pivot "
       << find_failing_pivot(a) << " failed)";
    throw std::runtime_error(os.str());
  }
  return llt.solve(b);
}

Matrix axpy(double alpha, const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw std::invalid_argument("axpy: shape mismatch (" + shape_str(x) +
                                " vs " + shape_str(y) + ")");
  }
  return alpha * x + y;
}

Matrix transpose(const Matrix& a) { return a.transpose(); }

double frob_inner(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("frob_inner: shape mismatch (" + shape_str(a) +
                                " vs " + shape_str(b) + ")");
  }
  return a.cwiseProduct(b).sum();
}

double frob_norm(const Matrix& a) { return a.norm(); }

Matrix clamp(const Matrix& a, double lo, double hi) {
  if (!(lo <= hi)) {
    throw std::invalid_argument("clamp: empty interval (lo > hi)");
  }
  return a.cwiseMax(lo).cwiseMin(hi);
}

Matrix row_broadcast_add(const Matrix& a, const Matrix& b) {
  if (b.rows() != 1 || b.cols() != a.cols()) {
    throw std::invalid_argument("row_broadcast_add: bias must be 1x" +
                                std::to_string(a.cols()) + ", got " +
                                shape_str(b));
  }
  Matrix out = a;
  out.rowwise() += b.row(0);
  return out;
}

}  // namespace admmnet
