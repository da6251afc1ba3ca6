#include "admmnet/activation.hpp"

#include <cmath>
#include <stdexcept>

namespace admmnet {

void Cutoffs::validate() const {
  if (!std::isfinite(lower)) {
    throw std::invalid_argument("cutoffs: lower threshold must be finite");
  }
  if (!(lower < upper)) {
    throw std::invalid_argument("cutoffs: lower must be strictly below upper");
  }
}

Matrix dcutlu(const Matrix& p, const Cutoffs& cut) {
  cut.validate();
  Matrix v = p.cwiseMax(cut.lower);
  if (cut.has_upper()) v = v.cwiseMin(cut.upper);
  return v;
}

std::pair<SlackTriple, CutoffMasks> decompose(const Matrix& p,
                                              const Cutoffs& cut) {
  cut.validate();
  SlackTriple s;
  CutoffMasks m;
  s.x = p;
  const Matrix xy = p.cwiseMax(cut.lower);
  s.y = xy - p;
  m.lower = p.array() < cut.lower;
  if (cut.has_upper()) {
    s.z = xy.cwiseMin(cut.upper) - xy;
    m.upper = p.array() > cut.upper;
  } else {
    s.z = Matrix::Zero(p.rows(), p.cols());
    m.upper = BoolGrid::Constant(p.rows(), p.cols(), false);
  }
  return {std::move(s), std::move(m)};
}

SlackPoint project_lower_cut(double a, double b, double l) {
  SlackPoint p;
  const double x_line = 0.5 * (a - b + l);
  if (x_line > l) {
    p.x = l;
    p.y = 0.0;
  } else {
    p.x = x_line;
    p.y = l - x_line;
  }
  p.z = 0.0;
  return p;
}

SlackPoint project_upper_cut(double a, double c, double u) {
  SlackPoint p;
  const double x_line = 0.5 * (a - c + u);
  if (x_line < u) {
    p.x = u;
    p.z = 0.0;
  } else {
    p.x = x_line;
    p.z = u - x_line;
  }
  p.y = 0.0;
  return p;
}

SlackPoint project_interior(double a, const Cutoffs& cut) {
  SlackPoint p;
  p.x = std::min(std::max(a, cut.lower), cut.upper);
  return p;
}

SlackTriple project_slack(const Matrix& a, const Matrix& b, const Matrix& c,
                          const CutoffMasks& masks, const Cutoffs& cut) {
  cut.validate();
  const Index rows = a.rows();
  const Index cols = a.cols();
  if (b.rows() != rows || b.cols() != cols) {
    throw std::invalid_argument("project_slack: target shapes disagree (" +
                                shape_str(a) + " vs " + shape_str(b) + ")");
  }
  const bool with_z = c.size() != 0;
  if (with_z && (c.rows() != rows || c.cols() != cols)) {
    throw std::invalid_argument("project_slack: target shapes disagree (" +
                                shape_str(a) + " vs " + shape_str(c) + ")");
  }
  if (masks.lower.rows() != rows || masks.lower.cols() != cols ||
      masks.upper.rows() != rows || masks.upper.cols() != cols) {
    throw std::invalid_argument("project_slack: mask shape mismatch");
  }

  SlackTriple out;
  out.x.resize(rows, cols);
  out.y.resize(rows, cols);
  if (with_z) out.z.resize(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      SlackPoint p;
      if (masks.lower(i, j)) {
        p = project_lower_cut(a(i, j), b(i, j), cut.lower);
      } else if (masks.upper(i, j)) {
        p = project_upper_cut(a(i, j), with_z ? c(i, j) : 0.0, cut.upper);
      } else {
        p = project_interior(a(i, j), cut);
      }
      out.x(i, j) = p.x;
      out.y(i, j) = p.y;
      if (with_z) out.z(i, j) = p.z;
    }
  }
  return out;
}

}  // namespace admmnet
