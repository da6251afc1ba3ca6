#pragma once

#include <limits>
#include <utility>

#include "admmnet/matrix.hpp"

namespace admmnet {

enum class Activation { kRelu, kDcutlu };

// Clipping thresholds of the double-cutoff linear unit min(max(p,l),u).
// upper == +infinity degenerates to plain ReLU behavior; all upper-cutoff
// logic short-circuits in that case instead of computing with infinities.
struct Cutoffs {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();

  bool has_upper() const { return std::isfinite(upper); }
  void validate() const;  // requires finite lower and lower < upper
};

using BoolGrid = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Element membership in the lower-clipped / upper-clipped regions.
// Membership is strict on both sides (p < l, p > u), so the two masks are
// disjoint and boundary points fall in the unclipped complement.
struct CutoffMasks {
  BoolGrid lower;
  BoolGrid upper;
};

// Slack split of the activation: X is the pre-activation, Y absorbs the
// lower clip, Z the upper clip. Right after decompose():
//   X + Y     == max(X, l)
//   X + Y + Z == min(max(X, l), u)
// hold exactly, with Y >= 0 and Z <= 0 element-wise.
struct SlackTriple {
  Matrix x;
  Matrix y;
  Matrix z;
};

// min(max(p, l), u), element-wise.
Matrix dcutlu(const Matrix& p, const Cutoffs& cut);

std::pair<SlackTriple, CutoffMasks> decompose(const Matrix& p,
                                              const Cutoffs& cut);

struct SlackPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Scalar nearest-point maps onto the three per-element constraint sets
// (closures of the strict inequalities, which have no nearest point).
SlackPoint project_lower_cut(double a, double b, double l);  // {x+y=l, x<=l, z=0}
SlackPoint project_upper_cut(double a, double c, double u);  // {x+z=u, x>=u, y=0}
SlackPoint project_interior(double a, const Cutoffs& cut);   // {l<=x<=u, y=0, z=0}

// Element-wise Euclidean projection of the targets (a, b, c) onto the
// constraint set selected by the masks. c may be an empty matrix when
// cut.has_upper() is false; the returned z is then empty as well.
SlackTriple project_slack(const Matrix& a, const Matrix& b, const Matrix& c,
                          const CutoffMasks& masks, const Cutoffs& cut);

}  // namespace admmnet
