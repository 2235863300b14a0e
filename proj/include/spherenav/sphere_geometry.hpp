#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "spherenav/errors.hpp"

namespace spherenav {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline constexpr double kUnitNormTol = 1e-12;
inline constexpr double kTangencyTol = 1e-10;
inline constexpr double kMinRenormalizableNorm = 1e-8;

/// A point on the unit n-sphere embedded in R^{n+1}.
class UnitVector {
 public:
  enum class Strictness { Normalize, Reject };

  explicit UnitVector(VectorXd coords, Strictness strictness = Strictness::Normalize)
      : coords_(std::move(coords)) {
    if (coords_.size() < 2) {
      throw DimensionMismatchError("UnitVector needs at least 2 coordinates");
    }
    const double norm = coords_.norm();
    if (strictness == Strictness::Reject) {
      if (std::abs(norm - 1.0) > kUnitNormTol) {
        throw std::invalid_argument("UnitVector: norm deviates from 1 by " +
                                    std::to_string(std::abs(norm - 1.0)));
      }
    } else {
      if (norm < kMinRenormalizableNorm) {
        throw std::invalid_argument("UnitVector: vector norm too small to normalize");
      }
      coords_ /= norm;
    }
  }

  const VectorXd& coords() const { return coords_; }
  Eigen::Index ambient_dim() const { return coords_.size(); }
  Eigen::Index sphere_dim() const { return coords_.size() - 1; }
  double operator[](Eigen::Index i) const { return coords_[i]; }

  /// Last coordinate, the pole axis component.
  double pole_component() const { return coords_[coords_.size() - 1]; }

  static UnitVector axis(Eigen::Index ambient_dim, Eigen::Index k) {
    VectorXd v = VectorXd::Zero(ambient_dim);
    v[k] = 1.0;
    return UnitVector(std::move(v), Strictness::Reject);
  }

  /// The canonical pole e_{n+1}.
  static UnitVector pole(Eigen::Index ambient_dim) {
    return axis(ambient_dim, ambient_dim - 1);
  }

 private:
  VectorXd coords_;
};

/// A vector in the tangent space at a base point (orthogonal to it).
struct TangentVector {
  UnitVector base;
  VectorXd vec;

  TangentVector(UnitVector b, VectorXd v) : base(std::move(b)), vec(std::move(v)) {
    if (vec.size() != base.ambient_dim()) {
      throw DimensionMismatchError("TangentVector: dimension mismatch");
    }
    if (std::abs(base.coords().dot(vec)) > kTangencyTol * (1.0 + vec.norm())) {
      throw std::invalid_argument("TangentVector: not tangent to base point");
    }
  }
};

inline void require_same_dim(const UnitVector& x, const UnitVector& y) {
  if (x.ambient_dim() != y.ambient_dim()) {
    throw DimensionMismatchError("unit vectors have different ambient dimensions");
  }
}

/// Angular separation arccos(x^T y), clamped against roundoff.
inline double geodesic_distance(const UnitVector& x, const UnitVector& y) {
  require_same_dim(x, y);
  const double c = std::clamp(x.coords().dot(y.coords()), -1.0, 1.0);
  return std::acos(c);
}

inline UnitVector renormalize(const VectorXd& x) {
  if (x.norm() <= kMinRenormalizableNorm) {
    throw std::invalid_argument("renormalize: vector norm below threshold");
  }
  return UnitVector(x, UnitVector::Strictness::Normalize);
}

/// Rotation R with R*a = b, built as identity plus a rank-2 update in
/// span{a, b}; dimension-generic. For a = -b the rotation plane is spanned
/// by a and the lowest-index coordinate axis least parallel to a.
inline MatrixXd rotation_aligning(const UnitVector& a, const UnitVector& b) {
  require_same_dim(a, b);
  const Eigen::Index d = a.ambient_dim();
  const double c = std::clamp(a.coords().dot(b.coords()), -1.0, 1.0);
  const MatrixXd identity = MatrixXd::Identity(d, d);

  if (c > 1.0 - 1e-14) {
    return identity;
  }
  if (c < -1.0 + 1e-14) {
    // Half-turn in the plane span{a, w}.
    Eigen::Index k = 0;
    a.coords().cwiseAbs().minCoeff(&k);
    VectorXd w = VectorXd::Zero(d);
    w[k] = 1.0;
    w -= a.coords().dot(w) * a.coords();
    w.normalize();
    return identity - 2.0 * a.coords() * a.coords().transpose() -
           2.0 * w * w.transpose();
  }

  const VectorXd u1 = a.coords();
  VectorXd u2 = b.coords() - c * u1;
  const double s = u2.norm();  // sin of the rotation angle
  u2 /= s;
  return identity + (c - 1.0) * (u1 * u1.transpose() + u2 * u2.transpose()) +
         s * (u2 * u1.transpose() - u1 * u2.transpose());
}

}  // namespace spherenav
