#pragma once

#include <Eigen/Dense>
#include <memory>

#include "spherenav/navigation.hpp"
#include "spherenav/sphere_world.hpp"
#include "spherenav/stereographic.hpp"

namespace spherenav {

/// Driftless kinematics x' = Pi(x) u with Im(Pi(x)) inside the tangent
/// space at x and rank n away from the pole.
class DynamicsModel {
 public:
  virtual ~DynamicsModel() = default;
  virtual Eigen::Index input_dim() const = 0;
  virtual Eigen::Index ambient_dim() const = 0;
  virtual MatrixXd pi_matrix(const UnitVector& x) const = 0;
};

/// Angular-velocity kinematics on S^2: x' = x cross u.
class SphericalPendulum final : public DynamicsModel {
 public:
  Eigen::Index input_dim() const override { return 3; }
  Eigen::Index ambient_dim() const override { return 3; }

  MatrixXd pi_matrix(const UnitVector& x) const override {
    const VectorXd& v = x.coords();
    MatrixXd pi(3, 3);
    // Pi(x) u = x cross u, i.e. the cross-product matrix of x.
    pi << 0.0, -v[2], v[1],
          v[2], 0.0, -v[0],
          -v[1], v[0], 0.0;
    return pi;
  }
};

/// Fully actuated tangent-space kinematics for any n: Pi(x) = I - x x^T.
class FullTangent final : public DynamicsModel {
 public:
  explicit FullTangent(Eigen::Index ambient_dim) : dim_(ambient_dim) {}
  Eigen::Index input_dim() const override { return dim_; }
  Eigen::Index ambient_dim() const override { return dim_; }

  MatrixXd pi_matrix(const UnitVector& x) const override {
    return MatrixXd::Identity(dim_, dim_) -
           x.coords() * x.coords().transpose();
  }

 private:
  Eigen::Index dim_;
};

/// View of a model in a rotated frame: Pi_R(x) = R Pi(R^T x). The input u
/// keeps its original coordinates.
class RotatedModel final : public DynamicsModel {
 public:
  RotatedModel(const DynamicsModel& inner, MatrixXd rotation)
      : inner_(inner), rotation_(std::move(rotation)) {}
  Eigen::Index input_dim() const override { return inner_.input_dim(); }
  Eigen::Index ambient_dim() const override { return inner_.ambient_dim(); }

  MatrixXd pi_matrix(const UnitVector& x) const override {
    return rotation_ * inner_.pi_matrix(renormalize(rotation_.transpose() * x.coords()));
  }

 private:
  const DynamicsModel& inner_;
  MatrixXd rotation_;
};

/// Pushforward input matrix Sigma(x) = grad_psi(x) Pi(x), full row rank n
/// everywhere away from the pole.
inline MatrixXd sigma(const DynamicsModel& model, const UnitVector& x) {
  return jacobian(x) * model.pi_matrix(x);
}

inline constexpr double kConditionLimit = 1e12;

namespace detail {

inline Eigen::LLT<MatrixXd> gram_factorization(const MatrixXd& sig) {
  const MatrixXd gram = sig * sig.transpose();
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(gram);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kConditionLimit) {
    throw NearSingularError("sigma gram matrix is near singular");
  }
  return Eigen::LLT<MatrixXd>(gram);
}

}  // namespace detail

/// Moore-Penrose right inverse Sigma^+ = Sigma^T (Sigma Sigma^T)^{-1},
/// realized through a Cholesky solve on the n x n Gram matrix.
inline MatrixXd sigma_pinv(const DynamicsModel& model, const UnitVector& x) {
  const MatrixXd sig = sigma(model, x);
  return sig.transpose() * detail::gram_factorization(sig).solve(
                               MatrixXd::Identity(sig.rows(), sig.rows()));
}

/// Applies Sigma^+ to a single velocity without forming the inverse.
inline VectorXd sigma_pinv_apply(const DynamicsModel& model, const UnitVector& x,
                                 const VectorXd& v) {
  const MatrixXd sig = sigma(model, x);
  return sig.transpose() * detail::gram_factorization(sig).solve(v);
}

/// Closed-form pseudo-inverse for the pendulum model,
///   Sigma^+ = -Pi(x) ((1 - x_3) I_3 + e_3 x^T) J_2^T,
/// kept as an independent cross-check of the generic solve path.
inline MatrixXd pendulum_sigma_pinv_closed_form(const UnitVector& x) {
  const VectorXd& v = x.coords();
  SphericalPendulum pendulum;
  MatrixXd inner = (1.0 - v[2]) * MatrixXd::Identity(3, 3);
  inner.row(2) += v.transpose();
  MatrixXd selector = MatrixXd::Zero(3, 2);
  selector(0, 0) = 1.0;
  selector(1, 1) = 1.0;
  return -pendulum.pi_matrix(x) * inner * selector;
}

enum class ControlMode { Single, Multi };

/// Composite law u = Sigma^+ kappa(psi(x), psi(x_d)) evaluated in the
/// aligned frame; inputs and the returned u are in the caller's frame.
inline VectorXd control(const DynamicsModel& model, const ConstraintSet& set,
                        const SphereWorld& world, const UnitVector& x,
                        const UnitVector& xd, const NavParams& params,
                        ControlMode mode) {
  if (min_sphere_margin(set, x) < -1e-6) {
    throw FreeSpaceDomainError("control: state outside the constrained space");
  }
  if (mode == ControlMode::Single && set.size() != 1) {
    throw std::invalid_argument("control: single mode needs exactly one cone");
  }
  const RotatedModel aligned_model(model, set.alignment());
  const UnitVector xa = set.to_aligned(x);
  const EuclideanPoint xi = project(xa);
  const EuclideanPoint xi_d = project(set.to_aligned(xd));
  const VectorXd v = (mode == ControlMode::Single)
                         ? kappa_single(xi, xi_d, params.gamma)
                         : kappa_nav(world, xi, xi_d, params);
  return sigma_pinv_apply(aligned_model, xa, v);
}

}  // namespace spherenav
