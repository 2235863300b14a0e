#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "spherenav/sphere_world.hpp"

namespace spherenav {

struct NavParams {
  double gamma = 5.0;  // controller gain
  double k = 5.0;      // navigation exponent; must exceed a world-dependent
                       // threshold for spurious minima to disappear

  NavParams() = default;
  NavParams(double gamma_, double k_) : gamma(gamma_), k(k_) {
    if (!(gamma > 0.0) || !(k > 0.0)) {
      throw std::invalid_argument("NavParams: gamma and k must be positive");
    }
  }
};

struct BetaResult {
  double value;
  VectorXd gradient;
};

/// Product obstacle function beta = prod_i beta_i with
///   beta_0 = rho_0^2 - |xi|^2,  beta_i = |xi - c_i|^2 - r_i^2,
/// and its analytic gradient. May be negative outside the free space.
inline BetaResult beta(const SphereWorld& world, const EuclideanPoint& xi) {
  const Eigen::Index n = xi.size();
  const std::size_t count = world.obstacles.size() + 1;
  std::vector<double> values(count);
  std::vector<VectorXd> grads(count);
  values[0] = world.workspace_radius * world.workspace_radius - xi.squaredNorm();
  grads[0] = -2.0 * xi;
  for (std::size_t i = 0; i < world.obstacles.size(); ++i) {
    const VectorXd diff = xi - world.obstacles[i].center;
    values[i + 1] = diff.squaredNorm() -
                    world.obstacles[i].radius * world.obstacles[i].radius;
    grads[i + 1] = 2.0 * diff;
  }
  double product = 1.0;
  for (double v : values) product *= v;
  VectorXd grad = VectorXd::Zero(n);
  for (std::size_t i = 0; i < count; ++i) {
    double others = 1.0;
    for (std::size_t j = 0; j < count; ++j) {
      if (j != i) others *= values[j];
    }
    grad += others * grads[i];
  }
  return {product, std::move(grad)};
}

namespace detail {

// Evaluates D = (q^k + beta)^{1/k} together with the weights
//   w_beta = beta / (q^k + beta)  and  w_inv = q / (k D (q^k + beta))
// switching to log-space arithmetic when q^k would overflow.
struct PhiKernel {
  double phi;     // q / D
  double w_beta;  // beta / (q^k + beta)
  double w_inv;   // q / (k D (q^k + beta))
};

inline PhiKernel phi_kernel(double q, double beta_val, double k) {
  const bool log_space =
      k > 20.0 || beta_val > 1e150 || (q > 0.0 && k * std::log(q) > 300.0);
  if (!log_space) {
    const double qk = std::pow(q, k);
    const double sum = qk + beta_val;
    const double d = std::pow(sum, 1.0 / k);
    return {q / d, beta_val / sum, q / (k * d * sum)};
  }
  const double log_q = std::log(q);
  const double a = k * log_q;
  const double b = std::log(beta_val);  // -inf when beta == 0
  const double hi = std::max(a, b);
  const double log_sum = hi + std::log1p(std::exp(std::min(a, b) - hi));
  const double log_d = log_sum / k;
  return {std::exp(log_q - log_d), std::exp(b - log_sum),
          std::exp(log_q - log_d - log_sum) / k};
}

// Matches the simulator's grazing band: margins in [-1e-6, 0) clamp beta to
// zero rather than reject.
inline constexpr double kBoundaryTol = 1e-6;

inline double clamped_beta(const SphereWorld& world, const EuclideanPoint& xi,
                           const char* who) {
  if (min_euclidean_margin(world, xi) < -kBoundaryTol) {
    throw FreeSpaceDomainError(std::string(who) + ": point outside the free workspace");
  }
  return std::max(beta(world, xi).value, 0.0);
}

}  // namespace detail

/// Navigation potential phi = |xi - xi_d|^2 / (|xi - xi_d|^{2k} + beta)^{1/k}:
/// zero at the target, one on every boundary, in (0,1) elsewhere inside.
inline double phi(const SphereWorld& world, const EuclideanPoint& xi,
                  const EuclideanPoint& xi_d, const NavParams& params) {
  const double b = detail::clamped_beta(world, xi, "phi");
  const double q = (xi - xi_d).squaredNorm();
  if (q == 0.0) {
    if (b == 0.0) {
      throw DegenerateConfigurationError("phi: target on the free-space boundary");
    }
    return 0.0;
  }
  return detail::phi_kernel(q, b, params.k).phi;
}

/// Analytic gradient of phi in its first argument,
///   grad phi = 2 (xi - xi_d) phi beta / (D (q^k + beta))
///              - q grad(beta) / (k D (q^k + beta)),
/// which stays finite in the boundary limit beta -> 0.
inline VectorXd grad_phi(const SphereWorld& world, const EuclideanPoint& xi,
                         const EuclideanPoint& xi_d, const NavParams& params) {
  const double b = detail::clamped_beta(world, xi, "grad_phi");
  const VectorXd diff = xi - xi_d;
  const double q = diff.squaredNorm();
  if (q == 0.0) {
    if (b == 0.0) {
      throw DegenerateConfigurationError("grad_phi: target on the free-space boundary");
    }
    return VectorXd::Zero(xi.size());
  }
  const auto kernel = detail::phi_kernel(q, b, params.k);
  const VectorXd grad_b = beta(world, xi).gradient;
  return (2.0 * kernel.phi * kernel.w_beta / q) * diff - kernel.w_inv * grad_b;
}

/// Gradient-descent velocity for the multi-constraint world.
inline VectorXd kappa_nav(const SphereWorld& world, const EuclideanPoint& xi,
                          const EuclideanPoint& xi_d, const NavParams& params) {
  return -params.gamma * grad_phi(world, xi, xi_d, params);
}

/// Linear velocity law for the single-constraint world; globally
/// exponentially stable with rate gamma.
inline VectorXd kappa_single(const EuclideanPoint& xi, const EuclideanPoint& xi_d,
                             double gamma) {
  return -gamma * (xi - xi_d);
}

struct StationaryCandidate {
  EuclideanPoint point;
  double grad_norm;
};

/// Samples the free space and reports points where the potential gradient is
/// near zero away from the target; candidates flag a too-small exponent k.
inline std::vector<StationaryCandidate> stationary_point_scan(
    const SphereWorld& world, const EuclideanPoint& xi_d, const NavParams& params,
    int samples, std::uint64_t seed, double grad_tol = 1e-4,
    double target_exclusion = 1e-2) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Eigen::Index n = xi_d.size();
  std::vector<StationaryCandidate> found;
  for (int s = 0; s < samples; ++s) {
    VectorXd dir(n);
    for (Eigen::Index i = 0; i < n; ++i) dir[i] = gauss(rng);
    dir.normalize();
    const double radius =
        world.workspace_radius * std::pow(unif(rng), 1.0 / static_cast<double>(n));
    const EuclideanPoint xi = radius * dir;
    if (min_euclidean_margin(world, xi) < 1e-6) continue;
    if ((xi - xi_d).norm() < target_exclusion) continue;
    const double g = grad_phi(world, xi, xi_d, params).norm();
    if (g < grad_tol) found.push_back({xi, g});
  }
  return found;
}

}  // namespace spherenav
