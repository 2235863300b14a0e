#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "spherenav/sphere_geometry.hpp"
#include "spherenav/stereographic.hpp"

namespace spherenav {

/// Keep-out cone: states within half_angle of axis are forbidden.
struct ConicConstraint {
  UnitVector axis;
  double half_angle;  // radians, strictly inside (0, pi/2)

  ConicConstraint(UnitVector a, double angle) : axis(std::move(a)), half_angle(angle) {
    if (!(angle > 0.0 && angle < M_PI / 2.0)) {
      throw std::invalid_argument("ConicConstraint: half angle must lie in (0, pi/2)");
    }
  }
};

struct BallObstacle {
  EuclideanPoint center;
  double radius;
};

/// Euclidean image of the constrained sphere: a workspace ball of radius
/// cot(theta_0/2) minus disjoint ball obstacles.
struct SphereWorld {
  double workspace_radius;
  std::vector<BallObstacle> obstacles;
};

/// Ordered cone list with index 0 as the workspace-bounding cone. The
/// aligned frame (axis 0 on the pole) is kept internally; callers work in
/// the original frame.
class ConstraintSet {
 public:
  explicit ConstraintSet(std::vector<ConicConstraint> constraints)
      : original_(std::move(constraints)) {
    if (original_.empty()) {
      throw std::invalid_argument("ConstraintSet: need at least one cone");
    }
    const Eigen::Index d = original_[0].axis.ambient_dim();
    for (const auto& c : original_) {
      if (c.axis.ambient_dim() != d) {
        throw DimensionMismatchError("ConstraintSet: mixed axis dimensions");
      }
    }
    alignment_ = rotation_aligning(original_[0].axis, UnitVector::pole(d));
    aligned_.reserve(original_.size());
    for (const auto& c : original_) {
      aligned_.emplace_back(renormalize(alignment_ * c.axis.coords()), c.half_angle);
    }
  }

  const std::vector<ConicConstraint>& constraints() const { return original_; }
  const std::vector<ConicConstraint>& aligned_constraints() const { return aligned_; }
  const MatrixXd& alignment() const { return alignment_; }
  std::size_t size() const { return original_.size(); }
  Eigen::Index ambient_dim() const { return original_[0].axis.ambient_dim(); }

  UnitVector to_aligned(const UnitVector& x) const {
    return renormalize(alignment_ * x.coords());
  }
  UnitVector from_aligned(const UnitVector& x) const {
    return renormalize(alignment_.transpose() * x.coords());
  }

 private:
  std::vector<ConicConstraint> original_;
  std::vector<ConicConstraint> aligned_;
  MatrixXd alignment_;
};

/// Per-cone safety margins m_i = cos(theta_i) - x^T a_i; x is free iff all >= 0.
inline std::vector<double> sphere_margin(const ConstraintSet& set, const UnitVector& x) {
  std::vector<double> margins;
  margins.reserve(set.size());
  for (const auto& c : set.constraints()) {
    margins.push_back(std::cos(c.half_angle) - x.coords().dot(c.axis.coords()));
  }
  return margins;
}

inline double min_sphere_margin(const ConstraintSet& set, const UnitVector& x) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& c : set.constraints()) {
    m = std::min(m, std::cos(c.half_angle) - x.coords().dot(c.axis.coords()));
  }
  return m;
}

/// Distances to the workspace boundary and each obstacle surface; the point
/// is inside the free workspace iff all entries are >= 0.
inline std::vector<double> euclidean_margin(const SphereWorld& world,
                                            const EuclideanPoint& xi) {
  std::vector<double> margins;
  margins.reserve(world.obstacles.size() + 1);
  margins.push_back(world.workspace_radius - xi.norm());
  for (const auto& obs : world.obstacles) {
    margins.push_back((xi - obs.center).norm() - obs.radius);
  }
  return margins;
}

inline double min_euclidean_margin(const SphereWorld& world, const EuclideanPoint& xi) {
  double m = world.workspace_radius - xi.norm();
  for (const auto& obs : world.obstacles) {
    m = std::min(m, (xi - obs.center).norm() - obs.radius);
  }
  return m;
}

struct ValidationReport {
  struct PairSeparation {
    std::size_t i, j;
    double margin;  // cos(theta_i + theta_j) - a_i^T a_j, must be > 0
  };
  std::vector<PairSeparation> separations;
  bool separation_ok = true;
  std::vector<std::pair<std::size_t, std::size_t>> offending_pairs;

  bool alignment_applied = true;

  std::vector<double> start_margins;
  std::vector<double> target_margins;
  bool start_in_free_space = true;
  bool target_in_interior = true;
  std::vector<std::size_t> offending_start;
  std::vector<std::size_t> offending_target;

  bool passed() const {
    return separation_ok && start_in_free_space && target_in_interior;
  }

  std::string to_string() const {
    std::ostringstream out;
    out << "pairwise separation: " << (separation_ok ? "ok" : "FAIL") << "\n";
    for (const auto& s : separations) {
      out << "  cones (" << s.i << "," << s.j << ") margin " << s.margin
          << (s.margin > 0 ? "" : "  <-- overlap") << "\n";
    }
    out << "frame alignment: applied\n";
    out << "start in free space: " << (start_in_free_space ? "ok" : "FAIL");
    for (auto i : offending_start) out << " (cone " << i << ")";
    out << "\n";
    out << "target in interior: " << (target_in_interior ? "ok" : "FAIL");
    for (auto i : offending_target) out << " (cone " << i << ")";
    out << "\n";
    return out.str();
  }
};

inline constexpr double kStartMarginTol = -1e-12;
inline constexpr double kInteriorMarginTol = 1e-9;

inline ValidationReport validate(const ConstraintSet& set, const UnitVector& x0,
                                 const UnitVector& xd) {
  ValidationReport report;
  const auto& cones = set.constraints();
  for (std::size_t i = 0; i < cones.size(); ++i) {
    for (std::size_t j = i + 1; j < cones.size(); ++j) {
      const double dot = cones[i].axis.coords().dot(cones[j].axis.coords());
      const double margin = std::cos(cones[i].half_angle + cones[j].half_angle) - dot;
      report.separations.push_back({i, j, margin});
      if (!(margin > 0.0)) {
        report.separation_ok = false;
        report.offending_pairs.emplace_back(i, j);
      }
    }
  }
  report.start_margins = sphere_margin(set, x0);
  report.target_margins = sphere_margin(set, xd);
  for (std::size_t i = 0; i < cones.size(); ++i) {
    if (report.start_margins[i] < kStartMarginTol) {
      report.start_in_free_space = false;
      report.offending_start.push_back(i);
    }
    if (report.target_margins[i] <= kInteriorMarginTol) {
      report.target_in_interior = false;
      report.offending_target.push_back(i);
    }
  }
  return report;
}

struct AlignedProblem {
  ConstraintSet set;
  UnitVector x0;
  UnitVector xd;
  MatrixXd rotation;
};

/// Premultiplies every axis plus the start/target by the alignment rotation,
/// so cone 0 sits on the pole. All pairwise angles are preserved.
inline AlignedProblem align(const ConstraintSet& set, const UnitVector& x0,
                            const UnitVector& xd) {
  const MatrixXd& rot = set.alignment();
  std::vector<ConicConstraint> rotated = set.aligned_constraints();
  return AlignedProblem{ConstraintSet(std::move(rotated)),
                        renormalize(rot * x0.coords()),
                        renormalize(rot * xd.coords()), rot};
}

/// Maps the cones to their chart image: a workspace ball of radius
/// cot(theta_0/2) and one ball per remaining cone with
///   c_i = a_i[1..n] / (cos(theta_i) - a_0^T a_i),
///   r_i = sin(theta_i) / (cos(theta_i) - a_0^T a_i),
/// evaluated in the aligned frame (a_0 = e_{n+1}).
inline SphereWorld to_sphere_world(const ConstraintSet& set) {
  const auto& cones = set.aligned_constraints();
  const Eigen::Index n = set.ambient_dim() - 1;
  SphereWorld world;
  world.workspace_radius = 1.0 / std::tan(cones[0].half_angle / 2.0);
  const VectorXd& a0 = cones[0].axis.coords();
  for (std::size_t i = 1; i < cones.size(); ++i) {
    const VectorXd& ai = cones[i].axis.coords();
    const double denom = std::cos(cones[i].half_angle) - a0.dot(ai);
    if (!(denom > 0.0)) {
      throw InconsistentConstraintsError(
          "cone " + std::to_string(i) +
          " is not separated from the workspace cone (did validation run?)");
    }
    world.obstacles.push_back(
        {EuclideanPoint(ai.head(n) / denom), std::sin(cones[i].half_angle) / denom});
  }
  return world;
}

}  // namespace spherenav
