#pragma once

#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spherenav/simulator.hpp"

namespace spherenav {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScenarioFile {
  Scenario scenario;
  std::string output_path;
  std::string output_format = "csv";
  std::vector<std::string> warnings;
};

namespace detail {

inline VectorXd vector_from_json(const nlohmann::json& arr, const char* what) {
  if (!arr.is_array() || arr.empty()) {
    throw ParseError(std::string(what) + ": expected a nonempty array");
  }
  VectorXd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) v[i] = arr[i].get<double>();
  return v;
}

}  // namespace detail

inline ScenarioFile load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("scenario JSON parse failure: ") + e.what());
  }
  try {
    const Eigen::Index n = doc.at("dimension").get<Eigen::Index>();
    if (n < 1) throw ParseError("dimension must be >= 1");
    const Eigen::Index ambient = n + 1;

    const std::string dyn_type = doc.at("dynamics").at("type").get<std::string>();
    std::shared_ptr<const DynamicsModel> model;
    if (dyn_type == "spherical_pendulum") {
      if (n != 2) throw ParseError("spherical_pendulum requires dimension 2");
      model = std::make_shared<SphericalPendulum>();
    } else if (dyn_type == "full_tangent") {
      model = std::make_shared<FullTangent>(ambient);
    } else {
      throw ParseError("unknown dynamics type: " + dyn_type);
    }

    std::vector<std::string> warnings;
    auto load_axis = [&](const nlohmann::json& arr, const char* what) {
      VectorXd v = detail::vector_from_json(arr, what);
      if (v.size() != ambient) {
        throw ParseError(std::string(what) + ": expected " + std::to_string(ambient) +
                         " coordinates");
      }
      if (std::abs(v.norm() - 1.0) > 1e-6) {
        warnings.push_back(std::string(what) + " deviates from unit norm by " +
                           std::to_string(std::abs(v.norm() - 1.0)) +
                           "; normalized on load");
      }
      return UnitVector(std::move(v), UnitVector::Strictness::Normalize);
    };

    std::vector<ConicConstraint> cones;
    std::size_t idx = 0;
    for (const auto& entry : doc.at("constraints")) {
      const std::string label = "constraints[" + std::to_string(idx++) + "].axis";
      cones.emplace_back(load_axis(entry.at("axis"), label.c_str()),
                         entry.at("angle_rad").get<double>());
    }
    if (cones.empty()) throw ParseError("constraints: need at least one cone");

    Scenario scenario(std::move(model), ConstraintSet(std::move(cones)),
                      load_axis(doc.at("start"), "start"),
                      load_axis(doc.at("target"), "target"));

    const auto& ctrl = doc.at("controller");
    const std::string mode = ctrl.at("mode").get<std::string>();
    if (mode == "single") {
      scenario.mode = ControlMode::Single;
    } else if (mode == "multi") {
      scenario.mode = ControlMode::Multi;
    } else {
      throw ParseError("controller.mode must be \"single\" or \"multi\"");
    }
    scenario.params = NavParams(ctrl.at("gamma").get<double>(),
                                ctrl.value("k", 5.0));

    const auto& integ = doc.at("integration");
    scenario.dt = integ.at("dt").get<double>();
    scenario.t_end = integ.at("t_end").get<double>();
    scenario.convergence_tol = integ.at("convergence_tol").get<double>();
    scenario.record_stride = integ.value("record_stride", 1);
    scenario.check();

    ScenarioFile file{std::move(scenario), "", "csv", std::move(warnings)};
    if (doc.contains("output")) {
      file.output_path = doc["output"].value("path", "");
      file.output_format = doc["output"].value("format", "csv");
      if (file.output_format != "csv" && file.output_format != "json") {
        throw ParseError("output.format must be \"csv\" or \"json\"");
      }
    }
    return file;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("scenario JSON structure failure: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("scenario value failure: ") + e.what());
  }
}

namespace detail {

// %.17g keeps the double round trip lossless.
inline std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                                 bool multi_mode) {
  if (traj.samples.empty()) return;
  const auto& first = traj.samples.front();
  out << "t";
  for (Eigen::Index i = 0; i < first.x.size(); ++i) out << ",x_" << i;
  for (Eigen::Index i = 0; i < first.xi.size(); ++i) out << ",xi_" << i;
  for (Eigen::Index i = 0; i < first.u.size(); ++i) out << ",u_" << i;
  if (multi_mode) out << ",phi";
  out << ",min_margin\n";
  for (const auto& s : traj.samples) {
    out << detail::num17(s.t);
    for (Eigen::Index i = 0; i < s.x.size(); ++i) out << "," << detail::num17(s.x[i]);
    for (Eigen::Index i = 0; i < s.xi.size(); ++i) out << "," << detail::num17(s.xi[i]);
    for (Eigen::Index i = 0; i < s.u.size(); ++i) out << "," << detail::num17(s.u[i]);
    if (multi_mode) out << "," << detail::num17(s.phi.value());
    out << "," << detail::num17(s.min_margin) << "\n";
  }
}

inline nlohmann::json trajectory_to_json(const Trajectory& traj, bool multi_mode) {
  nlohmann::json doc;
  doc["samples"] = nlohmann::json::array();
  for (const auto& s : traj.samples) {
    nlohmann::json row;
    row["t"] = s.t;
    row["x"] = std::vector<double>(s.x.data(), s.x.data() + s.x.size());
    row["xi"] = std::vector<double>(s.xi.data(), s.xi.data() + s.xi.size());
    row["u"] = std::vector<double>(s.u.data(), s.u.data() + s.u.size());
    if (multi_mode) row["phi"] = s.phi.value();
    row["min_margin"] = s.min_margin;
    doc["samples"].push_back(std::move(row));
  }
  const auto& sm = traj.summary;
  doc["summary"] = {{"converged", sm.converged},
                    {"final_distance", sm.final_distance},
                    {"min_margin_overall", sm.min_margin_overall},
                    {"max_control_norm", sm.max_control_norm},
                    {"safety_violation", sm.safety_violation}};
  if (sm.t_converge) doc["summary"]["t_converge"] = *sm.t_converge;
  return doc;
}

}  // namespace spherenav
