#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spherenav/spherenav.hpp"

namespace {

// Exit-code contract: 0 success, 1 domain/validation/convergence failure,
// 2 input parse failure, 3 safety violation.
constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitParse = 2;
constexpr int kExitSafety = 3;

spherenav::ScenarioFile load_or_exit(const std::string& path) {
  auto file = spherenav::load_scenario(path);
  for (const auto& w : file.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  return file;
}

int cmd_validate(const std::string& path) {
  const auto file = load_or_exit(path);
  const auto report =
      spherenav::validate(file.scenario.set, file.scenario.x0, file.scenario.xd);
  std::cout << report.to_string();

  // Sampled rank check of the input matrix.
  std::mt19937_64 rng(7);
  double worst_tangency = 0.0;
  int rank_failures = 0;
  for (int s = 0; s < 200; ++s) {
    const auto x = spherenav::random_unit_vector_below(
        file.scenario.set.ambient_dim(), 0.999, rng);
    const Eigen::MatrixXd pi = file.scenario.model->pi_matrix(x);
    worst_tangency =
        std::max(worst_tangency, (x.coords().transpose() * pi).norm());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(pi);
    const Eigen::Index n = x.sphere_dim();
    if (svd.singularValues()[n - 1] < 1e-8) ++rank_failures;
  }
  const bool dynamics_ok = worst_tangency <= 1e-10 && rank_failures == 0;
  std::cout << "input matrix rank/tangency (200 samples): "
            << (dynamics_ok ? "ok" : "FAIL") << "\n";
  return (report.passed() && dynamics_ok) ? kExitOk : kExitFailure;
}

int cmd_world(const std::string& path, int scan_samples) {
  const auto file = load_or_exit(path);
  const auto report =
      spherenav::validate(file.scenario.set, file.scenario.x0, file.scenario.xd);
  if (!report.passed()) {
    std::cout << report.to_string();
    return kExitFailure;
  }
  const auto world = spherenav::to_sphere_world(file.scenario.set);
  std::printf("workspace radius: %.6f\n", world.workspace_radius);
  for (std::size_t i = 0; i < world.obstacles.size(); ++i) {
    const auto& obs = world.obstacles[i];
    std::printf("obstacle %zu: center (", i + 1);
    for (Eigen::Index j = 0; j < obs.center.size(); ++j) {
      std::printf("%s%.6f", j ? ", " : "", obs.center[j]);
    }
    std::printf("), radius %.6f\n", obs.radius);
  }
  for (std::size_t i = 0; i < world.obstacles.size(); ++i) {
    for (std::size_t j = i + 1; j < world.obstacles.size(); ++j) {
      const double clearance =
          (world.obstacles[i].center - world.obstacles[j].center).norm() -
          world.obstacles[i].radius - world.obstacles[j].radius;
      std::printf("clearance %zu-%zu: %.6f\n", i + 1, j + 1, clearance);
    }
    const double wall = world.workspace_radius - world.obstacles[i].center.norm() -
                        world.obstacles[i].radius;
    std::printf("clearance %zu-workspace: %.6f\n", i + 1, wall);
  }
  if (scan_samples > 0) {
    const auto xi_d = spherenav::project(
        file.scenario.set.to_aligned(file.scenario.xd));
    const auto flagged = spherenav::stationary_point_scan(
        world, xi_d, file.scenario.params, scan_samples, 7);
    std::printf("stationary-point scan (%d samples): %zu candidate(s)\n",
                scan_samples, flagged.size());
  }
  return kExitOk;
}

int cmd_simulate(const std::string& path, std::string out_path) {
  const auto file = load_or_exit(path);
  spherenav::Trajectory traj;
  try {
    traj = spherenav::simulate(file.scenario);
  } catch (const spherenav::InvalidScenarioError& e) {
    std::cerr << e.what() << "\n";
    return kExitFailure;
  }

  if (out_path.empty()) out_path = file.output_path;
  const bool multi = file.scenario.mode == spherenav::ControlMode::Multi;
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot open output path: " << out_path << "\n";
      return kExitFailure;
    }
    if (file.output_format == "json") {
      out << spherenav::trajectory_to_json(traj, multi).dump(2) << "\n";
    } else {
      spherenav::write_trajectory_csv(out, traj, multi);
    }
  }

  const auto& sm = traj.summary;
  std::printf("converged: %s\n", sm.converged ? "true" : "false");
  if (sm.t_converge) std::printf("t_converge: %.6f\n", *sm.t_converge);
  std::printf("final_distance: %.9g\n", sm.final_distance);
  std::printf("min_margin_overall: %.9g\n", sm.min_margin_overall);
  std::printf("max_control_norm: %.9g\n", sm.max_control_norm);
  if (sm.safety_violation) {
    std::cerr << sm.diagnostic << "\n";
    return kExitSafety;
  }
  return sm.converged ? kExitOk : kExitFailure;
}

int cmd_basin(const std::string& path, int starts, std::uint64_t seed, int jobs) {
  const auto file = load_or_exit(path);
  spherenav::BasinReport report;
  try {
    report = spherenav::basin_study(file.scenario, starts, seed, jobs);
  } catch (const spherenav::InvalidScenarioError& e) {
    std::cerr << e.what() << "\n";
    return kExitFailure;
  }
  std::printf("starts: %d\n", report.total);
  std::printf("converged_fraction: %.6f\n", report.converged_fraction());
  std::printf("safety_violations: %d\n", report.safety_violations);
  for (const auto& x : report.non_converged_starts) {
    std::printf("non_converged: (");
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      std::printf("%s%.9g", j ? ", " : "", x[j]);
    }
    std::printf(")\n");
  }
  return kExitOk;
}

int cmd_selfcheck(const std::vector<int>& dims, std::uint64_t seed, bool inject) {
  spherenav::SelfCheckOptions opt;
  if (!dims.empty()) opt.sphere_dims = dims;
  opt.seed = seed;
  opt.inject_fault = inject;
  bool all_ok = true;
  for (const auto& suite : spherenav::run_selfcheck(opt)) {
    std::printf("[%s] %s (worst %.3g, tol %.3g)%s%s\n",
                suite.passed ? "PASS" : "FAIL", suite.name.c_str(),
                suite.worst_error, suite.tolerance,
                suite.detail.empty() ? "" : " ", suite.detail.c_str());
    all_ok = all_ok && suite.passed;
  }
  return all_ok ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained stabilization on the unit n-sphere"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_path;
  std::uint64_t seed = 0;
  int jobs = 1;

  auto* validate_cmd = app.add_subcommand("validate", "Check scenario assumptions");
  validate_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")
      ->required();

  int scan_samples = 0;
  auto* world_cmd = app.add_subcommand("world", "Print the mapped sphere world");
  world_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  world_cmd->add_option("--scan-stationary", scan_samples,
                        "Sample count for the stationary-point diagnostic");

  auto* sim_cmd = app.add_subcommand("simulate", "Run the closed-loop simulation");
  sim_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  sim_cmd->add_option("--out", out_path, "Trajectory output path (overrides file)");

  int starts = 500;
  auto* basin_cmd = app.add_subcommand("basin", "Run a basin-of-attraction study");
  basin_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  basin_cmd->add_option("--starts", starts, "Number of start points");
  basin_cmd->add_option("--seed", seed, "Sampler seed");
  basin_cmd->add_option("--jobs", jobs, "Parallel simulations");

  std::vector<int> dims;
  bool inject = false;
  auto* check_cmd = app.add_subcommand("selfcheck", "Run the numeric invariant suites");
  check_cmd->add_option("--dims", dims, "Sphere dimensions to test");
  check_cmd->add_option("--seed", seed, "Sampler seed")->default_val(20240817);
  check_cmd->add_flag("--inject-fault", inject)->group("");  // test hook

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate_cmd) return cmd_validate(scenario_path);
    if (*world_cmd) return cmd_world(scenario_path, scan_samples);
    if (*sim_cmd) return cmd_simulate(scenario_path, out_path);
    if (*basin_cmd) return cmd_basin(scenario_path, starts, seed, jobs);
    if (*check_cmd) return cmd_selfcheck(dims, seed, inject);
  } catch (const spherenav::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
