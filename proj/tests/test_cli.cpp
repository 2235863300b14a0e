#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "spherenav/benchmarks.hpp"
#include "spherenav/scenario_io.hpp"

namespace fs = std::filesystem;
using namespace spherenav;

namespace {

const std::string kCli = SPHERENAV_CLI_PATH;
const fs::path kScenarios = SPHERENAV_SCENARIO_DIR;

int run(const std::string& args) {
  const int status = std::system((kCli + " " + args + " > /dev/null 2>&1").c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

fs::path tmp_dir() {
  const fs::path dir = fs::temp_directory_path() / "spherenav_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("validate exit codes") {
  CHECK(run("validate --scenario " + (kScenarios / "pendulum_five_cones.json").string()) == 0);

  const fs::path bad = tmp_dir() / "malformed.json";
  std::ofstream(bad) << "{ not json";
  CHECK(run("validate --scenario " + bad.string()) == 2);
  CHECK(run("validate --scenario " + (tmp_dir() / "missing.json").string()) == 2);

  // Overlapping cones: same axis twice.
  const fs::path overlap = tmp_dir() / "overlap.json";
  std::ofstream(overlap) << R"({
    "dimension": 2,
    "dynamics": {"type": "spherical_pendulum"},
    "constraints": [
      {"axis": [0, 0, 1], "angle_rad": 0.4},
      {"axis": [1, 0, 0], "angle_rad": 0.3},
      {"axis": [1, 0, 0], "angle_rad": 0.2}
    ],
    "start": [-0.7071067811865476, 0, 0.7071067811865476],
    "target": [0.3333333333333333, 0.6666666666666666, -0.6666666666666666],
    "controller": {"mode": "multi", "gamma": 5.0, "k": 5.0},
    "integration": {"dt": 0.001, "t_end": 5.0, "convergence_tol": 0.001}
  })";
  CHECK(run("validate --scenario " + overlap.string()) == 1);
}

TEST_CASE("world prints the mapped geometry") {
  const fs::path out = tmp_dir() / "world.txt";
  const int status = std::system(
      (kCli + " world --scenario " + (kScenarios / "pendulum_five_cones.json").string() +
       " > " + out.string()).c_str());
  REQUIRE(WEXITSTATUS(status) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("workspace radius: 4.381286") != std::string::npos);
  CHECK(text.find("1.082392") != std::string::npos);
  CHECK(text.find("0.414214") != std::string::npos);
}

TEST_CASE("world output is rotation invariant") {
  // The same cones expressed with the workspace axis on e1 instead of e3.
  const fs::path rotated = tmp_dir() / "rotated.json";
  std::ofstream(rotated) << R"({
    "dimension": 2,
    "dynamics": {"type": "spherical_pendulum"},
    "constraints": [
      {"axis": [1, 0, 0], "angle_rad": 0.4487989505128276},
      {"axis": [0, 0, -1], "angle_rad": 0.39269908169872414},
      {"axis": [0, 0, 1], "angle_rad": 0.3490658503988659},
      {"axis": [0, 1, 0], "angle_rad": 0.3141592653589793},
      {"axis": [0, -1, 0], "angle_rad": 0.2855993321445266}
    ],
    "start": [0.7071067811865476, 0, 0.7071067811865476],
    "target": [-0.6666666666666666, 0.6666666666666666, -0.3333333333333333],
    "controller": {"mode": "multi", "gamma": 5.0, "k": 5.0},
    "integration": {"dt": 0.001, "t_end": 5.0, "convergence_tol": 0.001}
  })";
  const fs::path out = tmp_dir() / "world_rot.txt";
  const int status = std::system(
      (kCli + " world --scenario " + rotated.string() + " > " + out.string()).c_str());
  REQUIRE(WEXITSTATUS(status) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("workspace radius: 4.381286") != std::string::npos);
  CHECK(text.find("radius 0.414214") != std::string::npos);
}

TEST_CASE("simulate writes a lossless CSV") {
  const fs::path csv = tmp_dir() / "single.csv";
  CHECK(run("simulate --scenario " + (kScenarios / "single_cone.json").string() +
            " --out " + csv.string()) == 0);

  // Header must list exactly t, x, xi, u, min_margin (no phi in single mode).
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,x_0,x_1,x_2,xi_0,xi_1,u_0,u_1,u_2,min_margin");

  // Round trip: parsed numbers reproduce the in-memory run bit for bit.
  auto file = load_scenario((kScenarios / "single_cone.json").string());
  const auto traj = simulate(file.scenario);
  std::size_t row = 0;
  std::string line;
  while (std::getline(in, line)) {
    REQUIRE(row < traj.samples.size());
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    REQUIRE(vals.size() == 10);
    const auto& s = traj.samples[row];
    CHECK(vals[0] == s.t);
    for (int i = 0; i < 3; ++i) CHECK(vals[1 + i] == s.x[i]);
    for (int i = 0; i < 2; ++i) CHECK(vals[4 + i] == s.xi[i]);
    for (int i = 0; i < 3; ++i) CHECK(vals[6 + i] == s.u[i]);
    CHECK(vals[9] == s.min_margin);
    ++row;
  }
  CHECK(row == traj.samples.size());
}

TEST_CASE("simulate refuses a target inside a cone") {
  const fs::path bad = tmp_dir() / "bad_target.json";
  std::ofstream(bad) << R"({
    "dimension": 2,
    "dynamics": {"type": "spherical_pendulum"},
    "constraints": [
      {"axis": [0, 0, 1], "angle_rad": 0.4487989505128276},
      {"axis": [1, 0, 0], "angle_rad": 0.39269908169872414}
    ],
    "start": [-0.7071067811865476, 0, 0.7071067811865476],
    "target": [1, 0, 0],
    "controller": {"mode": "multi", "gamma": 5.0, "k": 5.0},
    "integration": {"dt": 0.001, "t_end": 5.0, "convergence_tol": 0.001}
  })";
  CHECK(run("simulate --scenario " + bad.string()) == 1);
}

TEST_CASE("selfcheck passes by default and fails under fault injection") {
  CHECK(run("selfcheck") == 0);
  CHECK(run("selfcheck --inject-fault") == 1);
  CHECK(run("selfcheck --dims 1") == 0);
}

TEST_CASE("basin with a single start behaves like one simulation") {
  const fs::path out = tmp_dir() / "basin.txt";
  const int status = std::system(
      (kCli + " basin --scenario " + (kScenarios / "single_cone.json").string() +
       " --starts 1 > " + out.string()).c_str());
  REQUIRE(WEXITSTATUS(status) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("starts: 1") != std::string::npos);
  CHECK(text.find("converged_fraction: 1.000000") != std::string::npos);
  CHECK(text.find("safety_violations: 0") != std::string::npos);
}

TEST_CASE("non-normalized axes load with a warning") {
  const fs::path scaled = tmp_dir() / "scaled_axis.json";
  std::ofstream(scaled) << R"({
    "dimension": 2,
    "dynamics": {"type": "spherical_pendulum"},
    "constraints": [
      {"axis": [0, 0, 2], "angle_rad": 0.4487989505128276}
    ],
    "start": [-0.7071067811865476, 0, 0.7071067811865476],
    "target": [0.3333333333333333, 0.6666666666666666, -0.6666666666666666],
    "controller": {"mode": "single", "gamma": 5.0, "k": 5.0},
    "integration": {"dt": 0.001, "t_end": 5.0, "convergence_tol": 0.001}
  })";
  const auto file = load_scenario(scaled.string());
  CHECK(file.warnings.size() == 1);
  CHECK(file.scenario.set.constraints()[0].axis.coords()[2] == doctest::Approx(1.0));
}
