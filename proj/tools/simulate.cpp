#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "avoid/harness.hpp"
#include "avoid/report.hpp"

namespace {

avoid::Disturbance parse_disturbance(const std::string& text) {
  std::stringstream in(text);
  std::string field;
  std::vector<double> v;
  while (std::getline(in, field, ',')) v.push_back(std::stod(field));
  if (v.size() != 3) throw std::invalid_argument("--disturb expects t,vx,vy");
  return {v[0], avoid::Vector2(v[1], v[2])};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate RRT*-based multicopter obstacle avoidance on a survey mission"};

  std::string scenario_name = "world1";
  double speed = 4.0;
  std::uint64_t seed = 1;
  int runs = 1;
  double dt = 0.02;
  std::string out_dir = "out";
  std::string config_path;
  double heading_rate = 0.0;
  std::string disturb;

  app.add_option("--scenario", scenario_name, "world1 | world2 | empty | scenario file")
      ->capture_default_str();
  auto* speed_opt = app.add_option("--speed", speed, "Cruise speed v_cruise [m/s]")
                        ->capture_default_str();
  app.add_option("--seed", seed, "Seed of the first run")->capture_default_str();
  app.add_option("--runs", runs, "Number of runs (seeds seed, seed+1, ...)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  auto* dt_opt = app.add_option("--dt", dt, "Simulation step [s]")->capture_default_str();
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--config", config_path, "key = value parameter file")
      ->check(CLI::ExistingFile);
  auto* rate_opt = app.add_option("--heading-rate", heading_rate, "Heading slew limit [rad/s]");
  app.add_option("--disturb", disturb, "Velocity impulse t,vx,vy");

  CLI11_PARSE(app, argc, argv);

  avoid::Scenario scenario;
  try {
    if (scenario_name == "world1" || scenario_name == "world2" || scenario_name == "empty") {
      scenario = avoid::builtin_scenario(scenario_name);
    } else {
      scenario = avoid::load_scenario_file(scenario_name);
    }
    if (!config_path.empty()) avoid::apply_config_file(scenario, config_path);
    if (*speed_opt || config_path.empty()) scenario.dynamics.v_cruise = speed;
    if (*dt_opt) scenario.sim.dt = dt;
    if (*rate_opt) scenario.dynamics.heading_rate = heading_rate;
    if (!disturb.empty()) scenario.sim.disturbance = parse_disturbance(disturb);
    scenario.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  std::vector<avoid::RunMetrics> metrics;
  bool any_empty = false;
  try {
    for (int k = 0; k < runs; ++k) {
      const std::uint64_t run_seed = seed + static_cast<std::uint64_t>(k);
      const avoid::RunResult result = avoid::run(scenario, run_seed);
      const auto dir = std::filesystem::path(out_dir) /
                       (scenario.name + "_seed" + std::to_string(run_seed));
      any_empty = !avoid::emit_outputs(result, scenario, dir) || any_empty;
      const auto& m = result.metrics;
      std::cout << scenario.name << " seed=" << run_seed << " v_cruise="
                << scenario.dynamics.v_cruise << " end=" << m.end_reason
                << " d_trv=" << m.d_trv << " v_max=" << m.v_max
                << " v_avg_rrt=" << m.v_avg_rrt << " f_rrt=" << m.f_rrt_wall
                << "Hz expansions=" << m.expansions << '\n';
      metrics.push_back(m);
    }
    const avoid::BatchSummary summary = avoid::summarize(metrics);
    const auto summary_path = std::filesystem::path(out_dir) / "summary.txt";
    std::ofstream out(summary_path);
    if (!out) throw std::runtime_error("cannot open for writing: " + summary_path.string());
    avoid::write_batch_summary(summary, out);
    avoid::write_batch_summary(summary, std::cout);
    if (summary.collided > 0) return 2;
    if (summary.completed < summary.runs) return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return any_empty ? 1 : 0;
}
