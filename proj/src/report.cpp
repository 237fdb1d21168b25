#include "avoid/report.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace avoid {
namespace {

std::ofstream open_or_throw(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << std::setprecision(10);
  return out;
}

void close_or_throw(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

// Maps world coordinates onto an SVG canvas with y pointing up.
struct Canvas {
  Box2 box;
  double scale;

  double x(double wx) const { return (wx - box.min().x()) * scale; }
  double y(double wy) const { return (box.max().y() - wy) * scale; }
  double width() const { return box.sizes().x() * scale; }
  double height() const { return box.sizes().y() * scale; }
};

}  // namespace

void write_trace_csv(const std::vector<TraceRecord>& trace, std::ostream& out) {
  out << "t,x,y,vx,vy,speed,state,event\n";
  for (const TraceRecord& r : trace) {
    out << r.t << ',' << r.position.x() << ',' << r.position.y() << ','
        << r.velocity.x() << ',' << r.velocity.y() << ',' << r.speed << ','
        << r.state << ',' << r.event << '\n';
  }
}

void write_metrics(const RunMetrics& m, std::ostream& out) {
  out << "v_max = " << m.v_max << '\n'
      << "v_avg_rrt = " << m.v_avg_rrt << '\n'
      << "f_rrt_wall_hz = " << m.f_rrt_wall << '\n'
      << "f_rrt_sim_hz = " << m.f_rrt_sim << '\n'
      << "d_trv = " << m.d_trv << '\n'
      << "completed = " << (m.completed ? "true" : "false") << '\n'
      << "collided = " << (m.collided ? "true" : "false") << '\n'
      << "failed = " << (m.failed ? "true" : "false") << '\n'
      << "end_reason = " << m.end_reason << '\n'
      << "expansions = " << m.expansions << '\n'
      << "plan_calls = " << m.plan_calls << '\n'
      << "plan_successes = " << m.plan_successes << '\n'
      << "avoiding_time = " << m.avoiding_time << '\n'
      << "sim_time = " << m.sim_time << '\n'
      << "runtime = " << m.runtime << '\n'
      << "min_clearance = " << m.min_clearance << '\n'
      << "trace_checksum = " << std::hex << m.trace_checksum << std::dec << '\n';
}

void write_batch_summary(const BatchSummary& b, std::ostream& out) {
  auto row = [&](const char* key, const MetricSummary& s) {
    out << key << " = " << s.mean << " +- " << s.stddev << '\n';
  };
  out << "runs = " << b.runs << '\n';
  row("v_max", b.v_max);
  row("v_avg_rrt", b.v_avg_rrt);
  row("f_rrt_wall_hz", b.f_rrt_wall);
  row("f_rrt_sim_hz", b.f_rrt_sim);
  row("d_trv", b.d_trv);
  out << "cmpl = " << b.cmpl() << '\n'
      << "collisions = " << b.collided << '\n'
      << "failures = " << b.failed << '\n'
      << "single_sample = " << (b.single_sample ? "true" : "false") << '\n'
      << "wall_seconds = " << b.wall_seconds << '\n';
}

void write_trajectory_svg(const RunResult& result, const Scenario& scenario,
                          std::ostream& out) {
  const OccupancyGrid& grid = result.final_map;
  Canvas c{scenario.world.bounds(), 8.0};
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << c.width()
      << "\" height=\"" << c.height() << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const double cs = grid.cell_size();
  for (int j = 0; j < grid.height(); ++j) {
    for (int i = 0; i < grid.width(); ++i) {
      const CellState s = grid.at(CellIndex(i, j));
      if (s != CellState::Occupied && s != CellState::OuterRim) continue;
      const Point2 lo = grid.origin() + Vector2(i * cs, (j + 1) * cs);
      const int g = pgm_value(s);
      out << "<rect x=\"" << c.x(lo.x()) << "\" y=\"" << c.y(lo.y())
          << "\" width=\"" << cs * c.scale << "\" height=\"" << cs * c.scale
          << "\" fill=\"rgb(" << g << ',' << g << ',' << g << ")\"/>\n";
    }
  }
  for (const Obstacle& o : scenario.world.obstacles()) {
    out << "<polygon fill=\"none\" stroke=\"red\" points=\"";
    for (const Point2& v : o.vertices()) out << c.x(v.x()) << ',' << c.y(v.y()) << ' ';
    out << "\"/>\n";
  }
  out << "<polyline fill=\"none\" stroke=\"green\" stroke-dasharray=\"4\" points=\"";
  for (const Point2& p : scenario.mission.global_waypoints) {
    out << c.x(p.x()) << ',' << c.y(p.y()) << ' ';
  }
  out << "\"/>\n<polyline fill=\"none\" stroke=\"blue\" points=\"";
  for (const TraceRecord& r : result.trace) {
    out << c.x(r.position.x()) << ',' << c.y(r.position.y()) << ' ';
  }
  out << "\"/>\n</svg>\n";
}

void write_speed_svg(const RunResult& result, const Scenario& scenario,
                     std::ostream& out) {
  double x_min = result.trace.front().position.x();
  double x_max = x_min;
  for (const TraceRecord& r : result.trace) {
    x_min = std::min(x_min, r.position.x());
    x_max = std::max(x_max, r.position.x());
  }
  const double v_top = scenario.dynamics.v_cruise * 1.1;
  const double w = 800.0;
  const double h = 300.0;
  const double span = std::max(x_max - x_min, 1e-6);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<line x1=\"0\" x2=\"" << w << "\" y1=\""
      << h * (1.0 - scenario.dynamics.v_cruise / v_top) << "\" y2=\""
      << h * (1.0 - scenario.dynamics.v_cruise / v_top)
      << "\" stroke=\"gray\" stroke-dasharray=\"4\"/>\n"
      << "<polyline fill=\"none\" stroke=\"blue\" points=\"";
  for (const TraceRecord& r : result.trace) {
    out << w * (r.position.x() - x_min) / span << ','
        << h * (1.0 - r.speed / v_top) << ' ';
  }
  out << "\"/>\n</svg>\n";
}

bool emit_outputs(const RunResult& result, const Scenario& scenario,
                  const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create directory: " + out_dir.string());

  const auto csv_path = out_dir / "trace.csv";
  auto csv = open_or_throw(csv_path);
  write_trace_csv(result.trace, csv);
  close_or_throw(csv, csv_path);
  if (result.trace.empty()) return false;

  const auto metrics_path = out_dir / "metrics.txt";
  auto metrics = open_or_throw(metrics_path);
  write_metrics(result.metrics, metrics);
  close_or_throw(metrics, metrics_path);

  const auto pgm_path = out_dir / "map.pgm";
  auto pgm = open_or_throw(pgm_path);
  write_pgm(result.final_map, pgm);
  close_or_throw(pgm, pgm_path);

  const auto traj_path = out_dir / "trajectory.svg";
  auto traj = open_or_throw(traj_path);
  write_trajectory_svg(result, scenario, traj);
  close_or_throw(traj, traj_path);

  const auto speed_path = out_dir / "speed.svg";
  auto speed = open_or_throw(speed_path);
  write_speed_svg(result, scenario, speed);
  close_or_throw(speed, speed_path);
  return true;
}

}  // namespace avoid
