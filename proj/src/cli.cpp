#include "pdde/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "pdde/config_io.hpp"
#include "pdde/model_zoo.hpp"

namespace pdde {

namespace {

constexpr const char* kToolVersion = "0.1.0";

std::string num17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json inequality_to_json(const Inequality& q) {
  json j;
  j["name"] = q.name;
  j["value"] = q.value;
  j["bound"] = q.bound;
  j["sense"] = q.sense;
  j["margin"] = q.margin;
  j["pass"] = q.pass;
  return j;
}

} // namespace

json report_to_json(const CriterionReport& r) {
  json j;
  j["theorem"] = to_string(r.theorem);
  j["pass"] = r.pass;
  j["margin"] = std::isfinite(r.margin) ? json(r.margin) : json("inf");
  j["v"] = r.v;
  j["grid_panels"] = r.grid_panels;
  if (r.chosen_eps > 0.0) j["chosen_eps"] = r.chosen_eps;
  if (!r.sweep.empty()) {
    json sw = json::array();
    for (const auto& s : r.sweep) {
      json e;
      e["eps"] = s.eps;
      e["pass"] = s.pass;
      e["margin"] = s.margin;
      sw.push_back(e);
    }
    j["sweep"] = sw;
  }
  json qs = json::array();
  for (const auto& q : r.inequalities) qs.push_back(inequality_to_json(q));
  j["inequalities"] = qs;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

json bounds_to_json(const std::vector<ComponentBounds>& b) {
  json arr = json::array();
  for (std::size_t i = 0; i < b.size(); ++i) {
    json j;
    j["component"] = i + 1;
    j["window_min"] = b[i].window_min;
    j["window_max"] = b[i].window_max;
    j["gain_min"] = b[i].gain_min;
    j["gain_max"] = b[i].gain_max;
    j["decay_period"] = b[i].decay_period;
    j["cone_sigma"] = b[i].cone_sigma;
    j["pw_mult_min"] = b[i].pw_mult_min;
    j["pw_mult_max"] = b[i].pw_mult_max;
    j["avg_mult_min"] = b[i].avg_mult_min;
    j["avg_mult_max"] = b[i].avg_mult_max;
    arr.push_back(j);
  }
  return arr;
}

json solve_to_json(const FixedPointResult& r) {
  json j;
  j["converged"] = r.converged;
  j["converged_positive"] = r.converged_positive();
  j["residual"] = r.residual;
  j["iterations"] = r.iterations;
  j["cone_ok"] = r.cone_ok;
  j["positivity_floor"] = r.positivity_floor;
  j["final_damping"] = r.final_damping;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

namespace {

void write_bounds_csv(std::ostream& os, const std::vector<ComponentBounds>& b) {
  os << "component,window_min,window_max,gain_min,gain_max,decay_period,"
        "cone_sigma,pw_mult_min,pw_mult_max,avg_mult_min,avg_mult_max\n";
  for (std::size_t i = 0; i < b.size(); ++i)
    os << i + 1 << ',' << num17(b[i].window_min) << ',' << num17(b[i].window_max)
       << ',' << num17(b[i].gain_min) << ',' << num17(b[i].gain_max) << ','
       << num17(b[i].decay_period) << ',' << num17(b[i].cone_sigma) << ','
       << num17(b[i].pw_mult_min) << ',' << num17(b[i].pw_mult_max) << ','
       << num17(b[i].avg_mult_min) << ',' << num17(b[i].avg_mult_max) << '\n';
}

void write_solution_csv(std::ostream& os, const GridFunction& x) {
  os << "t,side";
  for (int i = 0; i < x.n(); ++i) os << ",x" << i + 1;
  os << '\n';
  for (std::size_t m = 0; m < x.nodes(); ++m) {
    os << num17(x.node(m)) << ",left";
    for (int i = 0; i < x.n(); ++i) os << ',' << num17(x.left(m, i));
    os << '\n';
    if (x.is_jump(m)) {
      os << num17(x.node(m)) << ",right";
      for (int i = 0; i < x.n(); ++i) os << ',' << num17(x.right(m, i));
      os << '\n';
    }
  }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const int n = traj.history.n();
  os << "t";
  for (int i = 0; i < n; ++i) os << ",x" << i + 1;
  os << '\n';
  auto row = [&](double t, const std::vector<double>& y) {
    os << num17(t);
    for (double v : y) os << ',' << num17(v);
    os << '\n';
  };
  for (const auto& st : traj.steps) row(st.t0, st.y0);
  if (!traj.steps.empty())
    row(traj.steps.back().t0 + traj.steps.back().h, traj.steps.back().y1);
}

void write_events_csv(std::ostream& os, const Trajectory& traj) {
  const int n = traj.history.n();
  os << "t";
  for (int i = 0; i < n; ++i) os << ",before_x" << i + 1;
  for (int i = 0; i < n; ++i) os << ",after_x" << i + 1;
  os << '\n';
  for (const auto& ev : traj.events) {
    os << num17(ev.t);
    for (double v : ev.before) os << ',' << num17(v);
    for (double v : ev.after) os << ',' << num17(v);
    os << '\n';
  }
}

struct SpecSource {
  SystemSpec spec;
  std::string label;
};

SpecSource resolve_spec(const std::string& arg, std::optional<double> omega,
                        std::vector<double> eta) {
  if (arg.rfind("zoo:", 0) == 0) {
    const std::string id = arg.substr(4);
    if (id == "planar_autonomous") {
      const double w = omega.value_or(std::log(2.0) / 2.0);
      double e1 = 0.2, e2 = 0.2;
      if (eta.size() == 1) e1 = e2 = eta[0];
      if (eta.size() >= 2) {
        e1 = eta[0];
        e2 = eta[1];
      }
      return {planar_autonomous_example(w, e1, e2).spec, arg};
    }
    if (!eta.empty() || omega)
      throw ModelError("config",
                       "--eta/--omega apply to zoo:planar_autonomous only");
    return {zoo_get(id).spec, arg};
  }
  if (!eta.empty() || omega)
    throw ModelError("config", "--eta/--omega apply to zoo:planar_autonomous only");
  return {load_system_file(arg), arg};
}

json run_report_header(const std::string& subcommand, const SpecSource& src) {
  json j;
  j["tool"] = "pdde";
  j["version"] = kToolVersion;
  j["subcommand"] = subcommand;
  j["config"] = src.label;
  j["spec_digest"] = spec_digest(src.spec);
  return j;
}

void emit(std::ostream& out, const json& j, bool as_json) {
  if (as_json) {
    out << j.dump(2) << '\n';
  } else {
    out << j.dump(2) << '\n'; // human view mirrors the JSON payload
  }
}

GridFunction history_from_values(const SystemSpec& spec,
                                 const std::vector<double>& vals) {
  std::vector<double> v(std::size_t(spec.n), 1.0);
  if (vals.size() == 1) std::fill(v.begin(), v.end(), vals[0]);
  if (vals.size() >= std::size_t(spec.n))
    std::copy_n(vals.begin(), spec.n, v.begin());
  return GridFunction::constant(spec.omega, v, spec.impulses.instants, 64);
}

} // namespace

PipelineResult pipeline(const SystemSpec& spec, PipelineOptions opts) {
  PipelineResult pr;
  json stages;

  auto bounds = impulse_bounds(spec);
  stages["bounds"] = bounds_to_json(bounds);

  const TheoremId id = auto_theorem(spec);
  CheckOptions copts;
  copts.panels = opts.panels;
  CriterionReport rep = certify(spec, id, std::nullopt, spec.n > 1, copts);
  stages["certify"] = report_to_json(rep);

  if (!rep.pass) {
    pr.verdict = "not certified";
    stages["verdict"] = pr.verdict;
    pr.stages = stages;
    return pr;
  }

  SolveOptions sopts;
  sopts.panels = opts.panels;
  sopts.tol = opts.tol;
  sopts.max_iter = opts.max_iter;
  FixedPointResult fp = solve_fixed_point(spec, sopts);
  stages["solve"] = solve_to_json(fp);

  if (!fp.converged_positive()) {
    pr.verdict = "certified only";
    stages["verdict"] = pr.verdict;
    stages["note"] = "existence certified, computation inconclusive";
    pr.stages = stages;
    return pr;
  }

  // round-trip: integrate three periods from the computed orbit
  SimOptions simo;
  simo.step = opts.sim_step;
  Trajectory traj = integrate(spec, fp.solution, 3.0 * spec.omega, simo);
  double deviation = 0.0;
  const int probes = 768;
  for (int p = 0; p <= probes; ++p) {
    const double t = 3.0 * spec.omega * double(p) / double(probes);
    for (int i = 0; i < spec.n; ++i)
      deviation = std::max(
          deviation, std::abs(traj.value(i, t) - fp.solution.eval(i, t)));
  }
  const double resid = periodicity_residual(traj, spec.omega, 0.0);
  json sim;
  sim["deviation_over_3_periods"] = deviation;
  sim["periodicity_residual"] = resid;
  sim["positivity_floor"] = fp.positivity_floor;
  stages["simulate"] = sim;

  pr.verdict = "certified+computed";
  stages["verdict"] = pr.verdict;
  pr.stages = stages;
  return pr;
}

namespace cli {

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"periodic impulsive delay system toolkit"};
  app.require_subcommand(1);

  std::string config;
  bool as_json = false;
  std::string out_dir;
  std::optional<double> omega_opt;
  std::vector<double> eta;
  int grid = 512;

  auto add_common = [&](CLI::App* sc, bool needs_config) {
    if (needs_config)
      sc->add_option("config,--config", config, "config path or zoo:ID")
          ->required();
    sc->add_flag("--json", as_json, "machine-readable stdout");
    sc->add_option("--out", out_dir, "directory for CSV/JSON artifacts");
    sc->add_option("--grid", grid, "panels per period");
    sc->add_option("--omega", omega_opt, "period override (planar zoo entry)");
    sc->add_option("--eta", eta, "impulse sizes (planar zoo entry)");
  };

  auto* validate = app.add_subcommand("validate", "check a config");
  add_common(validate, true);

  auto* bounds_cmd = app.add_subcommand("bounds", "impulse bound table");
  add_common(bounds_cmd, true);

  auto* certify_cmd = app.add_subcommand("certify", "run one criterion");
  add_common(certify_cmd, true);
  std::string theorem_str;
  std::string v_str;
  bool search = false;
  certify_cmd->add_option("--theorem", theorem_str, "criterion id")->required();
  certify_cmd->add_option("--v", v_str, "scaling vector, comma separated");
  certify_cmd->add_flag("--search-v", search, "search a scaling vector");

  auto* solve_cmd = app.add_subcommand("solve", "operator iteration");
  add_common(solve_cmd, true);
  double tol = 1e-8, damping = 0.5;
  int max_iter = 2000;
  bool solve_plot = false;
  solve_cmd->add_option("--tol", tol, "residual tolerance");
  solve_cmd->add_option("--damping", damping, "initial damping");
  solve_cmd->add_option("--max-iter", max_iter, "iteration cap");
  solve_cmd->add_flag("--emit-plot-data", solve_plot,
                      "write CSV artifacts (default directory plot-data)");

  auto* sim_cmd = app.add_subcommand("simulate", "integrate the system");
  add_common(sim_cmd, true);
  double t_end = 0.0, step = 0.0, probe = -1.0, window = 0.0;
  std::string history_str;
  bool plot_data = false;
  sim_cmd->add_option("--t-end", t_end, "horizon (default 10 periods)");
  sim_cmd->add_option("--step", step, "target step size");
  sim_cmd->add_option("--history", history_str, "constant history values");
  sim_cmd->add_option("--probe", probe,
                      "periodicity probe start (default t-end minus 2 periods)");
  sim_cmd->add_option("--window", window, "floor window (default one period)");
  sim_cmd->add_flag("--emit-plot-data", plot_data,
                    "write CSV artifacts (default directory plot-data)");

  auto* zoo_cmd = app.add_subcommand("zoo", "built-in instances");
  std::string zoo_action, zoo_id;
  zoo_cmd->add_option("action", zoo_action, "list|emit")->required();
  zoo_cmd->add_option("id", zoo_id, "entry id");
  zoo_cmd->add_flag("--json", as_json);
  zoo_cmd->add_option("--out", out_dir);

  auto* pipe_cmd = app.add_subcommand("pipeline", "certify, solve, cross-check");
  add_common(pipe_cmd, true);
  pipe_cmd->add_option("--tol", tol, "residual tolerance");
  pipe_cmd->add_option("--max-iter", max_iter, "iteration cap");
  pipe_cmd->add_option("--step", step, "integrator step");

  std::vector<std::string> argv_copy(args);
  std::vector<const char*> argv;
  argv.push_back("pdde");
  for (const auto& a : argv_copy) argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) { // --help
      out << app.help();
      return 0;
    }
    err << "argument error: " << e.what() << '\n';
    return 2;
  }

  const auto wall_start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         wall_start)
        .count();
  };

  auto maybe_write = [&](const std::string& name, const std::string& text) {
    if (out_dir.empty()) return;
    std::filesystem::create_directories(out_dir);
    std::ofstream f(std::filesystem::path(out_dir) / name);
    f << text;
  };

  try {
    if (zoo_cmd->parsed()) {
      if (zoo_action == "list") {
        json j = json::array();
        for (const auto& id : zoo_ids()) j.push_back(id);
        emit(out, j, as_json);
        return 0;
      }
      if (zoo_action == "emit") {
        ZooEntry e = zoo_get(zoo_id);
        const json j = save_system(e.spec);
        emit(out, j, as_json);
        maybe_write(e.id + ".json", j.dump(2) + "\n");
        return 0;
      }
      err << "zoo action must be list or emit\n";
      return 2;
    }

    SpecSource src = resolve_spec(config, omega_opt, eta);

    if (validate->parsed()) {
      json j = run_report_header("validate", src);
      j["valid"] = true;
      j["n"] = src.spec.n;
      j["omega"] = src.spec.omega;
      emit(out, j, as_json);
      err << "wall_time_s " << elapsed() << '\n';
      return 0;
    }

    if (bounds_cmd->parsed()) {
      auto b = impulse_bounds(src.spec);
      json j = run_report_header("bounds", src);
      j["bounds"] = bounds_to_json(b);
      emit(out, j, as_json);
      std::ostringstream csv;
      write_bounds_csv(csv, b);
      maybe_write("bounds.csv", csv.str());
      err << "wall_time_s " << elapsed() << '\n';
      return 0;
    }

    if (certify_cmd->parsed()) {
      std::optional<std::vector<double>> v;
      if (!v_str.empty()) {
        std::vector<double> vv;
        std::stringstream ss(v_str);
        std::string tok;
        while (std::getline(ss, tok, ',')) vv.push_back(std::stod(tok));
        v = vv;
      }
      CheckOptions copts;
      copts.panels = grid;
      CriterionReport rep =
          certify(src.spec, theorem_from_string(theorem_str), v, search, copts);
      json j = run_report_header("certify", src);
      j["report"] = report_to_json(rep);
      emit(out, j, as_json);
      std::ostringstream csv;
      csv << "name,value,bound,sense,margin,pass\n";
      for (const auto& q : rep.inequalities)
        csv << q.name << ',' << num17(q.value) << ',' << num17(q.bound) << ','
            << q.sense << ',' << num17(q.margin) << ',' << (q.pass ? 1 : 0)
            << '\n';
      maybe_write("margins.csv", csv.str());
      err << "wall_time_s " << elapsed() << '\n';
      return rep.pass ? 0 : 1;
    }

    if (solve_cmd->parsed()) {
      if (solve_plot && out_dir.empty()) out_dir = "plot-data";
      SolveOptions sopts;
      sopts.panels = grid;
      sopts.tol = tol;
      sopts.damping = damping;
      sopts.max_iter = max_iter;
      FixedPointResult res = solve_fixed_point(src.spec, sopts);
      json j = run_report_header("solve", src);
      j["result"] = solve_to_json(res);
      emit(out, j, as_json);
      std::ostringstream csv;
      write_solution_csv(csv, res.solution);
      maybe_write("solution.csv", csv.str());
      err << "wall_time_s " << elapsed() << '\n';
      return res.converged_positive() ? 0 : 1;
    }

    if (sim_cmd->parsed()) {
      if (t_end <= 0.0) t_end = 10.0 * src.spec.omega;
      if (plot_data && out_dir.empty()) out_dir = "plot-data";
      std::vector<double> hist_vals;
      if (!history_str.empty()) {
        std::stringstream ss(history_str);
        std::string tok;
        while (std::getline(ss, tok, ',')) hist_vals.push_back(std::stod(tok));
      } else {
        hist_vals.push_back(1.0);
      }
      GridFunction hist = history_from_values(src.spec, hist_vals);
      SimOptions simo;
      simo.step = step;
      Trajectory traj = integrate(src.spec, hist, t_end, simo);
      if (window <= 0.0) window = src.spec.omega;
      const auto floors = long_run_floor(traj, window);
      json j = run_report_header("simulate", src);
      json summary;
      summary["t_end"] = t_end;
      summary["steps"] = traj.steps.size();
      summary["events"] = traj.events.size();
      summary["long_run_floor"] = floors;
      summary["worst_negative"] = traj.worst_negative;
      if (probe < 0.0) probe = t_end - 2.0 * src.spec.omega;
      if (probe >= 0.0 && probe + 2.0 * src.spec.omega <= t_end + 1e-9)
        summary["periodicity_residual"] =
            periodicity_residual(traj, src.spec.omega, probe);
      if (!traj.note.empty()) summary["note"] = traj.note;
      j["summary"] = summary;
      emit(out, j, as_json);
      std::ostringstream csv;
      write_trajectory_csv(csv, traj);
      maybe_write("trajectory.csv", csv.str());
      std::ostringstream ecsv;
      write_events_csv(ecsv, traj);
      maybe_write("events.csv", ecsv.str());
      err << "wall_time_s " << elapsed() << '\n';
      return traj.finite ? 0 : 1;
    }

    if (pipe_cmd->parsed()) {
      PipelineOptions popts;
      popts.panels = grid;
      popts.tol = tol;
      popts.max_iter = max_iter;
      popts.sim_step = step;
      PipelineResult res = pipeline(src.spec, popts);
      json j = run_report_header("pipeline", src);
      j["stages"] = res.stages;
      j["verdict"] = res.verdict;
      emit(out, j, as_json);
      err << "wall_time_s " << elapsed() << '\n';
      return res.verdict == "certified+computed" ? 0 : 1;
    }
  } catch (const ModelError& e) {
    json j;
    j["error"] = e.what();
    j["tag"] = e.tag();
    emit(out, j, true);
    err << "error " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  err << "no subcommand\n";
  return 2;
}

} // namespace cli

} // namespace pdde
