#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gibbscert/runner.hpp"
#include "gibbscert/sim.hpp"

namespace gibbscert {

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  f << text;
}

std::string csv_path(const std::string& json_path) {
  const auto dot = json_path.rfind('.');
  const auto slash = json_path.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return json_path + ".csv";
  return json_path.substr(0, dot) + ".csv";
}

std::vector<int> parse_t_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != item.size() || v < 1 || v > 4096)
      throw Error(ErrorCode::InvalidArgument, "--t expects positive integers, got '" + item + "'");
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "--t is empty");
  return out;
}

// coord:<i> is the value of coordinate i; vector:<csv> lists f state by state.
Vec parse_function(const std::string& spec, const JointDistribution& joint) {
  const std::size_t states = joint.total();
  if (spec.rfind("coord:", 0) == 0) {
    std::size_t pos = 0, i = 0;
    try {
      i = std::stoull(spec.substr(6), &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != spec.size() - 6 || i >= joint.dims())
      throw Error(ErrorCode::InvalidArgument,
                  "--f coord:<i> needs i < " + std::to_string(joint.dims()) + ", got '" + spec + "'");
    Vec f(static_cast<Index>(states));
    for (std::size_t x = 0; x < states; ++x)
      f[static_cast<Index>(x)] = static_cast<double>(joint.space().coordinate(x, i));
    return f;
  }
  if (spec.rfind("vector:", 0) == 0) {
    std::vector<double> v;
    std::stringstream ss(spec.substr(7));
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::size_t pos = 0;
      double d = 0;
      try {
        d = std::stod(item, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos == 0 || pos != item.size())
        throw Error(ErrorCode::InvalidArgument, "--f vector: bad entry '" + item + "'");
      v.push_back(d);
    }
    if (v.size() != states)
      throw Error(ErrorCode::InvalidArgument, "--f vector has " + std::to_string(v.size()) +
                                                  " entries; expected " + std::to_string(states));
    return Eigen::Map<Vec>(v.data(), static_cast<Index>(v.size()));
  }
  throw Error(ErrorCode::InvalidArgument, "--f expects coord:<i> or vector:<csv>");
}

int emit_run(const RunReport& run, const std::string& out_path, std::ostream& out, std::ostream& err) {
  const std::string text = report_json(run);
  if (out_path.empty()) {
    out << text;
  } else {
    write_file(out_path, text);
    write_file(csv_path(out_path), report_csv(run));
  }
  std::size_t fails = 0, unmet = 0;
  for (const auto& r : run.reports) {
    fails += r.status == Status::fail;
    unmet += r.status == Status::hypothesis_unmet;
  }
  err << run.reports.size() << " checks: " << run.reports.size() - fails - unmet << " pass, "
      << unmet << " hypothesis_unmet, " << fails << " fail\n";
  return exit_status(run);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certified comparison bounds for hybrid Gibbs samplers on finite spaces", "gibbscert"};
  app.require_subcommand(1);

  std::string config_path, out_path, suite = "all", t_list, kernel = "hybrid", f_spec, demo_name,
                                     trajectory_path;
  double tol = -1;
  std::size_t steps = 100000, batch = 0;
  std::uint64_t seed = 0;
  bool run_demo = false;

  auto* analyze = app.add_subcommand("analyze", "Run every applicable suite for a config");
  analyze->add_option("config", config_path, "Config file (JSON)")->required();
  analyze->add_option("--out", out_path, "Write report JSON here and a CSV beside it");

  auto* check = app.add_subcommand("check", "Run one suite (or all) with optional overrides");
  check->add_option("config", config_path, "Config file (JSON)")->required();
  check->add_option("--suite", suite, "Suite to run")
      ->check(CLI::IsMember({"random-scan", "da", "block", "slice", "selection", "supplement", "all"}));
  check->add_option("--t", t_list, "Comma-separated t values, e.g. 2,4,8");
  check->add_option("--tol", tol, "Certification tolerance");
  check->add_option("--out", out_path, "Write report JSON here and a CSV beside it");

  auto* simulate_cmd = app.add_subcommand("simulate", "Cross-validate the asymptotic variance by simulation");
  simulate_cmd->add_option("config", config_path, "Config file (JSON)")->required();
  simulate_cmd->add_option("--kernel", kernel, "exact or hybrid")->check(CLI::IsMember({"exact", "hybrid"}));
  simulate_cmd->add_option("--steps", steps, "Chain length");
  simulate_cmd->add_option("--seed", seed, "Generator seed");
  simulate_cmd->add_option("--f", f_spec, "coord:<i> or vector:<csv>")->required();
  simulate_cmd->add_option("--batch", batch, "Batch size (default steps/100)");
  simulate_cmd->add_option("--trajectory", trajectory_path, "Export the trajectory here");

  auto* demo = app.add_subcommand("demo", "Print a builtin demo config, or run it");
  demo->add_option("name", demo_name, "Demo name")->required();
  demo->add_flag("--run", run_demo, "Run the demo's suites and print the report");
  demo->add_option("--out", out_path, "With --run: write report JSON here and a CSV beside it");

  auto* list = app.add_subcommand("list-demos", "List builtin demos");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const auto parsed = app.get_subcommands();
    out << (parsed.empty() ? app.help() : parsed.front()->help());
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*list) {
      for (const auto& n : list_demos()) out << n << "\n";
      return 0;
    }
    if (*demo) {
      const auto config = demo_config(demo_name);
      if (!run_demo) {
        out << serialize(config);
        return 0;
      }
      return emit_run(run_suite(config), out_path, out, err);
    }
    ModelConfig config = parse_config(config_path);
    if (*analyze) return emit_run(run_suite(config), out_path, out, err);
    if (*check) {
      config.suites = {suite};
      if (!t_list.empty()) config.t = parse_t_list(t_list);
      if (tol >= 0) config.tol = tol;
      return emit_run(run_suite(canonicalize(config)), out_path, out, err);
    }
    // simulate
    const auto built = build_model(config);
    Pair rev;
    if (built.slice)
      rev = kernel == "exact" ? slice_exact(*built.slice) : slice_hybrid(*built.slice);
    else
      rev = kernel == "exact" ? exact_random_scan(built.joint, built.selection)
                              : hybrid_random_scan(built.joint, built.selection, built.spec);
    const Vec f = parse_function(f_spec, built.joint);
    const auto result = cross_check_variance(rev, f, steps, seed, batch);
    if (!trajectory_path.empty()) {
      std::ofstream tf(trajectory_path);
      if (!tf) throw Error(ErrorCode::InvalidArgument, "cannot write " + trajectory_path);
      write_trajectory(tf, simulate(rev, rev.stationary(), steps, seed));
    }
    nlohmann::json j;
    j["fingerprint"] = config_fingerprint(config);
    j["kernel"] = kernel;
    j["kernel_fingerprint"] = kernel_fingerprint(rev.kernel());
    j["steps"] = steps;
    j["seed"] = seed;
    j["batch"] = result.estimate.batch;
    j["batches"] = result.estimate.batches;
    j["estimate"] = result.estimate.estimate;
    j["standard_error"] = result.estimate.standard_error;
    j["exact"] = result.exact;
    j["status"] = to_string(result.report.status);
    j["lhs"] = result.report.lhs;
    j["rhs"] = result.report.rhs;
    out << j.dump(2) << "\n";
    return result.report.pass ? 0 : 1;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace gibbscert
