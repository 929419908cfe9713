#include "gibbscert/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

namespace gibbscert {

using nlohmann::json;

namespace {

bool wants(const ModelConfig& c, const char* suite) {
  return std::find(c.suites.begin(), c.suites.end(), suite) != c.suites.end();
}

}  // namespace

RunReport run_suite(const ModelConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  const ModelConfig c = canonicalize(config);
  const BuiltModel b = build_model(c);

  RunReport r;
  r.name = c.name;
  r.fingerprint = config_fingerprint(c);
  r.suites = c.suites;
  CheckOptions opts;
  opts.tol = c.tol;
  opts.trials = c.trials;
  opts.seed = c.seed;

  auto add = [&](Reports rs) {
    for (auto& x : rs) r.reports.push_back(std::move(x));
  };
  auto spectrum = [&](const std::string& name, const Pair& p) {
    const auto s = spectral_summary(p);
    r.spectra.push_back({name, static_cast<std::size_t>(p.size()), s.operator_norm, s.gap,
                         s.lambda_min, s.lambda_max, s.psd});
    return s;
  };

  if (b.slice) {
    const auto setting = two_block_setting(*b.slice);
    spectrum("S", setting.exact);
    spectrum("S_hat", setting.hybrid);
    add(check_da_sandwich(setting, opts));
    for (int t : c.t) {
      add(check_slice(*b.slice, t, opts));
      add(check_da_tstep(setting, t, opts));
      add(check_da_variance_t(setting, t, opts));
    }
  } else {
    const bool random_scan = wants(c, "random-scan") || wants(c, "selection") || wants(c, "supplement");
    if (random_scan) {
      const auto T = exact_random_scan(b.joint, b.selection);
      const auto sT = spectrum("T", T);
      spectrum("T_hat", hybrid_random_scan(b.joint, b.selection, b.spec));
      if (wants(c, "random-scan")) {
        add(check_theorem_dirichlet(b.joint, b.selection, b.spec, opts));
        add(check_corollary_gap(b.joint, b.selection, b.spec, opts));
        const Mat battery = test_battery(sT, b.joint.weights(), c.trials, c.seed);
        add(check_corollary_variance(b.joint, b.selection, b.spec, battery, opts));
      }
    }
    if (wants(c, "selection")) {
      spectrum("T_alt", exact_random_scan(b.joint, *b.selection_alt));
      spectrum("T_hat_alt", hybrid_random_scan(b.joint, *b.selection_alt, b.spec));
      add(check_selection_probs(b.joint, b.selection, *b.selection_alt, b.spec, opts));
      const auto probe = probe_selection_order(b.joint, b.selection, *b.selection_alt, b.spec);
      r.exploratory.push_back(
          {"selection.order_probe",
           "does gap T(p) >= gap T(p') imply gap T^(p) >= gap T^(p')?",
           {{"gap_exact", probe.gap_exact},
            {"gap_exact_alt", probe.gap_exact_alt},
            {"gap_hybrid", probe.gap_hybrid},
            {"gap_hybrid_alt", probe.gap_hybrid_alt},
            {"premise", probe.premise ? 1.0 : 0.0},
            {"conclusion", probe.conclusion ? 1.0 : 0.0}},
           probe.counterexample()});
    }
    if (wants(c, "supplement"))
      for (int t : c.t) add(check_supplementary_bound(b.joint, b.selection, b.spec, t, opts));
    if (wants(c, "da")) {
      const auto setting = two_block_setting(b.joint, b.spec);
      spectrum("S", setting.exact);
      spectrum("S_hat", setting.hybrid);
      add(check_da_sandwich(setting, opts));
      for (int t : c.t) {
        add(check_da_tstep(setting, t, opts));
        add(check_da_variance_t(setting, t, opts));
      }
    }
    if (wants(c, "block")) {
      std::set<std::size_t> sizes;
      for (auto [ell, m] : c.blocks) {
        sizes.insert(ell);
        sizes.insert(m);
      }
      for (auto k : sizes) spectrum("T_" + std::to_string(k), block_random_scan(b.joint, k));
      for (auto [ell, m] : c.blocks) add(check_block(b.joint, ell, m, opts));
    }
  }

  for (auto& x : r.reports) x.fingerprint = r.fingerprint;
  std::stable_sort(r.reports.begin(), r.reports.end(),
                   [](const BoundReport& a, const BoundReport& b) { return a.name < b.name; });
  std::stable_sort(r.spectra.begin(), r.spectra.end(),
                   [](const KernelSpectrum& a, const KernelSpectrum& b) { return a.name < b.name; });
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return r;
}

int exit_status(const RunReport& report) {
  for (const auto& x : report.reports)
    if (x.status == Status::fail) return 1;
  return 0;
}

std::string report_json(const RunReport& r, bool with_timing) {
  json j;
  j["name"] = r.name;
  j["fingerprint"] = r.fingerprint;
  j["suites"] = r.suites;
  std::size_t counts[3] = {0, 0, 0};
  json reports = json::array();
  for (const auto& x : r.reports) {
    ++counts[static_cast<int>(x.status)];
    reports.push_back({{"name", x.name},
                       {"lhs", x.lhs},
                       {"rhs", x.rhs},
                       {"slack", x.slack},
                       {"pass", x.pass},
                       {"status", to_string(x.status)},
                       {"tol", x.tol},
                       {"witness", x.witness},
                       {"fingerprint", x.fingerprint}});
  }
  j["reports"] = reports;
  j["counts"] = {{"pass", counts[0]}, {"fail", counts[1]}, {"hypothesis_unmet", counts[2]}};
  j["status"] = exit_status(r) == 0 ? "pass" : "fail";
  json spectra = json::array();
  for (const auto& s : r.spectra)
    spectra.push_back({{"name", s.name},
                       {"states", s.states},
                       {"operator_norm", s.operator_norm},
                       {"gap", s.gap},
                       {"lambda_min", s.lambda_min},
                       {"lambda_max", s.lambda_max},
                       {"psd", s.psd}});
  j["spectra"] = spectra;
  json ex = json::array();
  for (const auto& e : r.exploratory) {
    json values = json::object();
    for (const auto& [k, v] : e.values) values[k] = v;
    ex.push_back({{"name", e.name},
                  {"question", e.question},
                  {"values", values},
                  {"counterexample", e.counterexample},
                  {"certified", false}});
  }
  j["exploratory"] = ex;
  j["versions"] = {{"gibbscert", "0.1.0"},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                 std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
  if (with_timing) j["timing"] = {{"seconds", r.seconds}};
  return j.dump(2) + "\n";
}

std::string report_csv(const RunReport& r) {
  std::ostringstream out;
  out << "name,lhs,rhs,slack,status\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& x : r.reports)
    out << x.name << ',' << num(x.lhs) << ',' << num(x.rhs) << ',' << num(x.slack) << ','
        << to_string(x.status) << '\n';
  return out.str();
}

}  // namespace gibbscert
