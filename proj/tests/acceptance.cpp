// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gibbscert/random_models.hpp"
#include "gibbscert/runner.hpp"
#include "gibbscert/sim.hpp"
#include "oracles.hpp"

using namespace gibbscert;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool all_ok(const Reports& rs, double* worst = nullptr) {
  bool ok = true;
  for (const auto& r : rs) {
    if (r.status == Status::fail) ok = false;
    if (worst && r.status == Status::pass) *worst = std::min(*worst, r.slack);
  }
  return ok;
}

const KernelSpectrum* find_spectrum(const RunReport& r, const std::string& name) {
  for (const auto& s : r.spectra)
    if (s.name == name) return &s;
  return nullptr;
}

std::vector<std::size_t> random_sizes(SplitMix64& rng, std::size_t n_min, std::size_t n_max,
                                      std::size_t d_max) {
  const std::size_t n = n_min + rng.below(n_max - n_min + 1);
  std::vector<std::size_t> s(n);
  for (auto& d : s) d = 2 + rng.below(d_max - 1);
  return s;
}

// Squaring keeps reversibility and makes every explicit Q psd.
ApproximatorSpec squared(ApproximatorSpec spec) {
  for (auto& [i, rule] : spec.overrides)
    for (auto& [y, m] : rule.matrices) m = m * m;
  return spec;
}

Outcome criterion1() {
  Outcome o;
  struct Want {
    const char* demo;
    const char* kernel;
    double norm;
  };
  const Want wants[] = {{"two-coin", "T", 0.5},
                        {"three-coin-block", "T_1", 2.0 / 3},
                        {"three-coin-block", "T_2", 1.0 / 3},
                        {"two-point-slice", "S", 0.25}};
  double slowest = 0;
  for (const auto& w : wants) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto run = run_suite(demo_config(w.demo));
    const double dt = seconds_since(t0);
    slowest = std::max(slowest, dt);
    const auto* s = find_spectrum(run, w.kernel);
    if (!s || std::abs(s->operator_norm - w.norm) > 1e-10 || dt >= 1.0 || exit_status(run) != 0) {
      o.ok = false;
      o.detail += fmt("%s/%s off; ", w.demo, w.kernel);
    }
  }
  o.detail += fmt("norms 0.5, 2/3, 1/3, 0.25 within 1e-10; slowest run %.3fs", slowest);
  return o;
}

Outcome criterion2() {
  Outcome o;
  SplitMix64 rng(20201);
  const auto t0 = std::chrono::steady_clock::now();
  int psd_cases = 0;
  double worst = 1e300;
  for (int k = 0; k < 200; ++k) {
    const auto joint = random_joint(random_sizes(rng, 1, 3, 4), rng);
    auto spec = random_explicit_spec(joint, rng);
    if (k % 2 == 1) spec = squared(spec);
    const auto p = random_selection(joint.dims(), rng);
    const auto reports = check_corollary_gap(joint, p, spec);
    o.ok = o.ok && all_ok(reports, &worst);
    // Independent eigen oracle on the same kernels.
    const double g = oracle::gap(exact_random_scan(joint, p).kernel().matrix());
    const double gh = oracle::gap(hybrid_random_scan(joint, p, spec).kernel().matrix());
    const auto q = approx_quality(joint, spec);
    o.ok = o.ok && (1 - q.C) * g <= gh + 1e-9 && gh <= (1 + q.C) * g + 1e-9;
    if (q.all_psd) {
      ++psd_cases;
      o.ok = o.ok && gh <= g + 1e-9;
      for (const auto& r : reports)
        if (r.name == "random_scan.gap_upper") o.ok = o.ok && r.witness == "psd-tightened";
    }
  }
  const double dt = seconds_since(t0);
  o.ok = o.ok && dt < 30 && psd_cases >= 50;
  o.detail = fmt("200 models, min slack %.3g, %d psd-tightened, %.2fs", worst, psd_cases, dt);
  return o;
}

Outcome criterion3() {
  Outcome o;
  SplitMix64 rng(303);
  double worst = 0;
  for (int k = 0; k < 20; ++k) {
    const auto joint = random_joint(random_sizes(rng, 2, 3, 4), rng);
    const auto p = random_selection(joint.dims(), rng);
    const double g = spectral_summary(exact_random_scan(joint, p)).gap;
    for (double eps : {0.1, 0.5, 0.9}) {
      const double gh =
          spectral_summary(hybrid_random_scan(joint, p, ApproximatorSpec::all(ApproximatorRule::lazy(eps)))).gap;
      worst = std::max(worst, std::abs(gh - (1 - eps) * g));
    }
  }
  o.ok = worst <= 1e-10;
  o.detail = fmt("20 models x 3 eps, max |gap_hat - (1-eps) gap| = %.3g", worst);
  return o;
}

Outcome criterion4() {
  Outcome o;
  SplitMix64 rng(404);
  double worst = 1e300;
  for (int k = 0; k < 100; ++k) {
    const auto joint = random_joint(random_sizes(rng, 2, 3, 4), rng);
    const auto spec = random_explicit_spec(joint, rng);
    const auto p = random_selection(joint.dims(), rng);
    CheckOptions opts;
    opts.trials = 64;
    opts.seed = static_cast<std::uint64_t>(k);
    o.ok = o.ok && all_ok(check_theorem_dirichlet(joint, p, spec, opts), &worst);
  }
  o.ok = o.ok && worst >= -1e-9;
  o.detail = fmt("100 models, eigenvectors + 64 random f each, min slack %.3g", worst);
  return o;
}

Outcome criterion5() {
  Outcome o;
  SplitMix64 rng(505);
  double worst = 1e300;
  int lazy_count = 0, explicit_count = 0;
  for (int k = 0; k < 100; ++k) {
    const auto joint = random_joint({2 + rng.below(3), 2 + rng.below(3)}, rng);
    // Q_{1,z} per z: lazy with a random epsilon, or a random reversible matrix.
    std::map<std::size_t, Mat> table;
    for (std::size_t z = 0; z < joint.space().size(1); ++z) {
      const std::size_t block[] = {0};
      if (!(slice_mass(joint, block, z) > 0)) continue;
      const auto cond = conditional(joint, 0, z);
      if (rng.uniform() < 0.5) {
        table[z] = rule_kernel(ApproximatorRule::lazy(rng.uniform()), cond).matrix();
        ++lazy_count;
      } else {
        table[z] = random_reversible_kernel(cond, rng);
        ++explicit_count;
      }
    }
    ApproximatorSpec spec;
    spec.overrides[0] = ApproximatorRule::explicit_matrix(table);
    const auto setting = two_block_setting(joint, spec);
    const auto gamma = gamma_from_norms(setting);
    for (int t : {2, 4, 6}) {
      o.ok = o.ok && all_ok(check_da_tstep(setting, t), &worst);
      o.ok = o.ok && alpha_t(setting, gamma, t) <= beta_t(setting, gamma, t) + 1e-12;
    }
  }
  o.ok = o.ok && worst >= -1e-9;
  o.detail = fmt("100 models (%d lazy, %d explicit Q_{1,z}), t in {2,4,6}, min slack %.3g, alpha_t <= beta_t",
                 lazy_count, explicit_count, worst);
  return o;
}

Outcome criterion6() {
  Outcome o;
  SplitMix64 rng(606);
  double worst = 1e300;
  for (int k = 0; k < 100; ++k) {
    std::vector<std::size_t> sizes(4);
    for (auto& d : sizes) d = 2 + rng.below(2);
    const auto joint = random_joint(sizes, rng);
    CheckOptions opts;
    opts.trials = 16;
    opts.seed = static_cast<std::uint64_t>(k);
    for (auto [ell, m] : {std::pair<std::size_t, std::size_t>{2, 1}, {3, 1}, {3, 2}})
      o.ok = o.ok && all_ok(check_block(joint, ell, m, opts), &worst);
  }
  const auto coins = build_model(demo_config("three-coin-block")).joint;
  const double c1 = block_c1(coins, 2, 1);
  const double g2 = spectral_summary(block_random_scan(coins, 2)).gap;
  const double g1 = spectral_summary(block_random_scan(coins, 1)).gap;
  const double defect = std::abs(c1 * g2 - g1);
  o.ok = o.ok && worst >= -1e-9 && defect <= 1e-10;
  o.detail = fmt("100 four-coordinate models x 3 pairs, min slack %.3g; three coins c1 = %.12g, |c1 gap2 - gap1| = %.3g",
                 worst, c1, defect);
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto demo = build_model(demo_config("two-point-slice"));
  const auto& model = *demo.slice;
  const auto setting = two_block_setting(model);
  const auto gamma = gamma_from_norms(setting);
  double prev = 2;
  for (int t : {2, 4, 8, 16}) {
    o.ok = o.ok && all_ok(check_slice(model, t));
    const double a = alpha_t(model, gamma, t);
    o.ok = o.ok && a <= prev;
    prev = a;
  }
  // max gamma = 0.93 on the two-level model.
  SliceModel tight({2, 1});
  tight.set_level_rules({ApproximatorRule::lazy(0.93), ApproximatorRule::exact()});
  const auto g93 = gamma_from_norms(two_block_setting(tight));
  double max_gamma = 0;
  for (double g : g93.values) max_gamma = std::max(max_gamma, g);
  double last = 2;
  for (int t = 1; t <= 64; ++t) {
    const double a = alpha_t(tight, g93, t);
    o.ok = o.ok && a <= last;
    last = a;
  }
  o.ok = o.ok && max_gamma <= 0.93 + 1e-12 && last < 1e-2;
  o.detail = fmt("t in {2,4,8,16} pass, alpha decreasing; max gamma %.3g gives alpha_64 = %.4g", max_gamma, last);
  return o;
}

Outcome criterion8() {
  Outcome o;
  SplitMix64 rng(808);
  double worst = 1e300;
  int dominance_cases = 0;
  for (int k = 0; k < 100; ++k) {
    const auto joint = random_joint(random_sizes(rng, 2, 3, 4), rng);
    const auto spec = random_explicit_spec(joint, rng);
    const auto p = SelectionProbs::uniform(joint.dims());
    const double g = spectral_summary(exact_random_scan(joint, p)).gap;
    const double C = approx_quality(joint, spec).C;
    for (int t = 1; t <= 6; ++t) {
      const auto rs = check_supplementary_bound(joint, p, spec, t);
      o.ok = o.ok && all_ok(rs, &worst);
      if (g - std::pow(C, t) >= 0) {
        ++dominance_cases;
        for (const auto& r : rs)
          if (r.name.find("corollary_dominates") != std::string::npos)
            o.ok = o.ok && r.status == Status::pass;
      }
    }
  }
  o.ok = o.ok && worst >= -1e-9;
  o.detail = fmt("100 models x t = 1..6, min slack %.3g, dominance checked in %d cases", worst, dominance_cases);
  return o;
}

Outcome criterion9() {
  Outcome o;
  Mat k(2, 2);
  k << 0.7, 0.3, 0.3, 0.7;
  const auto bench = Pair::verify(Kernel(k), Dist::uniform(2));
  Vec f(2);
  f << 1, -1;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = cross_check_variance(bench, f, 100000, 9, 1000);
  const double dt = seconds_since(t0);
  o.ok = r.report.pass && std::abs(r.exact - 7.0 / 3) <= 1e-12 && dt < 2;
  SplitMix64 rng(909);
  int passed = 0;
  for (int m = 0; m < 40; ++m) {
    const auto joint = random_joint(random_sizes(rng, 2, 2, 3), rng);
    const auto spec = random_explicit_spec(joint, rng);
    const auto rev = hybrid_random_scan(joint, SelectionProbs::uniform(joint.dims()), spec);
    Vec g(rev.size());
    for (Index i = 0; i < g.size(); ++i) g[i] = rng.uniform(-1, 1);
    passed += cross_validate_variance(rev, g, 100000, rng.below(1ULL << 40), 1000).pass;
  }
  o.ok = o.ok && passed >= 38;
  o.detail = fmt("benchmark estimate %.4f vs 7/3 (3 SE = %.4f) in %.3fs; %d/40 random pairs",
                 r.estimate.estimate, 3 * r.estimate.standard_error, dt, passed);
  return o;
}

Outcome criterion10() {
  Outcome o;
  SplitMix64 rng(1010);
  int even = 0, odd = 0;
  for (int k = 0; k < 100; ++k) {
    const auto joint = random_joint(random_sizes(rng, 1, 2, 4), rng);
    const Mat m = random_reversible_kernel(joint.weights(), rng);
    const auto rev = Pair::verify(Kernel(m), joint.weights());
    const auto psd = Pair::verify(Kernel(m * m), joint.weights());
    Vec f(rev.size());
    for (Index i = 0; i < f.size(); ++i) f[i] = rng.uniform(-1, 1);
    for (int t = 2; t <= 8; t += 2) {
      o.ok = o.ok && spectral_jensen_check(rev, f, t).pass;
      ++even;
    }
    for (int t = 1; t <= 7; t += 2) {
      o.ok = o.ok && spectral_jensen_check(psd, f, t).pass;
      ++odd;
    }
  }
  o.detail = fmt("%d even-t checks on random kernels, %d odd-t checks on psd kernels", even, odd);
  return o;
}

Outcome criterion11() {
  Outcome o;
  const std::string cfg = std::string(GIBBSCERT_SOURCE_DIR) + "/configs/explicit-2x2.json";
  auto run = [&](std::vector<std::string> args) {
    std::vector<const char*> argv{"gibbscert"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    auto j = nlohmann::json::parse(out.str());
    j.erase("timing");
    return std::make_pair(code, j.dump(2));
  };
  std::size_t bytes = 0;
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"check", cfg, "--suite", "all"}, {"check", cfg, "--suite", "da", "--t", "2,4,8"},
           {"demo", "random", "--run"}, {"demo", "spike-slab-toy", "--run"}}) {
    const auto a = run(args);
    const auto b = run(args);
    o.ok = o.ok && a.first == 0 && a == b;
    bytes += a.second.size();
  }
  o.detail = fmt("4 command lines run twice, %zu bytes compared, identical", bytes);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"exact spectra of the demos", criterion1},
      {"gap sandwich on random models", criterion2},
      {"lazy tightness witness", criterion3},
      {"Dirichlet sandwich", criterion4},
      {"two-block t-step chain", criterion5},
      {"block chain", criterion6},
      {"slice bound", criterion7},
      {"supplementary bound", criterion8},
      {"asymptotic variance by simulation", criterion9},
      {"spectral Jensen", criterion10},
      {"deterministic reports", criterion11},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("threw: ") + e.what();
    }
    failed += !o.ok;
    std::printf("%s %2zu %s: %s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
