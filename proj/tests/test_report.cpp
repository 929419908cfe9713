#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gibbscert/runner.hpp"
#include "oracles.hpp"

using namespace gibbscert;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = fs::path(GIBBSCERT_SOURCE_DIR) / "configs";

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Internal;
}

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

const KernelSpectrum& spectrum(const RunReport& r, const std::string& name) {
  for (const auto& s : r.spectra)
    if (s.name == name) return s;
  FAIL("no spectrum named " << name);
  return r.spectra.front();
}

struct Cli {
  int code = 0;
  std::string out, err;
};

Cli cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gibbscert");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Cli r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
  const auto c = parse_config_text(R"({"sizes": [2, 2], "weights": [0.1, 0.2, 0.3, 0.4]})");
  CHECK(c.kind == ModelKind::weights);
  CHECK(c.selection == std::vector<double>{0.5, 0.5});
  CHECK(c.approx_default.kind == "exact");
  CHECK(c.approx_overrides.empty());
  CHECK(c.t == std::vector<int>{2, 4});
  CHECK(c.tol == 1e-9);
  CHECK(c.trials == 64);
  CHECK(c.suites == std::vector<std::string>{"random-scan", "supplement", "da"});
  CHECK(c.blocks.empty());
}

TEST_CASE("schema and parse errors") {
  SUBCASE("weights length names the expected length") {
    const auto text = "{\n  \"sizes\": [2, 3],\n  \"weights\": [1, 2, 3]\n}";
    CHECK(code_of([&] { parse_config_text(text, "m.json"); }) == ErrorCode::SchemaError);
    const auto msg = message_of([&] { parse_config_text(text, "m.json"); });
    CHECK(msg.find("expected 6") != std::string::npos);
    CHECK(msg.find("m.json:3") != std::string::npos);
  }
  SUBCASE("malformed JSON reports line and column") {
    const auto text = "{\n  \"sizes\": [2,\n}";
    CHECK(code_of([&] { parse_config_text(text, "bad.json"); }) == ErrorCode::ParseError);
    CHECK(message_of([&] { parse_config_text(text, "bad.json"); }).find("bad.json:3:") !=
          std::string::npos);
  }
  SUBCASE("unknown keys, missing model, bad rules") {
    CHECK(code_of([] { parse_config_text(R"({"sizes": [2], "weights": [1, 1], "colour": 1})"); }) ==
          ErrorCode::SchemaError);
    CHECK(code_of([] { parse_config_text(R"({"sizes": [2]})"); }) == ErrorCode::SchemaError);
    CHECK(code_of([] {
            parse_config_text(R"({"sizes": [2], "weights": [1, 1], "product": [[1, 1]]})");
          }) == ErrorCode::SchemaError);
    CHECK(code_of([] {
            parse_config_text(
                R"({"sizes": [2], "weights": [1, 1], "approximator": {"default": {"kind": "lazy"}}})");
          }) == ErrorCode::SchemaError);
    CHECK(code_of([] {
            parse_config_text(
                R"({"sizes": [2], "weights": [1, 1], "approximator": {"default": {"kind": "lazy", "epsilon": 1.5}}})");
          }) == ErrorCode::SchemaError);
    CHECK(code_of([] {
            parse_config_text(
                R"({"sizes": [2, 2], "weights": [1, 1, 1, 1], "approximator": {"overrides": {"2": "exact"}}})");
          }) == ErrorCode::SchemaError);
    CHECK(code_of([] { parse_config_text(R"({"sizes": [2, 2], "weights": [1, 1, 1, 1], "selection": [1]})"); }) ==
          ErrorCode::SchemaError);
    CHECK(code_of([] { parse_config("/nonexistent/config.json"); }) == ErrorCode::ParseError);
  }
  SUBCASE("inapplicable suites") {
    const auto msg = message_of([] {
      parse_config_text(R"({"sizes": [2, 2, 2], "weights": [1, 1, 1, 1, 1, 1, 1, 1], "suites": ["da"]})");
    });
    CHECK(msg.find("exactly 2 coordinates") != std::string::npos);
    CHECK(code_of([] {
            parse_config_text(R"({"sizes": [2, 2], "weights": [1, 1, 1, 1], "suites": ["block"]})");
          }) == ErrorCode::SchemaError);
    CHECK(code_of([] {
            parse_config_text(
                R"({"sizes": [2, 2, 2], "weights": [1, 1, 1, 1, 1, 1, 1, 1], "blocks": [[2, 2]]})");
          }) == ErrorCode::SchemaError);
  }
}

TEST_CASE("slice config detects its levels") {
  const auto c = parse_config_text(
      R"({"slice": {"m": [2, 1], "levels": [{"kind": "lazy", "epsilon": 0.5}, "exact"]}})");
  CHECK(c.kind == ModelKind::slice);
  CHECK(c.sizes == std::vector<std::size_t>{2});
  CHECK(c.suites == std::vector<std::string>{"slice"});
  const auto b = build_model(c);
  REQUIRE(b.slice.has_value());
  CHECK(b.slice->level_count() == 2);
  CHECK(b.slice->has_level_kernels());
  CHECK(code_of([] {
          parse_config_text(R"({"slice": {"m": [3, 2, 1], "levels": ["exact", "exact"]}})");
        }) == ErrorCode::SchemaError);
}

TEST_CASE("canonical round trip is a fixed point") {
  std::vector<ModelConfig> configs;
  for (const auto& d : list_demos()) configs.push_back(demo_config(d));
  for (const auto& entry : fs::recursive_directory_iterator(kConfigs))
    if (entry.path().extension() == ".json") configs.push_back(parse_config(entry.path().string()));
  CHECK(configs.size() >= 10);
  for (const auto& c : configs) {
    CAPTURE(c.name);
    const std::string text = serialize(c);
    const auto again = parse_config_text(text);
    CHECK(again == c);
    CHECK(serialize(again) == text);
    CHECK(canonicalize(c) == c);
    CHECK(config_fingerprint(again) == config_fingerprint(c));
  }
  auto c = demo_config("two-coin");
  const auto fp = config_fingerprint(c);
  c.tol = 1e-8;
  CHECK(config_fingerprint(c) != fp);
}

TEST_CASE("product and random models build what they describe") {
  const auto b = build_model(parse_config_text(R"({"sizes": [2, 3], "product": [[1, 3], [1, 1, 2]]})"));
  const auto& w = b.joint.weights();
  // Coordinate 0 runs fastest: index 1 is (x0 = 1, x1 = 0).
  CHECK(w[1] == doctest::Approx(0.75 * 0.25));
  CHECK(w[5] == doctest::Approx(0.75 * 0.5));

  const auto r = parse_config_text(
      R"({"sizes": [2, 2, 2], "random": {"seed": 4}, "approximator": {"default": {"kind": "random_explicit", "seed": 2}, "overrides": {"1": "exact"}}})");
  const auto br = build_model(r);
  CHECK(br.spec.rule_for(0).kind == ApproximatorRule::Kind::explicit_matrix);
  CHECK(br.spec.rule_for(1).kind == ApproximatorRule::Kind::exact);
  CHECK(br.spec.rule_for(2).kind == ApproximatorRule::Kind::explicit_matrix);
  CHECK(build_model(r).joint.weights().weights() == br.joint.weights().weights());
}

TEST_CASE("demos run and record the expected spectra") {
  CHECK(list_demos().size() >= 5);
  for (const auto& d : list_demos()) {
    CAPTURE(d);
    const auto run = run_suite(demo_config(d));
    CHECK(exit_status(run) == 0);
    CHECK(!run.reports.empty());
    for (std::size_t k = 1; k < run.reports.size(); ++k)
      CHECK(run.reports[k - 1].name <= run.reports[k].name);
    for (const auto& r : run.reports) CHECK(r.fingerprint == run.fingerprint);
  }
  CHECK(std::abs(spectrum(run_suite(demo_config("two-coin")), "T").operator_norm - 0.5) <= 1e-10);
  const auto three = run_suite(demo_config("three-coin-block"));
  CHECK(std::abs(spectrum(three, "T_1").operator_norm - 2.0 / 3) <= 1e-10);
  CHECK(std::abs(spectrum(three, "T_2").operator_norm - 1.0 / 3) <= 1e-10);
  CHECK(std::abs(spectrum(run_suite(demo_config("two-point-slice")), "S").operator_norm - 0.25) <= 1e-10);
  const auto spike = run_suite(demo_config("spike-slab-toy"));
  CHECK(spectrum(spike, "T").states == 300);
  CHECK(spectrum(spike, "T_hat").operator_norm < 1);
}

TEST_CASE("Lazy(1.0) degenerates without failing") {
  const auto run = run_suite(parse_config((kConfigs / "lazy-identity.json").string()));
  CHECK(exit_status(run) == 0);
  CHECK(std::abs(spectrum(run, "T_hat").gap) <= 1e-12);
  bool saw_lower = false;
  for (const auto& r : run.reports)
    if (r.name == "random_scan.gap_lower") {
      saw_lower = true;
      CHECK(r.status == Status::pass);
      CHECK(std::abs(r.lhs) <= 1e-12);
    }
  CHECK(saw_lower);
}

TEST_CASE("selection probe on the random demo, checked against the eigen oracle") {
  const auto c = demo_config("random");
  const auto run = run_suite(c);
  REQUIRE(run.exploratory.size() == 1);
  const auto b = build_model(c);
  const double g = oracle::gap(exact_random_scan(b.joint, b.selection).kernel().matrix());
  const double g_alt = oracle::gap(exact_random_scan(b.joint, *b.selection_alt).kernel().matrix());
  const double h = oracle::gap(hybrid_random_scan(b.joint, b.selection, b.spec).kernel().matrix());
  const double h_alt =
      oracle::gap(hybrid_random_scan(b.joint, *b.selection_alt, b.spec).kernel().matrix());
  CHECK(run.exploratory[0].counterexample == (g >= g_alt && h < h_alt));
  // The premise holds and the hybrid order flips by far more than round-off.
  CHECK(g - g_alt > 1e-3);
  CHECK(h_alt - h > 1e-3);
  const auto json = nlohmann::json::parse(report_json(run));
  CHECK(json["exploratory"][0]["certified"] == false);
}

TEST_CASE("report JSON is deterministic apart from timing; CSV layout") {
  const auto c = demo_config("random");
  const auto a = report_json(run_suite(c), false);
  const auto b = report_json(run_suite(c), false);
  CHECK(a == b);
  CHECK(a.find("timing") == std::string::npos);
  const auto with = nlohmann::json::parse(report_json(run_suite(c)));
  CHECK(with.contains("timing"));
  const auto& rep = with["reports"][0];
  for (const char* k : {"name", "lhs", "rhs", "slack", "pass", "status", "tol", "witness", "fingerprint"})
    CHECK(rep.contains(k));

  const auto csv = report_csv(run_suite(c));
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "name,lhs,rhs,slack,status");
  std::string row;
  std::size_t rows = 0;
  while (std::getline(lines, row)) {
    ++rows;
    CHECK(std::count(row.begin(), row.end(), ',') == 4);
  }
  CHECK(rows == run_suite(c).reports.size());
}

TEST_CASE("command line") {
  SUBCASE("list-demos and demo") {
    const auto l = cli({"list-demos"});
    CHECK(l.code == 0);
    CHECK(std::count(l.out.begin(), l.out.end(), '\n') >= 5);
    for (const auto& d : list_demos()) {
      const auto r = cli({"demo", d});
      CHECK(r.code == 0);
      CHECK(parse_config_text(r.out) == demo_config(d));
    }
    CHECK(cli({"demo", "no-such-demo"}).code == 2);
    const auto run = cli({"demo", "two-coin", "--run"});
    CHECK(run.code == 0);
    CHECK(nlohmann::json::parse(run.out)["status"] == "pass");
  }
  SUBCASE("check and analyze") {
    const auto cfg = (kConfigs / "explicit-2x2.json").string();
    const auto a = cli({"check", cfg, "--suite", "da", "--t", "2,4,8"});
    CHECK(a.code == 0);
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j["suites"] == nlohmann::json::array({"da"}));
    bool saw_t8 = false;
    for (const auto& r : j["reports"]) saw_t8 = saw_t8 || r["name"].get<std::string>().rfind("da_tstep.t8", 0) == 0;
    CHECK(saw_t8);
    CHECK(cli({"check", cfg, "--suite", "block"}).code == 2);
    CHECK(cli({"check", cfg, "--suite", "nonsense"}).code == 2);
    CHECK(cli({"check", cfg, "--t", "0"}).code == 2);
    CHECK(cli({"check", "/nonexistent.json"}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"--help"}).code == 0);

    const auto dir = fs::temp_directory_path() / "gibbscert_test_report";
    fs::create_directories(dir);
    const auto out = (dir / "r.json").string();
    CHECK(cli({"analyze", cfg, "--out", out}).code == 0);
    CHECK(fs::exists(dir / "r.json"));
    CHECK(fs::exists(dir / "r.csv"));
    fs::remove_all(dir);
  }
  SUBCASE("exit status follows the worst report") {
    RunReport r;
    r.reports.push_back(certify_leq("a", 0, 1, 1e-9));
    r.reports.push_back(hypothesis_unmet("b", 2, 1, 1e-9, "alpha too large"));
    CHECK(exit_status(r) == 0);
    r.reports.push_back(certify_leq("c", 2, 1, 1e-9));
    CHECK(exit_status(r) == 1);
    CHECK(nlohmann::json::parse(report_json(r))["status"] == "fail");
  }
  SUBCASE("simulate") {
    const auto cfg = (kConfigs / "two-state-bench.json").string();
    const auto r = cli({"simulate", cfg, "--kernel", "hybrid", "--steps", "100000", "--seed", "3",
                        "--f", "vector:1,-1", "--batch", "1000"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["exact"].get<double>() == doctest::Approx(7.0 / 3).epsilon(1e-12));
    CHECK(j["status"] == "pass");
    CHECK(cli({"simulate", cfg, "--f", "coord:0", "--steps", "1000", "--batch", "100"}).code == 2);
    CHECK(cli({"simulate", cfg, "--f", "vector:1,2,3"}).code == 2);
    CHECK(cli({"simulate", cfg, "--f", "coord:5"}).code == 2);
  }
  SUBCASE("state cap from the environment") {
    ::setenv("GIBBSCERT_MAX_STATES", "100", 1);
    const auto r = cli({"demo", "spike-slab-toy", "--run"});
    ::unsetenv("GIBBSCERT_MAX_STATES");
    CHECK(r.code == 2);
    CHECK(r.err.find("StateSpaceTooLarge") != std::string::npos);
  }
}
