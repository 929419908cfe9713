#include "gibbscert/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gibbscert/fingerprint.hpp"
#include "gibbscert/random_models.hpp"

namespace gibbscert {

using nlohmann::json;

namespace {

// Schema errors point at the first line mentioning the key, which is usually the right one.
class Reader {
 public:
  Reader(const std::string& text, const std::string& origin) : text_(text), origin_(origin) {}

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    std::string where = origin_;
    const auto at = text_.find("\"" + key + "\"");
    if (!key.empty() && at != std::string::npos)
      where += ":" + std::to_string(1 + std::count(text_.begin(), text_.begin() + at, '\n'));
    throw Error(ErrorCode::SchemaError, where + ": " + (key.empty() ? "" : "'" + key + "': ") + msg);
  }

  double number(const json& j, const std::string& key) const {
    if (!j.is_number()) fail(key, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(key, "expected a finite number");
    return v;
  }

  std::uint64_t unsigned_int(const json& j, const std::string& key) const {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return j.get<std::uint64_t>();
    fail(key, "expected a non-negative integer");
  }

  std::vector<double> numbers(const json& j, const std::string& key) const {
    if (!j.is_array()) fail(key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) out.push_back(number(v, key));
    return out;
  }

  std::vector<std::vector<double>> matrix(const json& j, const std::string& key) const {
    if (!j.is_array()) fail(key, "expected an array of rows");
    std::vector<std::vector<double>> out;
    for (const auto& row : j) out.push_back(numbers(row, key));
    return out;
  }

  void only_keys(const json& j, const std::string& key, std::initializer_list<const char*> allowed) const {
    if (!j.is_object()) fail(key, "expected an object");
    for (const auto& [k, v] : j.items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || k == a;
      if (!ok) fail(k, "unknown key" + (key.empty() ? std::string() : " in '" + key + "'"));
    }
  }

  RuleConfig rule(const json& j, const std::string& key) const {
    RuleConfig r;
    if (j.is_string()) {
      r.kind = j.get<std::string>();
      if (r.kind != "exact" && r.kind != "metropolis_indep" && r.kind != "metropolis_rw")
        fail(key, "rule '" + r.kind + "' needs an object with its parameters");
      return r;
    }
    only_keys(j, key, {"kind", "epsilon", "radius", "proposal", "matrices", "seed"});
    if (!j.contains("kind") || !j["kind"].is_string()) fail(key, "rule needs a string 'kind'");
    r.kind = j["kind"].get<std::string>();
    auto forbid_others = [&](std::initializer_list<const char*> allowed) {
      for (const auto& [k, v] : j.items()) {
        bool ok = k == "kind";
        for (const char* a : allowed) ok = ok || k == a;
        if (!ok) fail(k, "not a parameter of rule '" + r.kind + "'");
      }
    };
    if (r.kind == "exact") {
      forbid_others({});
    } else if (r.kind == "lazy") {
      forbid_others({"epsilon"});
      if (!j.contains("epsilon")) fail(key, "lazy rule needs 'epsilon'");
      r.epsilon = number(j["epsilon"], "epsilon");
      if (r.epsilon < 0 || r.epsilon > 1) fail("epsilon", "must lie in [0, 1]");
    } else if (r.kind == "metropolis_rw") {
      forbid_others({"radius"});
      if (j.contains("radius")) r.radius = unsigned_int(j["radius"], "radius");
      if (r.radius < 1) fail("radius", "must be at least 1");
    } else if (r.kind == "metropolis_indep") {
      forbid_others({"proposal"});
      if (j.contains("proposal")) r.proposal = numbers(j["proposal"], "proposal");
    } else if (r.kind == "explicit") {
      forbid_others({"matrices"});
      if (!j.contains("matrices") || !j["matrices"].is_object())
        fail(key, "explicit rule needs a 'matrices' object keyed by conditioning index");
      for (const auto& [k, v] : j["matrices"].items()) {
        std::size_t pos = 0;
        std::size_t y = 0;
        try {
          y = std::stoull(k, &pos);
        } catch (const std::exception&) {
          pos = 0;
        }
        if (pos != k.size() || k.empty()) fail("matrices", "key '" + k + "' is not an index");
        r.matrices[y] = matrix(v, "matrices");
      }
    } else if (r.kind == "random_explicit") {
      forbid_others({"seed"});
      if (j.contains("seed")) r.seed = unsigned_int(j["seed"], "seed");
    } else {
      fail(key, "unknown rule kind '" + r.kind + "'");
    }
    return r;
  }

 private:
  const std::string& text_;
  const std::string& origin_;
};

json rule_json(const RuleConfig& r) {
  json j;
  j["kind"] = r.kind;
  if (r.kind == "lazy") j["epsilon"] = r.epsilon;
  if (r.kind == "metropolis_rw") j["radius"] = r.radius;
  if (r.kind == "metropolis_indep" && !r.proposal.empty()) j["proposal"] = r.proposal;
  if (r.kind == "explicit") {
    json m = json::object();
    for (const auto& [y, rows] : r.matrices) m[std::to_string(y)] = rows;
    j["matrices"] = m;
  }
  if (r.kind == "random_explicit") j["seed"] = r.seed;
  return j;
}

json to_json(const ModelConfig& c) {
  json j;
  if (!c.name.empty()) j["name"] = c.name;
  j["sizes"] = c.sizes;
  switch (c.kind) {
    case ModelKind::weights: j["weights"] = c.weights; break;
    case ModelKind::product: j["product"] = c.product; break;
    case ModelKind::random:
      j["random"] = {{"seed", c.random_seed}, {"zero_fraction", c.zero_fraction}};
      break;
    case ModelKind::slice: {
      json levels = json::array();
      for (const auto& r : c.level_rules) levels.push_back(rule_json(r));
      j["slice"] = {{"m", c.slice_m}, {"levels", levels}};
      break;
    }
  }
  j["selection"] = c.selection;
  if (!c.selection_alt.empty()) j["selection_alt"] = c.selection_alt;
  json overrides = json::object();
  for (const auto& [i, r] : c.approx_overrides) overrides[std::to_string(i)] = rule_json(r);
  j["approximator"] = {{"default", rule_json(c.approx_default)}, {"overrides", overrides}};
  j["suites"] = c.suites;
  j["t"] = c.t;
  j["tol"] = c.tol;
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  if (!c.blocks.empty()) {
    json b = json::array();
    for (auto [l, m] : c.blocks) b.push_back({l, m});
    j["blocks"] = b;
  }
  return j;
}

std::size_t state_count(const std::vector<std::size_t>& sizes) {
  std::size_t n = 1;
  for (auto s : sizes) n *= s;
  return n;
}

bool is_uniform(const std::vector<double>& p) {
  if (p.empty()) return true;
  const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
  return *hi - *lo <= 1e-12 * std::max(1.0, *hi);
}

[[noreturn]] void schema(const std::string& msg) { throw Error(ErrorCode::SchemaError, msg); }

}  // namespace

ModelConfig parse_config_text(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t at = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(at), '\n');
    const auto nl = text.rfind('\n', at == 0 ? 0 : at - 1);
    const auto col = at - (nl == std::string::npos ? 0 : nl + 1) + 1;
    throw Error(ErrorCode::ParseError, origin + ":" + std::to_string(line) + ":" +
                                           std::to_string(col) + ": malformed JSON (" + e.what() + ")");
  }

  const Reader rd(text, origin);
  rd.only_keys(j, "", {"name", "sizes", "weights", "product", "random", "slice", "selection",
                       "selection_alt", "approximator", "suites", "t", "tol", "seed", "trials",
                       "blocks"});
  ModelConfig c;
  if (j.contains("name")) {
    if (!j["name"].is_string()) rd.fail("name", "expected a string");
    c.name = j["name"].get<std::string>();
  }

  int sources = 0;
  for (const char* k : {"weights", "product", "random", "slice"}) sources += j.contains(k);
  if (sources != 1)
    rd.fail("", "exactly one of 'weights', 'product', 'random', 'slice' is required (found " +
                    std::to_string(sources) + ")");

  if (j.contains("sizes")) {
    if (!j["sizes"].is_array() || j["sizes"].empty()) rd.fail("sizes", "expected a non-empty array");
    for (const auto& s : j["sizes"]) {
      const auto v = rd.unsigned_int(s, "sizes");
      if (v < 1) rd.fail("sizes", "every size must be at least 1");
      c.sizes.push_back(static_cast<std::size_t>(v));
    }
  } else if (!j.contains("slice")) {
    rd.fail("", "'sizes' is required");
  }

  if (j.contains("weights")) {
    c.kind = ModelKind::weights;
    c.weights = rd.numbers(j["weights"], "weights");
    const std::size_t expected = state_count(c.sizes);
    if (c.weights.size() != expected)
      rd.fail("weights", "has " + std::to_string(c.weights.size()) + " entries; expected " +
                             std::to_string(expected) + " (product of sizes)");
    for (double w : c.weights)
      if (w < 0) rd.fail("weights", "entries must be non-negative");
  } else if (j.contains("product")) {
    c.kind = ModelKind::product;
    c.product = rd.matrix(j["product"], "product");
    if (c.product.size() != c.sizes.size())
      rd.fail("product", "has " + std::to_string(c.product.size()) + " factors; expected " +
                             std::to_string(c.sizes.size()));
    for (std::size_t i = 0; i < c.product.size(); ++i) {
      if (c.product[i].size() != c.sizes[i])
        rd.fail("product", "factor " + std::to_string(i) + " has " +
                               std::to_string(c.product[i].size()) + " entries; expected " +
                               std::to_string(c.sizes[i]));
      for (double w : c.product[i])
        if (w < 0) rd.fail("product", "entries must be non-negative");
    }
  } else if (j.contains("random")) {
    c.kind = ModelKind::random;
    const auto& r = j["random"];
    rd.only_keys(r, "random", {"seed", "zero_fraction"});
    if (r.contains("seed")) c.random_seed = rd.unsigned_int(r["seed"], "seed");
    if (r.contains("zero_fraction")) {
      c.zero_fraction = rd.number(r["zero_fraction"], "zero_fraction");
      if (c.zero_fraction < 0 || c.zero_fraction >= 1) rd.fail("zero_fraction", "must lie in [0, 1)");
    }
  } else {
    c.kind = ModelKind::slice;
    const auto& s = j["slice"];
    rd.only_keys(s, "slice", {"m", "levels"});
    if (!s.contains("m")) rd.fail("slice", "needs 'm'");
    c.slice_m = rd.numbers(s["m"], "m");
    if (c.slice_m.empty()) rd.fail("m", "must be non-empty");
    for (double v : c.slice_m)
      if (!(v > 0)) rd.fail("m", "every weight must be positive");
    if (!c.sizes.empty() && (c.sizes.size() != 1 || c.sizes[0] != c.slice_m.size()))
      rd.fail("sizes", "a slice model has sizes [" + std::to_string(c.slice_m.size()) + "]");
    if (s.contains("levels")) {
      if (s["levels"].is_array())
        for (const auto& r : s["levels"]) c.level_rules.push_back(rd.rule(r, "levels"));
      else
        c.level_rules.push_back(rd.rule(s["levels"], "levels"));
    }
  }

  if (j.contains("selection")) c.selection = rd.numbers(j["selection"], "selection");
  if (j.contains("selection_alt")) c.selection_alt = rd.numbers(j["selection_alt"], "selection_alt");
  if (j.contains("approximator")) {
    const auto& a = j["approximator"];
    rd.only_keys(a, "approximator", {"default", "overrides"});
    if (a.contains("default")) c.approx_default = rd.rule(a["default"], "default");
    if (a.contains("overrides")) {
      if (!a["overrides"].is_object()) rd.fail("overrides", "expected an object keyed by coordinate");
      for (const auto& [k, v] : a["overrides"].items()) {
        std::size_t pos = 0, i = 0;
        try {
          i = std::stoull(k, &pos);
        } catch (const std::exception&) {
          pos = 0;
        }
        if (k.empty() || pos != k.size()) rd.fail("overrides", "key '" + k + "' is not a coordinate");
        c.approx_overrides[i] = rd.rule(v, "overrides");
      }
    }
  }
  if (j.contains("suites")) {
    const auto& s = j["suites"];
    if (s.is_string()) {
      c.suites.push_back(s.get<std::string>());
    } else if (s.is_array()) {
      for (const auto& v : s) {
        if (!v.is_string()) rd.fail("suites", "expected suite names");
        c.suites.push_back(v.get<std::string>());
      }
    } else {
      rd.fail("suites", "expected a suite name or an array of them");
    }
  }
  if (j.contains("t")) {
    c.t.clear();
    const auto& t = j["t"];
    for (const auto& v : t.is_array() ? t : json::array({t})) {
      const auto x = rd.unsigned_int(v, "t");
      if (x < 1 || x > 4096) rd.fail("t", "values must lie in [1, 4096]");
      c.t.push_back(static_cast<int>(x));
    }
  }
  if (j.contains("tol")) {
    c.tol = rd.number(j["tol"], "tol");
    if (!(c.tol >= 0)) rd.fail("tol", "must be non-negative");
  }
  if (j.contains("seed")) c.seed = rd.unsigned_int(j["seed"], "seed");
  if (j.contains("trials")) c.trials = rd.unsigned_int(j["trials"], "trials");
  if (j.contains("blocks")) {
    if (!j["blocks"].is_array()) rd.fail("blocks", "expected an array of [ell, m] pairs");
    for (const auto& b : j["blocks"]) {
      if (!b.is_array() || b.size() != 2) rd.fail("blocks", "expected [ell, m] pairs");
      c.blocks.emplace_back(rd.unsigned_int(b[0], "blocks"), rd.unsigned_int(b[1], "blocks"));
    }
  }
  try {
    return canonicalize(std::move(c));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SchemaError) throw Error(ErrorCode::SchemaError, origin + ": " + e.what());
    throw;
  }
}

ModelConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::vector<std::string> applicable_suites(const ModelConfig& c) {
  if (c.kind == ModelKind::slice) return {"slice"};
  const std::size_t n = c.sizes.size();
  std::vector<std::string> out{"random-scan"};
  if (!c.selection_alt.empty()) out.push_back("selection");
  if (n >= 2 && is_uniform(c.selection)) out.push_back("supplement");
  if (n == 2) out.push_back("da");
  if (n >= 3) out.push_back("block");
  return out;
}

ModelConfig canonicalize(ModelConfig c) {
  if (c.kind == ModelKind::slice) {
    c.sizes = {c.slice_m.size()};
    if (c.level_rules.empty()) c.level_rules.push_back({});
    for (const auto& r : c.level_rules)
      if (r.kind == "random_explicit" || r.kind == "explicit")
        schema("slice levels take exact, lazy, metropolis_rw or metropolis_indep rules");
    if (c.level_rules.size() != 1 && c.level_rules.size() != SliceModel(c.slice_m).level_count())
      schema("slice 'levels' has " + std::to_string(c.level_rules.size()) +
             " rules; expected 1 or " + std::to_string(SliceModel(c.slice_m).level_count()));
    if (!c.selection_alt.empty()) schema("'selection_alt' does not apply to slice models");
    if (!c.approx_overrides.empty() || c.approx_default.kind != "exact")
      schema("slice models take per-level rules under 'slice', not 'approximator'");
  }
  if (c.sizes.empty()) schema("'sizes' is required");
  const std::size_t n = c.sizes.size();
  if (state_count(c.sizes) > default_state_cap())
    throw Error(ErrorCode::StateSpaceTooLarge, std::to_string(state_count(c.sizes)) +
                                                   " states exceed the cap of " +
                                                   std::to_string(default_state_cap()));

  auto check_probs = [&](const std::vector<double>& p, const char* key) {
    if (p.size() != n)
      schema(std::string("'") + key + "' has " + std::to_string(p.size()) + " entries; expected " +
             std::to_string(n));
    double total = 0;
    for (double v : p) {
      if (!(v >= 0)) schema(std::string("'") + key + "' entries must be non-negative");
      total += v;
    }
    if (!(total > 0)) schema(std::string("'") + key + "' must have a positive sum");
  };
  if (c.selection.empty()) c.selection.assign(n, 1.0 / static_cast<double>(n));
  check_probs(c.selection, "selection");
  if (!c.selection_alt.empty()) check_probs(c.selection_alt, "selection_alt");
  for (const auto& [i, r] : c.approx_overrides)
    if (i >= n) schema("approximator override for coordinate " + std::to_string(i) +
                       " but there are " + std::to_string(n) + " coordinates");

  const auto applicable = applicable_suites(c);
  std::set<std::string> wanted;
  for (const auto& s : c.suites) {
    if (s == "all") {
      wanted.insert(applicable.begin(), applicable.end());
      continue;
    }
    if (std::find(std::begin(kSuiteNames), std::end(kSuiteNames), s) == std::end(kSuiteNames))
      schema("unknown suite '" + s + "'");
    if (std::find(applicable.begin(), applicable.end(), s) == applicable.end()) {
      std::string why = "does not apply to this model";
      if (s == "da") why = "needs exactly 2 coordinates";
      if (s == "block") why = "needs at least 3 coordinates";
      if (s == "selection") why = "needs 'selection_alt'";
      if (s == "supplement") why = "needs uniform selection and at least 2 coordinates";
      if (s == "slice") why = "needs a slice model";
      if (c.kind == ModelKind::slice) why = "does not apply to a slice model";
      schema("suite '" + s + "' " + why);
    }
    wanted.insert(s);
  }
  if (c.suites.empty()) wanted.insert(applicable.begin(), applicable.end());
  c.suites.clear();
  for (const char* s : kSuiteNames)
    if (wanted.count(s)) c.suites.push_back(s);

  std::sort(c.t.begin(), c.t.end());
  c.t.erase(std::unique(c.t.begin(), c.t.end()), c.t.end());
  if (c.t.empty()) c.t = {2, 4};

  const bool block = wanted.count("block") > 0;
  if (block && c.blocks.empty())
    for (std::size_t ell = 2; ell + 1 <= n; ++ell)
      for (std::size_t m = 1; m < ell; ++m) c.blocks.emplace_back(ell, m);
  for (auto [ell, m] : c.blocks)
    if (!(1 <= m && m < ell && ell + 1 <= n))
      schema("block pair (" + std::to_string(ell) + ", " + std::to_string(m) +
             ") needs 1 <= m < ell <= " + std::to_string(n) + " - 1");
  if (!block) c.blocks.clear();
  std::sort(c.blocks.begin(), c.blocks.end());
  c.blocks.erase(std::unique(c.blocks.begin(), c.blocks.end()), c.blocks.end());
  return c;
}

std::string serialize(const ModelConfig& config) { return to_json(config).dump(2) + "\n"; }

std::string config_fingerprint(const ModelConfig& config) {
  return fingerprint(to_json(config).dump());
}

ApproximatorRule to_rule(const RuleConfig& r) {
  if (r.kind == "exact") return ApproximatorRule::exact();
  if (r.kind == "lazy") return ApproximatorRule::lazy(r.epsilon);
  if (r.kind == "metropolis_rw") return ApproximatorRule::metropolis_rw(r.radius);
  if (r.kind == "metropolis_indep")
    return ApproximatorRule::metropolis_indep(
        r.proposal.empty() ? std::nullopt : std::optional<std::vector<double>>(r.proposal));
  if (r.kind == "explicit") {
    std::map<std::size_t, Mat> table;
    for (const auto& [y, rows] : r.matrices) {
      Mat m(static_cast<Index>(rows.size()), rows.empty() ? 0 : static_cast<Index>(rows[0].size()));
      for (std::size_t a = 0; a < rows.size(); ++a) {
        if (rows[a].size() != rows[0].size())
          throw Error(ErrorCode::InvalidSpec, "explicit matrix for y = " + std::to_string(y) +
                                                  " has rows of different lengths");
        for (std::size_t b = 0; b < rows[a].size(); ++b)
          m(static_cast<Index>(a), static_cast<Index>(b)) = rows[a][b];
      }
      table[y] = m;
    }
    return ApproximatorRule::explicit_matrix(std::move(table));
  }
  throw Error(ErrorCode::InvalidSpec, "rule '" + r.kind + "' needs a model to expand");
}

BuiltModel build_model(const ModelConfig& c) {
  BuiltModel b;
  switch (c.kind) {
    case ModelKind::weights:
      b.joint = JointDistribution(ProductSpace(c.sizes),
                                  Dist(Eigen::Map<const Vec>(c.weights.data(), static_cast<Index>(c.weights.size()))));
      break;
    case ModelKind::product: {
      ProductSpace space(c.sizes);
      std::vector<std::vector<double>> f = c.product;
      for (auto& row : f) {
        double s = 0;
        for (double v : row) s += v;
        if (!(s > 0)) throw Error(ErrorCode::SchemaError, "a product factor sums to zero");
        for (double& v : row) v /= s;
      }
      Vec w(static_cast<Index>(space.total()));
      for (std::size_t k = 0; k < space.total(); ++k) {
        double v = 1;
        for (std::size_t i = 0; i < space.dims(); ++i) v *= f[i][space.coordinate(k, i)];
        w[static_cast<Index>(k)] = v;
      }
      b.joint = JointDistribution(std::move(space), Dist(std::move(w)));
      break;
    }
    case ModelKind::random: {
      SplitMix64 rng(c.random_seed);
      b.joint = random_joint(c.sizes, rng, c.zero_fraction);
      break;
    }
    case ModelKind::slice: {
      SliceModel model(c.slice_m);
      std::vector<ApproximatorRule> rules;
      for (const auto& r : c.level_rules) rules.push_back(to_rule(r));
      model.set_level_rules(rules);
      b.joint = JointDistribution(ProductSpace(c.sizes),
                                  Dist(Eigen::Map<const Vec>(c.slice_m.data(), static_cast<Index>(c.slice_m.size()))));
      b.slice = std::move(model);
      break;
    }
  }
  b.selection = SelectionProbs(c.selection);
  if (!c.selection_alt.empty()) b.selection_alt = SelectionProbs(c.selection_alt);

  auto expand = [&](const RuleConfig& r, std::size_t i) {
    if (r.kind != "random_explicit") return to_rule(r);
    SplitMix64 rng(r.seed);
    return random_explicit_spec(b.joint, rng).rule_for(i);
  };
  if (c.approx_default.kind == "random_explicit") {
    for (std::size_t i = 0; i < c.sizes.size(); ++i)
      b.spec.overrides[i] = expand(c.approx_default, i);
  } else {
    b.spec.default_rule = to_rule(c.approx_default);
  }
  for (const auto& [i, r] : c.approx_overrides) b.spec.overrides[i] = expand(r, i);
  return b;
}

}  // namespace gibbscert
