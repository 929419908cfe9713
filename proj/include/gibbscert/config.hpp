#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gibbscert/approximator.hpp"
#include "gibbscert/slice.hpp"

namespace gibbscert {

// Approximator rule as written in a config file.
//   {"kind": "exact"}
//   {"kind": "lazy", "epsilon": e}
//   {"kind": "metropolis_rw", "radius": r}
//   {"kind": "metropolis_indep", "proposal": [...]}      proposal optional (uniform)
//   {"kind": "explicit", "matrices": {"<y>": [[...], ...], ...}}
//   {"kind": "random_explicit", "seed": s}               random reversible Q per y
// A bare string is shorthand for {"kind": <string>} where that is complete.
struct RuleConfig {
  std::string kind = "exact";
  double epsilon = 0.0;
  std::size_t radius = 1;
  std::vector<double> proposal;
  std::map<std::size_t, std::vector<std::vector<double>>> matrices;
  std::uint64_t seed = 0;

  bool operator==(const RuleConfig&) const = default;
};

enum class ModelKind { weights, product, random, slice };

inline constexpr const char* kSuiteNames[] = {"random-scan", "selection", "supplement",
                                              "da",          "block",     "slice"};

struct ModelConfig {
  std::string name;
  ModelKind kind = ModelKind::weights;
  // Coordinate sizes; a slice model has one coordinate of size |m|.
  std::vector<std::size_t> sizes;
  std::vector<double> weights;
  std::vector<std::vector<double>> product;
  std::uint64_t random_seed = 0;
  double zero_fraction = 0.0;
  std::vector<double> slice_m;
  // One rule for every level, or one per level.
  std::vector<RuleConfig> level_rules;

  std::vector<double> selection;
  std::vector<double> selection_alt;
  RuleConfig approx_default;
  std::map<std::size_t, RuleConfig> approx_overrides;

  std::vector<std::string> suites;
  std::vector<int> t{2, 4};
  double tol = 1e-9;
  std::uint64_t seed = 0;
  std::size_t trials = 64;
  std::vector<std::pair<std::size_t, std::size_t>> blocks;

  bool operator==(const ModelConfig&) const = default;
};

// Reads and validates a config file. ParseError carries line:column of malformed JSON;
// SchemaError names the offending key and the line where it first appears.
ModelConfig parse_config(const std::string& path);
ModelConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");

// Fills defaults (uniform selection, exact rules, the applicable suites, every valid block
// pair) and checks cross-field constraints. Idempotent. Throws SchemaError.
ModelConfig canonicalize(ModelConfig config);

// Canonical JSON text: sorted keys, two-space indent, trailing newline.
std::string serialize(const ModelConfig& config);

// FNV-1a of the canonical serialization.
std::string config_fingerprint(const ModelConfig& config);

// Suites that make sense for the model: random-scan and block need n >= 2 and n >= 3, da
// needs n = 2, selection needs selection_alt, supplement needs uniform selection, slice
// needs a slice model.
std::vector<std::string> applicable_suites(const ModelConfig& config);

// Built objects for a canonical config.
struct BuiltModel {
  JointDistribution joint;
  std::optional<SliceModel> slice;
  SelectionProbs selection;
  std::optional<SelectionProbs> selection_alt;
  ApproximatorSpec spec;
};

BuiltModel build_model(const ModelConfig& config);
ApproximatorRule to_rule(const RuleConfig& rule);

// Builtin demo registry.
std::vector<std::string> list_demos();
// Throws InvalidArgument for an unknown name.
ModelConfig demo_config(const std::string& name);

}  // namespace gibbscert
