#include "gibbscert/product_space.hpp"

#include <cstdlib>
#include <string>

#include "gibbscert/error.hpp"

namespace gibbscert {

std::size_t default_state_cap() {
  if (const char* env = std::getenv("GIBBSCERT_MAX_STATES")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 1'000'000;
}

ProductSpace::ProductSpace(std::vector<std::size_t> sizes, std::size_t cap)
    : sizes_(std::move(sizes)) {
  strides_.reserve(sizes_.size());
  total_ = 1;
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (sizes_[i] == 0)
      throw Error(ErrorCode::InvalidArgument, "coordinate " + std::to_string(i) + " has size 0");
    strides_.push_back(total_);
    if (total_ > cap / sizes_[i])
      throw Error(ErrorCode::StateSpaceTooLarge,
                  "state space exceeds the cap of " + std::to_string(cap) + " states");
    total_ *= sizes_[i];
  }
}

std::size_t ProductSpace::encode(std::span<const std::size_t> config) const {
  if (config.size() != sizes_.size())
    throw Error(ErrorCode::DimensionMismatch, "configuration has wrong number of coordinates");
  std::size_t index = 0;
  for (std::size_t i = 0; i < config.size(); ++i) {
    if (config[i] >= sizes_[i])
      throw Error(ErrorCode::InvalidArgument, "coordinate " + std::to_string(i) + " out of range");
    index += config[i] * strides_[i];
  }
  return index;
}

std::vector<std::size_t> ProductSpace::decode(std::size_t index) const {
  if (index >= total_) throw Error(ErrorCode::InvalidArgument, "state index out of range");
  std::vector<std::size_t> config(sizes_.size());
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    config[i] = index % sizes_[i];
    index /= sizes_[i];
  }
  return config;
}

void ProductSpace::validate_coords(std::span<const std::size_t> coords) const {
  for (std::size_t k = 0; k < coords.size(); ++k) {
    if (coords[k] >= sizes_.size())
      throw Error(ErrorCode::InvalidArgument, "coordinate " + std::to_string(coords[k]) +
                                                  " out of range");
    if (k > 0 && coords[k] <= coords[k - 1])
      throw Error(ErrorCode::InvalidArgument, "coordinate set must be strictly increasing");
  }
}

ProductSpace ProductSpace::subspace(std::span<const std::size_t> coords) const {
  validate_coords(coords);
  std::vector<std::size_t> sub;
  sub.reserve(coords.size());
  for (auto c : coords) sub.push_back(sizes_[c]);
  return ProductSpace(std::move(sub), total_);
}

std::vector<std::size_t> ProductSpace::complement(std::span<const std::size_t> coords) const {
  validate_coords(coords);
  std::vector<std::size_t> out;
  std::size_t k = 0;
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (k < coords.size() && coords[k] == i) {
      ++k;
      continue;
    }
    out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> ProductSpace::offsets(std::span<const std::size_t> coords) const {
  validate_coords(coords);
  std::vector<std::size_t> out{0};
  // Build with the first listed coordinate fastest, matching subspace().
  for (auto it = coords.rbegin(); it != coords.rend(); ++it) {
    std::vector<std::size_t> next;
    next.reserve(out.size() * sizes_[*it]);
    for (auto base : out)
      for (std::size_t v = 0; v < sizes_[*it]; ++v) next.push_back(base + v * strides_[*it]);
    out = std::move(next);
  }
  return out;
}

}  // namespace gibbscert
