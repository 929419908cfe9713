#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gibbscert {

// State-space cap: GIBBSCERT_MAX_STATES when set, otherwise 10^6.
std::size_t default_state_cap();

// Finite product X_1 x ... x X_n with a mixed-radix codec, coordinate 0 fastest:
// index = sum_i x_i * stride_i, stride_0 = 1, stride_{i+1} = stride_i * d_i.
class ProductSpace {
 public:
  ProductSpace() = default;
  explicit ProductSpace(std::vector<std::size_t> sizes, std::size_t cap = default_state_cap());

  std::size_t dims() const { return sizes_.size(); }
  std::size_t size(std::size_t i) const { return sizes_.at(i); }
  const std::vector<std::size_t>& sizes() const { return sizes_; }
  std::size_t total() const { return total_; }
  std::size_t stride(std::size_t i) const { return strides_.at(i); }

  std::size_t encode(std::span<const std::size_t> config) const;
  std::vector<std::size_t> decode(std::size_t index) const;
  std::size_t coordinate(std::size_t index, std::size_t i) const {
    return (index / strides_[i]) % sizes_[i];
  }

  // The product of the listed coordinates, in the listed order.
  ProductSpace subspace(std::span<const std::size_t> coords) const;
  // Sorted coordinates not in `coords`.
  std::vector<std::size_t> complement(std::span<const std::size_t> coords) const;
  // offsets(coords)[a] is the full-space index contribution of the a-th configuration of
  // `coords` (enumerated by subspace(coords)), so a full index is
  // offsets(B)[a] + offsets(complement(B))[y].
  std::vector<std::size_t> offsets(std::span<const std::size_t> coords) const;

  // Throws unless `coords` is strictly increasing and in range.
  void validate_coords(std::span<const std::size_t> coords) const;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 1;
};

}  // namespace gibbscert
