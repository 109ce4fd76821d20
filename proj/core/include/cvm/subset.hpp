#ifndef CVM_SUBSET_HPP_
#define CVM_SUBSET_HPP_

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvm {

/// A subset A of the variable index set {1,...,d}, stored as a bitmask
/// (bit j-1 set means variable j belongs to A).
using SubsetMask = std::uint32_t;

inline int cardinality(SubsetMask a) { return std::popcount(a); }

inline SubsetMask full_set(int d) {
  return static_cast<SubsetMask>((1u << d) - 1u);
}

/// 1-based variable indices contained in the mask, ascending.
inline std::vector<int> members(SubsetMask a) {
  std::vector<int> out;
  for (int j = 0; a != 0; ++j, a >>= 1)
    if (a & 1u) out.push_back(j + 1);
  return out;
}

inline std::string subset_name(SubsetMask a) {
  std::string s = "{";
  bool first = true;
  for (int j : members(a)) {
    if (!first) s += ",";
    s += std::to_string(j);
    first = false;
  }
  return s + "}";
}

/// All subsets of {1,...,d} with cardinality >= min_card, ordered by
/// (cardinality, mask value) so reports are deterministic.
std::vector<SubsetMask> subsets_of_dimension(int d, int min_card = 2);

/// All subsets B of A, including the empty set, ordered by mask value.
std::vector<SubsetMask> sub_subsets(SubsetMask a);

inline void require_valid_subset(SubsetMask a, int d) {
  if (cardinality(a) < 2)
    throw std::invalid_argument("subset must have cardinality >= 2, got " +
                                subset_name(a));
  if ((a & ~full_set(d)) != 0)
    throw std::invalid_argument("subset " + subset_name(a) +
                                " not contained in {1,...," +
                                std::to_string(d) + "}");
}

}  // namespace cvm

#endif  // CVM_SUBSET_HPP_
