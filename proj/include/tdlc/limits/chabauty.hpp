#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tdlc/error.hpp"
#include "tdlc/kernel/window.hpp"

namespace tdlc::limits {

/// A closed subgroup of the reference compact open, seen through its window images at
/// levels 0..K.
struct ClosedSubgroupApprox {
  std::string reference;
  std::vector<kernel::SubgroupImage> images;

  int level() const { return static_cast<int>(images.size()) - 1; }
};

template <class M>
ClosedSubgroupApprox approximate(const M& model, const typename M::Closed& c, int level,
                                 std::uint64_t cap = kernel::kDefaultCap) {
  ClosedSubgroupApprox out{model.format(model.reference()), {}};
  for (int k = 0; k <= level; ++k) out.images.push_back(model.image(c, k, cap));
  return out;
}

/// image_k is the projection of image_{k+1} for every k.
template <class M>
bool is_coherent(const M& model, const ClosedSubgroupApprox& a) {
  for (int k = 0; k < a.level(); ++k) {
    const auto fine = model.window(k + 1), coarse = model.window(k);
    std::vector<kernel::Code> proj;
    for (auto c : a.images[static_cast<std::size_t>(k + 1)].elements()) proj.push_back(fine.project_to(c, coarse));
    if (!(kernel::SubgroupImage(coarse.id(), std::move(proj)) == a.images[static_cast<std::size_t>(k)])) return false;
  }
  return true;
}

/// 2^{-m} for the least level m where the images differ, or indistinguishable at K.
struct Distance {
  std::optional<int> log2_denom;
  int level = 0;

  bool indistinguishable() const { return !log2_denom.has_value(); }
  /// Distance is 2^{-exponent}; indistinguishable at K counts as 2^{-(K+1)}.
  int exponent() const { return log2_denom ? *log2_denom : level + 1; }
  std::string to_string() const {
    return log2_denom ? "2^-" + std::to_string(*log2_denom) : "indist@" + std::to_string(level);
  }
  friend bool operator==(const Distance&, const Distance&) = default;
};

inline Distance chabauty_distance(const ClosedSubgroupApprox& a, const ClosedSubgroupApprox& b) {
  if (a.reference != b.reference || a.images.size() != b.images.size())
    throw WindowMismatch("chabauty_distance: approximations of different references or resolutions");
  for (std::size_t k = 0; k < a.images.size(); ++k)
    if (!(a.images[k] == b.images[k])) return {static_cast<int>(k), a.level()};
  return {std::nullopt, a.level()};
}

}  // namespace tdlc::limits
