#pragma once

#include <cstdint>
#include <vector>

#include "tdlc/kernel/window.hpp"

namespace tdlc::verify {

/// Window image of the subgroup generated by the closures of con(g) over a schedule.
struct TitsCoreImage {
  int level = 0;
  kernel::SubgroupImage image;
  std::vector<std::size_t> sizes;  ///< image size after each schedule prefix
};

/// Subgroup generated by image_K(closure of con(g)) for g in the schedule. Throws
/// UnsupportedElement for elements outside the model's supported class.
template <class M>
TitsCoreImage tits_core_image(const M& model, int level, const std::vector<typename M::Element>& schedule,
                              std::uint64_t cap = kernel::kDefaultCap) {
  const auto window = model.window(level);
  TitsCoreImage out;
  out.level = level;
  out.image = kernel::subgroup_closure(window, std::span<const kernel::Code>{}, cap);
  for (const auto& g : schedule) {
    const auto piece = model.image(model.closure(model.con_set(g)), level, cap);
    out.image = kernel::join(window, out.image, piece, cap);
    out.sizes.push_back(out.image.size());
  }
  return out;
}

}  // namespace tdlc::verify
