#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tdlc/error.hpp"

namespace tdlc::kernel {

/// Canonical encoding of an element of a window group. Equal elements have equal codes.
using Code = std::uint64_t;

inline constexpr std::uint64_t kDefaultCap = std::uint64_t{1} << 16;

/// Identifies a finite quotient U_ref / B_K: the model family, its parameters and the level.
struct WindowId {
  std::string family;
  int p = 0;
  int n = 0;
  int level = 0;

  friend bool operator==(const WindowId&, const WindowId&) = default;

  std::string to_string() const {
    return family + "(p=" + std::to_string(p) + ",n=" + std::to_string(n) + ",K=" + std::to_string(level) + ")";
  }
};

template <class W>
concept FiniteGroup = requires(const W& w, Code a) {
  { w.id() } -> std::convertible_to<WindowId>;
  { w.mul(a, a) } -> std::same_as<Code>;
  { w.inv(a) } -> std::same_as<Code>;
  { w.identity() } -> std::same_as<Code>;
  { w.order() } -> std::same_as<std::uint64_t>;
  { w.format(a) } -> std::convertible_to<std::string>;
};

/// Canonical byte string of a code (little-endian, 8 bytes).
inline std::vector<std::uint8_t> encode_bytes(Code c) {
  std::vector<std::uint8_t> out(8);
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>((c >> (8 * i)) & 0xffu);
  return out;
}

/// A subgroup of a window group, stored as the sorted set of its codes.
class SubgroupImage {
 public:
  SubgroupImage() = default;
  SubgroupImage(WindowId window, std::vector<Code> elements) : window_(std::move(window)), elements_(std::move(elements)) {
    std::sort(elements_.begin(), elements_.end());
    elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
  }

  const WindowId& window() const { return window_; }
  std::span<const Code> elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool contains(Code c) const { return std::binary_search(elements_.begin(), elements_.end(), c); }

  friend bool operator==(const SubgroupImage& a, const SubgroupImage& b) {
    return a.window_ == b.window_ && a.elements_ == b.elements_;
  }

 private:
  WindowId window_;
  std::vector<Code> elements_;
};

inline void require_same_window(const WindowId& a, const WindowId& b) {
  if (!(a == b)) throw WindowMismatch("mismatched windows: " + a.to_string() + " vs " + b.to_string());
}

/// Smallest subgroup containing `gens`, by saturation under right multiplication.
template <FiniteGroup W>
SubgroupImage subgroup_closure(const W& window, std::span<const Code> gens, std::uint64_t cap = kDefaultCap) {
  std::unordered_set<Code> seen;
  std::deque<Code> queue;
  const Code e = window.identity();
  seen.insert(e);
  queue.push_back(e);
  std::vector<Code> effective;
  for (Code g : gens)
    if (g != e) effective.push_back(g);
  while (!queue.empty()) {
    const Code x = queue.front();
    queue.pop_front();
    for (Code g : effective) {
      const Code y = window.mul(x, g);
      if (seen.insert(y).second) {
        if (seen.size() > cap) throw ResolutionTooFine(cap);
        queue.push_back(y);
      }
    }
  }
  return SubgroupImage(window.id(), std::vector<Code>(seen.begin(), seen.end()));
}

template <FiniteGroup W>
SubgroupImage subgroup_closure(const W& window, std::initializer_list<Code> gens, std::uint64_t cap = kDefaultCap) {
  std::vector<Code> v(gens);
  return subgroup_closure(window, std::span<const Code>(v), cap);
}

/// Builds a SubgroupImage from a set already known to be a subgroup (e.g. a direct enumeration).
inline SubgroupImage trusted_subgroup(const WindowId& id, std::vector<Code> elements) {
  return SubgroupImage(id, std::move(elements));
}

inline bool is_subset(const SubgroupImage& a, const SubgroupImage& b) {
  require_same_window(a.window(), b.window());
  return std::includes(b.elements().begin(), b.elements().end(), a.elements().begin(), a.elements().end());
}

inline std::optional<Code> first_not_in(const SubgroupImage& a, const SubgroupImage& b) {
  for (Code c : a.elements())
    if (!b.contains(c)) return c;
  return std::nullopt;
}

inline SubgroupImage intersect(const SubgroupImage& a, const SubgroupImage& b) {
  require_same_window(a.window(), b.window());
  std::vector<Code> out;
  std::set_intersection(a.elements().begin(), a.elements().end(), b.elements().begin(), b.elements().end(),
                        std::back_inserter(out));
  return SubgroupImage(a.window(), std::move(out));
}

/// Subgroup generated by two subgroups.
template <FiniteGroup W>
SubgroupImage join(const W& window, const SubgroupImage& a, const SubgroupImage& b, std::uint64_t cap = kDefaultCap) {
  require_same_window(a.window(), window.id());
  require_same_window(b.window(), window.id());
  if (is_subset(b, a)) return a;
  if (is_subset(a, b)) return b;
  // Greedy generating set: an element is added only when it lies outside the subgroup
  // generated so far, so at most log2 of the window order closures are computed.
  std::vector<Code> gens;
  SubgroupImage current = subgroup_closure(window, std::span<const Code>{}, cap);
  for (const auto* s : {&a, &b})
    for (Code x : s->elements())
      if (!current.contains(x)) {
        gens.push_back(x);
        current = subgroup_closure(window, std::span<const Code>(gens), cap);
      }
  return current;
}

struct ProductCheck {
  enum class WitnessKind { None, MissingFromProduct, OutsideTarget };
  bool equal = false;
  WitnessKind kind = WitnessKind::None;
  std::optional<Code> witness;
};

/// Decides A·B = T for subgroups A, B, T of one window.
///
/// Uses |AB| = |A||B| / |A ∩ B|. On failure the witness is the smallest element of T
/// missing from AB, or an element of A ∪ B outside T when AB ⊄ T.
template <FiniteGroup W>
ProductCheck product_set_equals(const W& window, const SubgroupImage& a, const SubgroupImage& b,
                                const SubgroupImage& t) {
  require_same_window(a.window(), window.id());
  require_same_window(b.window(), window.id());
  require_same_window(t.window(), window.id());
  ProductCheck out;
  if (auto w = first_not_in(a, t)) {
    out.kind = ProductCheck::WitnessKind::OutsideTarget;
    out.witness = *w;
    return out;
  }
  if (auto w = first_not_in(b, t)) {
    out.kind = ProductCheck::WitnessKind::OutsideTarget;
    out.witness = *w;
    return out;
  }
  const auto common = intersect(a, b).size();
  const auto product_size = (static_cast<unsigned __int128>(a.size()) * b.size()) / common;
  if (product_size == t.size()) {
    out.equal = true;
    return out;
  }
  for (Code x : t.elements()) {
    bool found = false;
    for (Code y : a.elements()) {
      if (b.contains(window.mul(window.inv(y), x))) {
        found = true;
        break;
      }
    }
    if (!found) {
      out.kind = ProductCheck::WitnessKind::MissingFromProduct;
      out.witness = x;
      return out;
    }
  }
  return out;  // unreachable for genuine subgroups
}

/// Materializes the product set A·B.
template <FiniteGroup W>
std::vector<Code> product_set(const W& window, const SubgroupImage& a, const SubgroupImage& b,
                              std::uint64_t cap = kDefaultCap) {
  std::unordered_set<Code> out;
  for (Code x : a.elements())
    for (Code y : b.elements()) {
      out.insert(window.mul(x, y));
      if (out.size() > cap) throw ResolutionTooFine(cap);
    }
  std::vector<Code> v(out.begin(), out.end());
  std::sort(v.begin(), v.end());
  return v;
}

/// [U : V] for V ⊆ U.
inline std::uint64_t index(const SubgroupImage& u, const SubgroupImage& v) {
  require_same_window(u.window(), v.window());
  if (auto w = first_not_in(v, u))
    throw ContainmentError("index: V is not contained in U; witness code " + std::to_string(*w));
  return u.size() / v.size();
}

}  // namespace tdlc::kernel
