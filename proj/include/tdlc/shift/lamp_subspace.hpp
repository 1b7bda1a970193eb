#pragma once

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tdlc/kernel/fp_subspace.hpp"
#include "tdlc/shift/lamp_set.hpp"

namespace tdlc::shift {

/// Compact open subgroup {(a, 0) : a restricted to [-K0, K0] lies in S} of the shift group.
///
/// Always contains W(K0). The interval form (S = lamps vanishing on an interval) is
/// derived from S, never stored separately.
class LampSubspace {
 public:
  explicit LampSubspace(kernel::FpSubspace s) : space_(std::move(s)) {
    if (space_.lo() != -space_.hi()) throw Error("LampSubspace: range must be symmetric");
  }

  /// W(k): lamps vanishing on [-k, k].
  static LampSubspace W(int p, int k) { return LampSubspace(kernel::FpSubspace::zero(p, -k, k)); }
  /// The whole compact lamp group.
  static LampSubspace full(int p) { return LampSubspace(kernel::FpSubspace::full(p, 0, 0)); }
  static LampSubspace vanishing_on(int p, Pos a, Pos b) {
    const Pos m = std::max<Pos>({std::abs(a), std::abs(b), 0});
    return LampSubspace(kernel::FpSubspace::vanishing_on(p, -m, m, a, b));
  }

  int p() const { return space_.p(); }
  int level() const { return static_cast<int>(space_.hi()); }
  const kernel::FpSubspace& space() const { return space_; }

  LampSubspace at_level(int m) const {
    if (m < level()) throw Error("LampSubspace::at_level: cannot shrink");
    return LampSubspace(space_.extended(-m, m));
  }

  /// Interval [a,b] such that this is the set of lamps vanishing on it; an empty interval
  /// (lo > hi) for the full lamp group; nullopt if S is not of that form.
  std::optional<Interval> interval_form() const {
    std::vector<Pos> zero_coords;
    for (Pos i = space_.lo(); i <= space_.hi(); ++i) {
      const auto idx = static_cast<std::size_t>(i - space_.lo());
      bool all_zero = true;
      for (const auto& r : space_.basis()) all_zero = all_zero && r[idx] == 0;
      if (all_zero) zero_coords.push_back(i);
    }
    if (space_.dim() != space_.width() - static_cast<std::int64_t>(zero_coords.size())) return std::nullopt;
    if (zero_coords.empty()) return Interval{1, 0};
    for (std::size_t k = 1; k < zero_coords.size(); ++k)
      if (zero_coords[k] != zero_coords[k - 1] + 1) return std::nullopt;
    return Interval{zero_coords.front(), zero_coords.back()};
  }

  std::optional<LampSet> as_lamp_set() const {
    auto iv = interval_form();
    if (!iv) return std::nullopt;
    if (iv->empty()) return LampSet::full(p());
    return LampSet::vanishing_on(p(), *iv);
  }

  bool contains(const ShiftElement& x) const {
    if (x.shift != 0 || x.p() != p()) return false;
    kernel::FpSubspace::Vec v;
    for (Pos i = space_.lo(); i <= space_.hi(); ++i) v.push_back(x.lamp.at(i));
    return space_.contains(v);
  }

  kernel::SubgroupImage image(int k, std::uint64_t cap = kernel::kDefaultCap) const {
    const int m = std::max(k, level());
    const auto proj = space_.extended(-m, m).projected(-k, k);
    const kernel::LampWindow w(p(), k);
    return kernel::trusted_subgroup(w.id(), proj.codes(w, cap));
  }

  /// σ^s(U), the conjugate by any element with shift component s.
  LampSubspace shifted(Pos s) const {
    const Pos m = level() + std::abs(s);
    const auto moved = space_.shifted(s);
    return LampSubspace(moved.extended(-m, m));
  }

  LampSubspace intersect(const LampSubspace& o) const {
    const int m = std::max(level(), o.level());
    return LampSubspace(at_level(m).space_.intersect(o.at_level(m).space_));
  }

  friend bool operator==(const LampSubspace& a, const LampSubspace& b) {
    const int m = std::max(a.level(), b.level());
    return a.at_level(m).space_ == b.at_level(m).space_;
  }

  /// Uniform random element whose lamp is supported in [-R, R] for R = level + spread.
  ShiftElement random_element(std::mt19937_64& rng, int spread = 4) const {
    const int m = level() + spread;
    const auto ext = space_.extended(-m, m);
    std::uniform_int_distribution<int> coef(0, p() - 1);
    std::vector<std::pair<Pos, int>> terms;
    std::vector<int> v(ext.width(), 0);
    for (const auto& r : ext.basis()) {
      const int c = coef(rng);
      for (std::size_t j = 0; j < r.size(); ++j) v[j] = (v[j] + c * r[j]) % p();
    }
    for (std::size_t j = 0; j < v.size(); ++j)
      if (v[j]) terms.emplace_back(static_cast<Pos>(j) - m, v[j]);
    return ShiftElement::lamp_only(EPSeq::from_support(p(), terms));
  }

  std::string to_string() const {
    if (auto iv = interval_form()) {
      if (iv->empty()) return "full";
      if (*iv->lo == -*iv->hi) return "W(" + std::to_string(*iv->hi) + ")";
      return "vanish:" + std::to_string(*iv->lo) + "," + std::to_string(*iv->hi);
    }
    std::string s = "span@" + std::to_string(level()) + ":";
    for (std::size_t r = 0; r < space_.basis().size(); ++r) {
      if (r) s += ',';
      for (int x : space_.basis()[r]) s += static_cast<char>('0' + x);
    }
    return s;
  }

 private:
  kernel::FpSubspace space_;
};

/// Parses "W(k)", "W:k", "full", "vanish:a,b" or "span@K:<row>,<row>,..." (rows are digit strings of length 2K+1).
inline LampSubspace parse_lamp_subspace(std::string_view text, int p) {
  auto num = [&](std::string_view s, std::size_t pos) { return detail::parse_int(s, pos); };
  if (text == "full") return LampSubspace::full(p);
  if (text.rfind("W(", 0) == 0 && text.back() == ')')
    return LampSubspace::W(p, static_cast<int>(num(text.substr(2, text.size() - 3), 2)));
  if (text.rfind("W:", 0) == 0) return LampSubspace::W(p, static_cast<int>(num(text.substr(2), 2)));
  if (text.rfind("vanish:", 0) == 0) {
    const auto comma = text.find(',', 7);
    if (comma == std::string_view::npos) throw ParseError("expected vanish:a,b", 7);
    return LampSubspace::vanishing_on(p, num(text.substr(7, comma - 7), 7), num(text.substr(comma + 1), comma + 1));
  }
  if (text.rfind("span@", 0) == 0) {
    const auto colon = text.find(':', 5);
    if (colon == std::string_view::npos) throw ParseError("expected span@K:rows", 5);
    const int k = static_cast<int>(num(text.substr(5, colon - 5), 5));
    std::vector<kernel::FpSubspace::Vec> rows;
    std::size_t i = colon + 1;
    while (i < text.size()) {
      auto comma = text.find(',', i);
      if (comma == std::string_view::npos) comma = text.size();
      auto w = detail::parse_word(text.substr(i, comma - i), p, i);
      if (static_cast<int>(w.size()) != 2 * k + 1) throw ParseError("row length must be 2K+1", i);
      rows.push_back(w);
      i = comma + 1;
    }
    return LampSubspace(kernel::FpSubspace(p, -k, k, rows));
  }
  throw ParseError("expected W(k), full, vanish:a,b or span@K:rows", 0);
}

}  // namespace tdlc::shift
