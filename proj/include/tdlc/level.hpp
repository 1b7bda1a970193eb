#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>

namespace tdlc {

/// Position of an element in a model's filtration B_0 ⊇ B_1 ⊇ ... with ∩ B_k = {1}.
///
/// `outside()` means not even in B_0, `infinity()` is reserved for the identity.
/// Infinity is a separate state, not a large integer.
class Level {
 public:
  enum class Kind : std::uint8_t { Outside, Finite, Infinite };

  static Level outside() { return Level(Kind::Outside, 0); }
  static Level infinity() { return Level(Kind::Infinite, 0); }
  static Level at(std::int64_t k) { return Level(Kind::Finite, k < 0 ? 0 : k); }

  Kind kind() const { return kind_; }
  bool is_infinite() const { return kind_ == Kind::Infinite; }
  bool is_outside() const { return kind_ == Kind::Outside; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  std::int64_t value() const { return value_; }

  /// True when the element lies in B_k.
  bool at_least(std::int64_t k) const {
    switch (kind_) {
      case Kind::Infinite: return true;
      case Kind::Outside: return false;
      case Kind::Finite: return value_ >= k;
    }
    return false;
  }

  friend bool operator==(const Level&, const Level&) = default;
  friend std::strong_ordering operator<=>(const Level& a, const Level& b) {
    if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
    return a.value_ <=> b.value_;
  }

  std::string to_string() const {
    switch (kind_) {
      case Kind::Infinite: return "inf";
      case Kind::Outside: return "outside";
      case Kind::Finite: return std::to_string(value_);
    }
    return "?";
  }

  friend std::ostream& operator<<(std::ostream& os, const Level& l) { return os << l.to_string(); }

 private:
  Level(Kind kind, std::int64_t v) : kind_(kind), value_(v) {}
  Kind kind_;
  std::int64_t value_;
};

inline Level min(const Level& a, const Level& b) { return a < b ? a : b; }

/// Three-valued verdict for semi-decisions.
enum class Verdict : std::uint8_t { False, True, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

}  // namespace tdlc
