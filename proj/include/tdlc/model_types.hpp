#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tdlc/kernel/window.hpp"

namespace tdlc {

/// Symbolic U_+, U_-, U_0 and the (possibly non-closed) unions U_{--}, U_{++} of a
/// compact open U relative to an element g.
template <class Closed>
struct SymbolicParts {
  Closed plus;
  Closed minus;
  Closed zero;
  Closed minus_minus;
  Closed plus_plus;
};

/// Window images of U_+, U_-, U_0 for levels 0..K, found by intersecting conjugates
/// until two successive horizons agree; U_{--}, U_{++} likewise from growing unions.
struct WindowParts {
  std::vector<kernel::SubgroupImage> plus;
  std::vector<kernel::SubgroupImage> minus;
  std::vector<kernel::SubgroupImage> zero;
  std::vector<kernel::SubgroupImage> minus_minus;
  std::vector<kernel::SubgroupImage> plus_plus;
  bool conclusive = false;
  int horizon_used = 0;
};

/// x = minus * plus with minus ∈ U_-, plus ∈ U_+.
template <class Element>
struct Split {
  Element minus;
  Element plus;
};

/// Result of a factorization attempt; `failure` describes the obstruction.
template <class Element>
struct SplitResult {
  std::optional<Split<Element>> split;
  std::string failure;

  explicit operator bool() const { return split.has_value(); }
};

/// A witness x ∈ (g^j U_- g^{-j} ∩ U) \ U_- for the tidy-below criterion.
template <class Element>
struct BelowWitness {
  Element x;
  int j = 0;
  bool plus_side = false;  ///< true when the witness concerns U_{++} (j >= 0, U_+)
};

}  // namespace tdlc
