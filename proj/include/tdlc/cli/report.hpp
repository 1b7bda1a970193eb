#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tdlc/level.hpp"
#include "tdlc/limits/chabauty.hpp"

namespace tdlc::cli {

/// One JSON-lines record. Keys keep insertion order so output is byte-stable.
using Row = nlohmann::ordered_json;

inline Row to_json(const limits::Distance& d) {
  if (d.indistinguishable()) return "indist@" + std::to_string(d.level);
  return Row{{"num", 1}, {"log2_denom", *d.log2_denom}};
}

inline Row to_json(const Level& l) {
  if (l.is_finite()) return l.value();
  return l.to_string();
}

inline bool all_pass(const std::vector<Row>& rows) {
  for (const auto& r : rows)
    if (!r.value("pass", false)) return false;
  return true;
}

inline void write_rows(std::ostream& out, const std::vector<Row>& rows) {
  for (const auto& r : rows) out << r.dump() << '\n';
}

}  // namespace tdlc::cli
