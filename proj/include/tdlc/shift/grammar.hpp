#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tdlc/error.hpp"
#include "tdlc/shift/element.hpp"

namespace tdlc::shift {

// Grammar, parts joined by ';':
//   shift:<m>
//   lamp:<i>[*c],<j>[*c],...         finitely supported lamp
//   lamp-ep:<L>|<core>@<offset>|<R>  general eventually periodic lamp, words as digit strings

namespace detail {

inline Pos parse_int(std::string_view s, std::size_t base_pos) {
  if (s.empty()) throw ParseError("expected integer", base_pos);
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw ParseError("expected digits", base_pos + i);
  Pos v = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) throw ParseError("unexpected character", base_pos + i);
    v = v * 10 + (s[i] - '0');
  }
  return neg ? -v : v;
}

inline EPSeq::Word parse_word(std::string_view s, int p, std::size_t base_pos) {
  EPSeq::Word w;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (!std::isdigit(static_cast<unsigned char>(c)) || c - '0' >= p)
      throw ParseError("expected digit below p", base_pos + i);
    w.push_back(c - '0');
  }
  return w;
}

inline std::string word_string(const EPSeq::Word& w) {
  std::string s;
  for (int x : w) s += static_cast<char>('0' + x);
  return s;
}

}  // namespace detail

inline EPSeq parse_lamp(std::string_view text, int p, std::size_t base_pos = 0) {
  if (text.rfind("lamp-ep:", 0) == 0) {
    const std::size_t start = 8;
    const auto bar1 = text.find('|', start);
    const auto bar2 = bar1 == std::string_view::npos ? bar1 : text.find('|', bar1 + 1);
    if (bar2 == std::string_view::npos) throw ParseError("expected <L>|<core@offset>|<R>", base_pos + start);
    const auto mid = text.substr(bar1 + 1, bar2 - bar1 - 1);
    const auto at = mid.find('@');
    if (at == std::string_view::npos) throw ParseError("expected '@' in core", base_pos + bar1 + 1);
    auto left = detail::parse_word(text.substr(start, bar1 - start), p, base_pos + start);
    auto core = detail::parse_word(mid.substr(0, at), p, base_pos + bar1 + 1);
    const Pos offset = detail::parse_int(mid.substr(at + 1), base_pos + bar1 + 2 + at);
    auto right = detail::parse_word(text.substr(bar2 + 1), p, base_pos + bar2 + 1);
    if (left.empty()) throw ParseError("empty left period", base_pos + start);
    if (right.empty()) throw ParseError("empty right period", base_pos + bar2 + 1);
    return EPSeq(p, std::move(left), std::move(core), offset, std::move(right));
  }
  if (text.rfind("lamp:", 0) == 0) {
    std::vector<std::pair<Pos, int>> terms;
    std::size_t i = 5;
    while (i < text.size()) {
      auto comma = text.find(',', i);
      if (comma == std::string_view::npos) comma = text.size();
      const auto item = text.substr(i, comma - i);
      const auto star = item.find('*');
      if (star == std::string_view::npos) {
        terms.emplace_back(detail::parse_int(item, base_pos + i), 1);
      } else {
        const Pos c = detail::parse_int(item.substr(star + 1), base_pos + i + star + 1);
        terms.emplace_back(detail::parse_int(item.substr(0, star), base_pos + i), static_cast<int>(((c % p) + p) % p));
      }
      i = comma + 1;
      if (comma + 1 == text.size()) throw ParseError("trailing comma", base_pos + comma);
    }
    return EPSeq::from_support(p, terms);
  }
  throw ParseError("expected 'lamp:' or 'lamp-ep:'", base_pos);
}

inline ShiftElement parse_element(std::string_view text, int p) {
  ShiftElement x = ShiftElement::identity(p);
  bool saw_lamp = false, saw_shift = false;
  std::size_t i = 0;
  if (text.empty()) throw ParseError("empty element", 0);
  while (i <= text.size()) {
    auto semi = text.find(';', i);
    if (semi == std::string_view::npos) semi = text.size();
    const auto part = text.substr(i, semi - i);
    if (part.rfind("shift:", 0) == 0) {
      if (saw_shift) throw ParseError("duplicate shift part", i);
      x.shift = detail::parse_int(part.substr(6), i + 6);
      saw_shift = true;
    } else if (part.rfind("lamp", 0) == 0) {
      if (saw_lamp) throw ParseError("duplicate lamp part", i);
      if (saw_shift) throw ParseError("lamp part must precede shift part", i);
      x.lamp = parse_lamp(part, p, i);
      saw_lamp = true;
    } else {
      throw ParseError("expected 'shift:' or 'lamp'", i);
    }
    i = semi + 1;
  }
  return x;
}

inline std::string format_lamp(const EPSeq& a) {
  if (a.finitely_supported()) {
    std::string s = "lamp:";
    bool first = true;
    for (const auto& [i, c] : a.support()) {
      if (!first) s += ',';
      first = false;
      s += std::to_string(i);
      if (c != 1) s += "*" + std::to_string(c);
    }
    return s;
  }
  return "lamp-ep:" + detail::word_string(a.left()) + "|" + detail::word_string(a.core()) + "@" +
         std::to_string(a.offset()) + "|" + detail::word_string(a.right());
}

inline std::string format_element(const ShiftElement& x) {
  if (x.lamp.is_zero()) return "shift:" + std::to_string(x.shift);
  std::string s = format_lamp(x.lamp);
  if (x.shift != 0) s += ";shift:" + std::to_string(x.shift);
  return s;
}

}  // namespace tdlc::shift
