#pragma once

#include <compare>
#include <string>
#include <string_view>

#include "tagforge/error.hpp"

namespace tagforge {

/// Label of a derivation or dependency arc: a numbered actant, ATTR for
/// attributes, or S for clause adjunction (whose direction is inverted when
/// reading off dependencies).
struct ArcLabel {
  enum class Kind { actant, attr, s };

  Kind kind = Kind::attr;
  int index = 0;  // actant number, >= 1; 0 otherwise

  static ArcLabel actant(int i) { return {Kind::actant, i}; }
  static ArcLabel attr() { return {Kind::attr, 0}; }
  static ArcLabel s() { return {Kind::s, 0}; }

  bool is_actant() const { return kind == Kind::actant; }

  static ArcLabel parse(std::string_view text) {
    if (text == "ATTR") return attr();
    if (text == "S") return s();
    int value = 0;
    if (text.empty()) throw TagError(ErrorKind::syntax, "empty arc label");
    for (char c : text) {
      if (c < '0' || c > '9') throw TagError(ErrorKind::syntax, "bad arc label '" + std::string(text) + "'");
      value = value * 10 + (c - '0');
    }
    if (value < 1) throw TagError(ErrorKind::syntax, "actant labels start at 1");
    return actant(value);
  }

  std::string str() const {
    switch (kind) {
      case Kind::actant: return std::to_string(index);
      case Kind::attr: return "ATTR";
      case Kind::s: return "S";
    }
    return "?";
  }

  friend auto operator<=>(const ArcLabel&, const ArcLabel&) = default;
  friend bool operator==(const ArcLabel&, const ArcLabel&) = default;
};

}  // namespace tagforge
