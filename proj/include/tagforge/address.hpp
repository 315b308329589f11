#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tagforge/error.hpp"

namespace tagforge {

/// Gorn address: the path of child indices from the root. Stored 0-based;
/// the text form is 1-based and dot separated ("2.2"), with "0" for the root.
class NodeAddress {
 public:
  NodeAddress() = default;
  explicit NodeAddress(std::vector<std::size_t> path) : path_(std::move(path)) {}

  static NodeAddress root() { return {}; }

  static NodeAddress parse(std::string_view text) {
    NodeAddress out;
    if (text.empty() || text == "0" || text == "ε") return out;
    std::size_t start = 0;
    while (start <= text.size()) {
      auto dot = text.find('.', start);
      auto part = text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
      if (part.empty()) throw TagError(ErrorKind::syntax, "bad address '" + std::string(text) + "'");
      std::size_t value = 0;
      for (char c : part) {
        if (c < '0' || c > '9') throw TagError(ErrorKind::syntax, "bad address '" + std::string(text) + "'");
        value = value * 10 + static_cast<std::size_t>(c - '0');
      }
      if (value == 0) throw TagError(ErrorKind::syntax, "address components are 1-based: '" + std::string(text) + "'");
      out.path_.push_back(value - 1);
      if (dot == std::string_view::npos) break;
      start = dot + 1;
    }
    return out;
  }

  std::string str() const {
    if (path_.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < path_.size(); ++i) {
      if (i) out += '.';
      out += std::to_string(path_[i] + 1);
    }
    return out;
  }

  const std::vector<std::size_t>& path() const noexcept { return path_; }
  std::size_t depth() const noexcept { return path_.size(); }
  bool is_root() const noexcept { return path_.empty(); }

  NodeAddress child(std::size_t index) const {
    auto p = path_;
    p.push_back(index);
    return NodeAddress(std::move(p));
  }

  NodeAddress parent() const {
    auto p = path_;
    if (!p.empty()) p.pop_back();
    return NodeAddress(std::move(p));
  }

  /// True if this address is `other` or lies below it.
  bool within(const NodeAddress& other) const {
    if (other.path_.size() > path_.size()) return false;
    for (std::size_t i = 0; i < other.path_.size(); ++i)
      if (path_[i] != other.path_[i]) return false;
    return true;
  }

  friend auto operator<=>(const NodeAddress&, const NodeAddress&) = default;
  friend bool operator==(const NodeAddress&, const NodeAddress&) = default;

 private:
  std::vector<std::size_t> path_;
};

}  // namespace tagforge
