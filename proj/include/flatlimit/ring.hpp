#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flatlimit/errors.hpp"

namespace flatlimit {

/// Ordered list of variable names. Position i is exponent slot i of every
/// monomial over the ring; the first variable is the largest in lex and in
/// the grevlex display order.
class Ring {
 public:
  Ring() : names_(std::make_shared<const std::vector<std::string>>()) {}
  explicit Ring(std::vector<std::string> names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i].empty()) throw Error(ErrorCode::JobError, "empty variable name");
      for (std::size_t j = 0; j < i; ++j)
        if (names[i] == names[j]) throw Error(ErrorCode::JobError, "duplicate variable '" + names[i] + "'");
    }
    names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
  }
  Ring(std::initializer_list<std::string> names) : Ring(std::vector<std::string>(names)) {}

  std::size_t size() const noexcept { return names_->size(); }
  const std::vector<std::string>& names() const noexcept { return *names_; }
  const std::string& name(std::size_t i) const { return names_->at(i); }

  std::optional<std::size_t> find(std::string_view name) const {
    const auto it = std::find(names_->begin(), names_->end(), name);
    if (it == names_->end()) return std::nullopt;
    return static_cast<std::size_t>(it - names_->begin());
  }
  std::size_t index(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw Error(ErrorCode::UnknownVariable, "variable '" + std::string(name) + "' is not in the ring");
  }
  bool contains(std::string_view name) const { return find(name).has_value(); }

  /// Ring with the named variables removed, order otherwise preserved.
  Ring without(const std::vector<std::string>& drop) const {
    for (const auto& d : drop) index(d);
    std::vector<std::string> kept;
    for (const auto& n : *names_)
      if (std::find(drop.begin(), drop.end(), n) == drop.end()) kept.push_back(n);
    return Ring(std::move(kept));
  }
  Ring without(const std::string& drop) const { return without(std::vector<std::string>{drop}); }

  /// Ring with `name` prepended (extra variables for elimination go first).
  Ring with_front(const std::string& name) const {
    std::vector<std::string> names{name};
    names.insert(names.end(), names_->begin(), names_->end());
    return Ring(std::move(names));
  }

  Ring renamed(std::string_view from, const std::string& to) const {
    std::vector<std::string> names = *names_;
    names[index(from)] = to;
    return Ring(std::move(names));
  }

  /// A name not present in the ring, derived from `stem`.
  std::string fresh_name(const std::string& stem) const {
    if (!contains(stem)) return stem;
    for (int i = 0;; ++i) {
      std::string candidate = stem + "_" + std::to_string(i);
      if (!contains(candidate)) return candidate;
    }
  }

  friend bool operator==(const Ring& a, const Ring& b) {
    return a.names_ == b.names_ || *a.names_ == *b.names_;
  }

 private:
  std::shared_ptr<const std::vector<std::string>> names_;
};

inline void require_same_ring(const Ring& a, const Ring& b) {
  if (!(a == b)) throw Error(ErrorCode::RingMismatch, "operands live in different rings");
}

}  // namespace flatlimit
