#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace zipshoe {

/// One pass/fail entry. `margin` is positive when the check holds with room
/// to spare and negative by the amount of the violation.
struct CheckItem {
  std::string name;
  bool passed = true;
  double margin = 0.0;
  std::string witness;
};

struct Report {
  std::vector<CheckItem> items;

  bool passed() const {
    return std::all_of(items.begin(), items.end(), [](const CheckItem& c) { return c.passed; });
  }
  const CheckItem* find(const std::string& name) const {
    for (const auto& c : items) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
  std::vector<const CheckItem*> failures() const {
    std::vector<const CheckItem*> out;
    for (const auto& c : items) {
      if (!c.passed) out.push_back(&c);
    }
    return out;
  }
};

}  // namespace zipshoe
