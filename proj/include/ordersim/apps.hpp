#pragma once

#include <vector>

#include "ordersim/model.hpp"

namespace ordersim {

struct RuleMatch {
  const AppRule* rule = nullptr;
  const RuleVariant* variant = nullptr;
};

// The 23 built-in automation rules with their declared message paths.
const std::vector<AppRule>& builtin_catalog();

// Rules whose trigger source and event name match and whose value predicate
// (if any) holds. Result preserves catalog order.
std::vector<RuleMatch> match_rules(const EventSpec& event, const std::vector<AppRule>& rules);

}  // namespace ordersim
