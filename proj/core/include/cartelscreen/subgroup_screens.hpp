#pragma once

#include <array>
#include <string>
#include <vector>

#include "cartelscreen/classical_screens.hpp"

namespace cartelscreen {

// All 12 classical screens over every offer subgroup of sizes 3 and 4,
// summarized per tender by min/max/mean/median across subgroups. Layout:
// k in {3,4} outer, then screen in kClassicalNames order, then the four
// statistics, giving 2*12*4 = 96 cells named sub{k}_{screen}_{stat}.
inline constexpr int kSubgroupFeatureCount = 96;

const std::vector<std::string>& subgroup_names();

struct SubgroupSummary {
  std::array<ScreenValue, kSubgroupFeatureCount> values{};
};

// All C(n,k) index combinations in lexicographic order; empty when n < k.
std::vector<std::vector<double>> enumerate_subgroups(
    const std::vector<double>& prices, int k);

// cap bounds C(n,4); beyond it the tender is refused with ResourceError.
SubgroupSummary subgroup_summary(const std::vector<double>& prices,
                                 long long cap = 2000000);

}  // namespace cartelscreen
