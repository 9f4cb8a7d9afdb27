#pragma once

#include <cstdint>
#include <vector>

namespace cartelscreen {

// Fold id per row, stratified by class: each class is shuffled with its own
// derived stream and dealt round-robin. If some fold misses a class the
// assignment is redrawn with a shifted seed, up to 5 attempts, then raises
// DatasetError.
std::vector<int> stratified_folds(const std::vector<int>& y, int k,
                                  std::uint64_t seed);

}  // namespace cartelscreen
