#pragma once

#include <cstdint>
#include <vector>

#include "cartelscreen/config.hpp"
#include "cartelscreen/rng.hpp"

namespace cartelscreen {

struct TreeNode {
  int feature = -1;      // -1 marks a leaf
  double threshold = 0;  // x[feature] <= threshold goes left
  int left = -1;
  int right = -1;
  double value = 0;  // class-1 fraction at a leaf
};

struct Tree {
  std::vector<TreeNode> nodes;
  double predict(const std::vector<double>& x) const;
};

struct TreeOptions {
  int min_leaf = 1;
  int mtry = 0;  // per-split feature subsample; 0 or >= p means all features
};

// CART with Gini impurity and exhaustive search over midpoint thresholds.
// A split must beat the incumbent by more than 1e-12 weighted-impurity
// improvement, so ties resolve to the lowest (feature, threshold) in scan
// order. When mtry is effective (> 0 and < p) each split draws its feature
// subset from rng; otherwise rng is never consumed.
Tree fit_tree(const std::vector<std::vector<double>>& X,
              const std::vector<int>& y, const TreeOptions& opt,
              Rng* rng = nullptr);

struct ForestModel {
  std::vector<Tree> trees;
  double predict(const std::vector<double>& x) const;  // mean over trees
};

// B bootstrap trees over all features.
ForestModel fit_bagged_trees(const std::vector<std::vector<double>>& X,
                             const std::vector<int>& y,
                             const LearnerConfig& lc, std::uint64_t seed);

// B bootstrap trees with a per-split feature subsample of ceil(sqrt(p)).
ForestModel fit_random_forest(const std::vector<std::vector<double>>& X,
                              const std::vector<int>& y,
                              const LearnerConfig& lc, std::uint64_t seed);

}  // namespace cartelscreen
