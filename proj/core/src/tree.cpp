#include "cartelscreen/tree.hpp"

#include <algorithm>
#include <cmath>

#include "cartelscreen/errors.hpp"

namespace cartelscreen {
namespace {

double gini(int pos, int total) {
  if (total == 0) return 0;
  const double p1 = static_cast<double>(pos) / total;
  const double p0 = 1.0 - p1;
  return 1.0 - p1 * p1 - p0 * p0;
}

struct Builder {
  const std::vector<std::vector<double>>& x;
  const std::vector<int>& y;
  const TreeOptions& opt;
  Rng* rng;
  int p;
  std::vector<TreeNode> nodes;
  std::vector<std::pair<double, int>> scratch;  // (value, label)

  int build(const std::vector<int>& idx) {
    const int m = static_cast<int>(idx.size());
    int pos = 0;
    for (const int i : idx) pos += y[i];

    const int node_id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    nodes[node_id].value = static_cast<double>(pos) / m;
    if (pos == 0 || pos == m || m < 2 * opt.min_leaf) return node_id;

    const bool subsample = opt.mtry > 0 && opt.mtry < p;
    std::vector<std::size_t> features;
    if (subsample) {
      features = rng->sample_without_replacement(p, opt.mtry);
    } else {
      features.resize(p);
      for (int j = 0; j < p; ++j) features[j] = j;
    }

    // minimize the weighted child impurity; a candidate must undercut the
    // incumbent (initially the parent) by more than 1e-12
    double best_impurity = gini(pos, m);
    int best_feature = -1;
    double best_threshold = 0;

    for (const std::size_t f : features) {
      scratch.clear();
      for (const int i : idx) scratch.emplace_back(x[i][f], y[i]);
      std::sort(scratch.begin(), scratch.end());

      int left_pos = 0;
      for (int s = 1; s < m; ++s) {
        left_pos += scratch[s - 1].second;
        if (scratch[s - 1].first == scratch[s].first) continue;
        if (s < opt.min_leaf || m - s < opt.min_leaf) continue;
        const double impurity =
            (s * gini(left_pos, s) + (m - s) * gini(pos - left_pos, m - s)) / m;
        if (impurity < best_impurity - 1e-12) {
          best_impurity = impurity;
          best_feature = static_cast<int>(f);
          double mid = 0.5 * (scratch[s - 1].first + scratch[s].first);
          if (mid >= scratch[s].first) mid = scratch[s - 1].first;
          best_threshold = mid;
        }
      }
    }
    if (best_feature < 0) return node_id;

    std::vector<int> left, right;
    left.reserve(m);
    right.reserve(m);
    for (const int i : idx) {
      (x[i][best_feature] <= best_threshold ? left : right).push_back(i);
    }
    nodes[node_id].feature = best_feature;
    nodes[node_id].threshold = best_threshold;
    const int l = build(left);
    const int r = build(right);
    nodes[node_id].left = l;
    nodes[node_id].right = r;
    return node_id;
  }
};

ForestModel fit_bootstrap_forest(const std::vector<std::vector<double>>& X,
                                 const std::vector<int>& y, int n_trees,
                                 const TreeOptions& opt, std::uint64_t seed) {
  if (X.empty()) throw InputError("trees: empty training data");
  const std::size_t n = X.size();
  ForestModel forest;
  forest.trees.reserve(n_trees);
  for (int b = 0; b < n_trees; ++b) {
    Rng rng(derive_seed(seed, seed_tag("tree"), static_cast<std::uint64_t>(b)));
    std::vector<std::vector<double>> xb;
    std::vector<int> yb;
    xb.reserve(n);
    yb.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = static_cast<std::size_t>(rng.uniform_int(n));
      xb.push_back(X[k]);
      yb.push_back(y[k]);
    }
    forest.trees.push_back(fit_tree(xb, yb, opt, &rng));
  }
  return forest;
}

}  // namespace

double Tree::predict(const std::vector<double>& x) const {
  int node = 0;
  while (nodes[node].feature >= 0) {
    node = x[nodes[node].feature] <= nodes[node].threshold ? nodes[node].left
                                                           : nodes[node].right;
  }
  return nodes[node].value;
}

Tree fit_tree(const std::vector<std::vector<double>>& X,
              const std::vector<int>& y, const TreeOptions& opt, Rng* rng) {
  if (X.empty() || X.size() != y.size()) {
    throw InputError("tree: bad training data shape");
  }
  const int p = static_cast<int>(X[0].size());
  if (opt.mtry > 0 && opt.mtry < p && rng == nullptr) {
    throw InputError("tree: feature subsampling needs a generator");
  }
  Builder builder{X, y, opt, rng, p, {}, {}};
  std::vector<int> idx(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) idx[i] = static_cast<int>(i);
  builder.build(idx);
  Tree tree;
  tree.nodes = std::move(builder.nodes);
  return tree;
}

double ForestModel::predict(const std::vector<double>& x) const {
  double sum = 0;
  for (const Tree& t : trees) sum += t.predict(x);
  return sum / static_cast<double>(trees.size());
}

ForestModel fit_bagged_trees(const std::vector<std::vector<double>>& X,
                             const std::vector<int>& y,
                             const LearnerConfig& lc, std::uint64_t seed) {
  TreeOptions opt;
  opt.min_leaf = lc.bagging_min_leaf;
  opt.mtry = 0;
  return fit_bootstrap_forest(X, y, lc.bagging_trees, opt, seed);
}

ForestModel fit_random_forest(const std::vector<std::vector<double>>& X,
                              const std::vector<int>& y,
                              const LearnerConfig& lc, std::uint64_t seed) {
  TreeOptions opt;
  opt.min_leaf = lc.forest_min_leaf;
  opt.mtry = lc.forest_mtry > 0
                 ? lc.forest_mtry
                 : static_cast<int>(std::ceil(std::sqrt(
                       static_cast<double>(X.empty() ? 0 : X[0].size()))));
  return fit_bootstrap_forest(X, y, lc.forest_trees, opt, seed);
}

}  // namespace cartelscreen
